#pragma once
/// Pointwise calculus on second-order jets (u, grad u, Hess u) in an
/// orthonormal frame: the p-Laplacian, the infinity-Laplacian, the anisotropy
/// operator A_u, the vector field X = u^b |grad u|^{p-2} grad u and its
/// covariant derivative as an endomorphism.

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "plap/errors.hpp"

namespace plap {

/// Critical-point cutoff on |grad u| (relative to the field scale).
inline constexpr double kEpsGrad = 1e-3;

using Vec = Eigen::VectorXd;
using Endomorphism = Eigen::MatrixXd;

/// Local data of a scalar field at a point: value, gradient, Hessian.
struct Jet2 {
  double u = 1.0;
  Vec grad;
  Eigen::MatrixXd hess;

  int dim() const { return static_cast<int>(grad.size()); }
  double grad_norm() const { return grad.norm(); }
};

struct PJetParams {
  double p = 2.0;
  double b = 0.0;
  double a = 0.0;
};

namespace detail {
inline void require_noncritical(const Jet2& j, double eps_grad, const char* what) {
  if (j.grad_norm() < eps_grad) {
    std::ostringstream os;
    os << what << ": |grad u| = " << j.grad_norm() << " below eps_grad = " << eps_grad
       << " (critical point, formula singular)";
    throw SingularityError(os.str());
  }
}
}  // namespace detail

/// <Hess u grad u, grad u>.
inline double inf_laplacian(const Jet2& j) { return j.grad.dot(j.hess * j.grad); }

/// |grad u|^{p-2} Lap u + (p-2) |grad u|^{p-4} Lap_inf u. At critical points
/// the value is 0 for p >= 2 and a SingularityError for p < 2.
inline double p_laplacian(const Jet2& j, double p, double eps_grad = kEpsGrad) {
  const double lap = j.hess.trace();
  if (p == 2.0) return lap;
  const double g = j.grad_norm();
  if (g < eps_grad) {
    if (p >= 2.0) return 0.0;
    detail::require_noncritical(j, eps_grad, "p_laplacian");
  }
  return std::pow(g, p - 2.0) * lap + (p - 2.0) * std::pow(g, p - 4.0) * inf_laplacian(j);
}

/// A_u(v) = v + (p-2) |grad u|^{-2} <v, grad u> grad u.
inline Vec a_operator(const Jet2& j, double p, const Vec& v, double eps_grad = kEpsGrad) {
  detail::require_noncritical(j, eps_grad, "a_operator");
  const double h = j.grad.squaredNorm();
  return v + (p - 2.0) * (v.dot(j.grad) / h) * j.grad;
}

/// Matrix of A_u in the frame.
inline Eigen::MatrixXd a_matrix(const Jet2& j, double p, double eps_grad = kEpsGrad) {
  detail::require_noncritical(j, eps_grad, "a_matrix");
  const int n = j.dim();
  return Eigen::MatrixXd::Identity(n, n) + (p - 2.0) / j.grad.squaredNorm() * (j.grad * j.grad.transpose());
}

/// X = u^b |grad u|^{p-2} grad u.
inline Vec field_X(const Jet2& j, const PJetParams& prm, double eps_grad = kEpsGrad) {
  if (prm.p < 2.0) detail::require_noncritical(j, eps_grad, "field_X");
  const double g = j.grad_norm();
  if (g == 0.0) return Vec::Zero(j.dim());
  return std::pow(j.u, prm.b) * std::pow(g, prm.p - 2.0) * j.grad;
}

/// grad X as an endomorphism, E(Y) = nabla_Y X, i.e. E_ij = d_j X_i:
///   b u^{b-1} |grad u|^{p-2} grad u (x) du
///   + u^b |grad u|^{p-2} (id + (p-2) nu (x) nu) Hess u,   nu = grad u / |grad u|.
inline Endomorphism endo_X(const Jet2& j, const PJetParams& prm, double eps_grad = kEpsGrad) {
  detail::require_noncritical(j, eps_grad, "endo_X");
  const double g = j.grad_norm();
  const double gp2 = std::pow(g, prm.p - 2.0);
  const double ub = std::pow(j.u, prm.b);
  Endomorphism e = prm.b * std::pow(j.u, prm.b - 1.0) * gp2 * (j.grad * j.grad.transpose());
  e += ub * gp2 * (a_matrix(j, prm.p, eps_grad) * j.hess);
  return e;
}

/// div X = b u^{b-1} |grad u|^p + u^b Lap_p u.
inline double div_X(const Jet2& j, const PJetParams& prm, double eps_grad = kEpsGrad) {
  const double g = j.grad_norm();
  return prm.b * std::pow(j.u, prm.b - 1.0) * std::pow(g, prm.p) + std::pow(j.u, prm.b) * p_laplacian(j, prm.p, eps_grad);
}

/// E - (tr E / n) id.
inline Endomorphism traceless(const Endomorphism& e, int n) {
  return e - (e.trace() / n) * Endomorphism::Identity(e.rows(), e.cols());
}

/// tr(E o E), as a matrix-product trace.
inline double trace_square(const Endomorphism& e) { return (e * e).trace(); }

/// |E|^2, as an entrywise square sum.
inline double frobenius_square(const Endomorphism& e) { return e.cwiseAbs2().sum(); }

}  // namespace plap
