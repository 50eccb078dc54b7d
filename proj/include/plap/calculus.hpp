#pragma once
/// Differential calculus on jets, written once for two settings:
///
///  * `FlatCalculus<N>`: a general field on R^N, jets in N variables,
///    vectors in the coordinate frame.
///  * `RadialCalculus`: a radial field u(r) on a warped product, jets in r,
///    vector fields v(r) d/dr stored as a single component.
///
/// Each policy provides grad, div, covariant derivative, and the frame data
/// needed to evaluate closed-form right-hand sides. Vector fields built from
/// a third-order jet of u lose one order per differentiation, so a field
/// built from first derivatives is a second-order jet and its divergence
/// still has a value.

#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "plap/errors.hpp"
#include "plap/geometry.hpp"
#include "plap/jet.hpp"
#include "plap/jets_operators.hpp"

namespace plap {

template <class J, std::size_t M>
std::array<J, M> operator+(const std::array<J, M>& a, const std::array<J, M>& b) {
  std::array<J, M> r;
  for (std::size_t i = 0; i < M; ++i) r[i] = a[i] + b[i];
  return r;
}
template <class J, std::size_t M>
std::array<J, M> operator-(const std::array<J, M>& a, const std::array<J, M>& b) {
  std::array<J, M> r;
  for (std::size_t i = 0; i < M; ++i) r[i] = a[i] - b[i];
  return r;
}
template <int D, int K, std::size_t M>
std::array<Jet<D, K>, M> operator*(const Jet<D, K>& s, const std::array<Jet<D, K>, M>& v) {
  std::array<Jet<D, K>, M> r;
  for (std::size_t i = 0; i < M; ++i) r[i] = s * v[i];
  return r;
}
template <int D, int K, std::size_t M>
std::array<Jet<D, K>, M> operator*(double s, const std::array<Jet<D, K>, M>& v) {
  std::array<Jet<D, K>, M> r;
  for (std::size_t i = 0; i < M; ++i) r[i] = v[i] * s;
  return r;
}

template <int D, int K, std::size_t M>
Jet<D, K> dot(const std::array<Jet<D, K>, M>& a, const std::array<Jet<D, K>, M>& b) {
  Jet<D, K> s;
  for (std::size_t i = 0; i < M; ++i) s += a[i] * b[i];
  return s;
}

template <int K2, int D, int K, std::size_t M>
std::array<Jet<D, K2>, M> truncate(const std::array<Jet<D, K>, M>& v) {
  std::array<Jet<D, K2>, M> r;
  for (std::size_t i = 0; i < M; ++i) r[i] = v[i].template truncate<K2>();
  return r;
}
template <int K2, int D, int K>
Jet<D, K2> truncate(const Jet<D, K>& s) {
  return s.template truncate<K2>();
}

template <int N>
class FlatCalculus {
 public:
  template <int K>
  using Scalar = Jet<N, K>;
  template <int K>
  using Vector = std::array<Jet<N, K>, N>;

  int dim() const { return N; }

  template <int K>
  Vector<K - 1> grad(const Scalar<K>& s) const {
    Vector<K - 1> g;
    for (int i = 0; i < N; ++i) g[i] = partial(s, i);
    return g;
  }

  template <int K>
  Scalar<K - 1> div(const Vector<K>& v) const {
    Scalar<K - 1> d;
    for (int i = 0; i < N; ++i) d += partial(v[i], i);
    return d;
  }

  /// nabla_x y, componentwise sum_j x_j d_j y_i.
  template <int K>
  Vector<K - 1> cov(const Vector<K>& x, const Vector<K>& y) const {
    Vector<K - 1> r;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) r[i] += x[j].template truncate<K - 1>() * partial(y[i], j);
    }
    return r;
  }

  template <int K>
  Scalar<K - 2> laplacian(const Scalar<K>& s) const {
    Scalar<K - 2> l;
    for (int i = 0; i < N; ++i) l += partial(partial(s, i), i);
    return l;
  }

  template <int K>
  Jet2 jet2(const Scalar<K>& u) const {
    static_assert(K >= 2);
    Jet2 j;
    j.u = u.value();
    j.grad.resize(N);
    j.hess.resize(N, N);
    for (int i = 0; i < N; ++i) {
      j.grad(i) = u.d1(i);
      for (int k = 0; k < N; ++k) j.hess(i, k) = u.d2(i, k);
    }
    return j;
  }

  template <int K>
  Vec frame(const Vector<K>& v) const {
    Vec r(N);
    for (int i = 0; i < N; ++i) r(i) = v[i].value();
    return r;
  }

  double ricci(const Vec&) const { return 0.0; }
};

class RadialCalculus {
 public:
  template <int K>
  using Scalar = Jet<1, K>;
  template <int K>
  using Vector = std::array<Jet<1, K>, 1>;

  RadialCalculus(const ManifoldModel& model, double r) : model_(model), r_(r), n_(model.dim()) {
    model.check_radius(r);
    if (!(r > 0.0)) throw DomainError("radial calculus needs r > 0");
    const auto psi = model.psi(Jet<1, 4>::variable(0, r));
    h_ = partial(psi, 0) / psi.truncate<3>();
  }

  int dim() const { return n_; }
  double radius() const { return r_; }
  const ManifoldModel& model() const { return model_; }

  /// The coordinate r as a jet of order K.
  template <int K>
  Scalar<K> coordinate() const {
    return Scalar<K>::variable(0, r_);
  }

  /// psi'/psi as a jet of order 3.
  const Jet<1, 3>& mean_curvature() const { return h_; }

  template <int K>
  Vector<K - 1> grad(const Scalar<K>& s) const {
    return {partial(s, 0)};
  }

  /// div(v d/dr) = v' + (n-1)(psi'/psi) v.
  template <int K>
  Scalar<K - 1> div(const Vector<K>& v) const {
    static_assert(K <= 4);
    return partial(v[0], 0) + (n_ - 1.0) * (h_.truncate<K - 1>() * v[0].template truncate<K - 1>());
  }

  /// nabla_{x d/dr}(y d/dr) = x y' d/dr (radial lines are geodesics).
  template <int K>
  Vector<K - 1> cov(const Vector<K>& x, const Vector<K>& y) const {
    return {x[0].template truncate<K - 1>() * partial(y[0], 0)};
  }

  template <int K>
  Scalar<K - 2> laplacian(const Scalar<K>& s) const {
    static_assert(K <= 5);
    return partial(partial(s, 0), 0) + (n_ - 1.0) * (h_.truncate<K - 2>() * partial(s, 0).template truncate<K - 2>());
  }

  /// Jet2 in the frame (d/dr, tangential unit vectors):
  /// grad = (u', 0, ...), Hess = diag(u'', (psi'/psi) u', ...).
  template <int K>
  Jet2 jet2(const Scalar<K>& u) const {
    static_assert(K >= 2);
    Jet2 j;
    j.u = u.value();
    j.grad = Vec::Zero(n_);
    j.grad(0) = u.d1(0);
    j.hess = Eigen::MatrixXd::Zero(n_, n_);
    j.hess(0, 0) = u.d2(0, 0);
    for (int i = 1; i < n_; ++i) j.hess(i, i) = h_.value() * u.d1(0);
    return j;
  }

  template <int K>
  Vec frame(const Vector<K>& v) const {
    Vec r = Vec::Zero(n_);
    r(0) = v[0].value();
    return r;
  }

  /// Ric(V, V) for V in the frame; only radial vectors occur here.
  double ricci(const Vec& v) const {
    const double tang = v.tail(n_ - 1).squaredNorm();
    return v(0) * v(0) * ricci_radial(model_, r_, RicciDirection::Radial) +
           tang * ricci_radial(model_, r_, RicciDirection::Tangential);
  }

 private:
  ManifoldModel model_;
  double r_;
  int n_;
  Jet<1, 3> h_;
};

// Generic field builders. `C` is a calculus policy; `u` a scalar jet.

template <class C, int K>
auto grad_norm_sq(const C& calc, const typename C::template Scalar<K>& u) {
  const auto g = calc.template grad<K>(u);
  return dot(g, g);
}

namespace detail {
template <class J>
void require_grad(const J& norm_sq, double eps_grad, const char* what) {
  if (!(norm_sq.value() >= eps_grad * eps_grad)) {
    std::ostringstream os;
    os << what << ": |grad u| = " << std::sqrt(std::max(0.0, norm_sq.value())) << " below eps_grad = " << eps_grad;
    throw SingularityError(os.str());
  }
}
}  // namespace detail

/// |grad u|^{p-2} grad u.
template <class C, int K>
auto vf_U(const C& calc, const typename C::template Scalar<K>& u, double p, double eps_grad = kEpsGrad) {
  const auto g = calc.template grad<K>(u);
  const auto h = dot(g, g);
  detail::require_grad(h, eps_grad, "vector field U");
  return pow(h, 0.5 * (p - 2.0)) * g;
}

/// u^b |grad u|^{p-2} grad u.
template <class C, int K>
auto vf_X(const C& calc, const typename C::template Scalar<K>& u, const PJetParams& prm, double eps_grad = kEpsGrad) {
  return pow(u.template truncate<K - 1>(), prm.b) * vf_U<C, K>(calc, u, prm.p, eps_grad);
}

/// A_phi(v) for v of the same order as grad phi.
template <class V>
V apply_A(const V& grad_phi, const V& v, double p) {
  const auto h = dot(grad_phi, grad_phi);
  return v + ((p - 2.0) * dot(v, grad_phi) / h) * grad_phi;
}

/// Closed-form Lap_p u = |g|^{p-2} Lap u + (p-2)|g|^{p-4} <nabla_g g, g>, as a jet.
template <class C, int K>
auto p_laplacian_jet(const C& calc, const typename C::template Scalar<K>& u, double p) {
  const auto g = calc.template grad<K>(u);
  const auto g2 = truncate<K - 2>(g);
  const auto h = dot(g2, g2);
  const auto lap = calc.template laplacian<K>(u);
  const auto inf = dot(calc.template cov<K - 1>(g, g), g2);
  return pow(h, 0.5 * (p - 2.0)) * lap + (p - 2.0) * (pow(h, 0.5 * (p - 4.0)) * inf);
}

/// Closed-form div X = b u^{b-1} |g|^p + u^b Lap_p u, as a jet.
template <class C, int K>
auto div_X_jet(const C& calc, const typename C::template Scalar<K>& u, const PJetParams& prm) {
  const auto u2 = u.template truncate<K - 2>();
  const auto g = truncate<K - 2>(calc.template grad<K>(u));
  const auto h = dot(g, g);
  return prm.b * (pow(u2, prm.b - 1.0) * pow(h, 0.5 * prm.p)) + pow(u2, prm.b) * p_laplacian_jet<C, K>(calc, u, prm.p);
}

}  // namespace plap
