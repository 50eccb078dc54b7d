#pragma once
/// Rotationally symmetric model manifolds  g = dr^2 + psi(r)^2 g_{S^{n-1}}.
///
/// Named models (Euclidean, round sphere, hyperbolic space) and user warped
/// products built from a fixed set of profile primitives. Everything here is
/// a pure function of its inputs.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "plap/errors.hpp"
#include "plap/jet.hpp"
#include "plap/quadrature.hpp"

namespace plap {

enum class ModelKind { Euclidean, Sphere, Hyperbolic, Warped };

/// Warping-profile primitives for user warped products. Each has psi(0) = 0
/// and psi'(0) = 1; `c` is the shape parameter.
enum class WarpPrimitive {
  Linear,    // r
  Sin,       // sin(c r) / c
  Sinh,      // sinh(c r) / c
  Cubic,     // r + c r^3            (c >= 0)
  Rational,  // r / (1 + c r^2)      (c >= 0)
  Tanh,      // tanh(c r) / c
};

struct WarpingJet {
  double psi = 0.0;
  double dpsi = 0.0;
  double ddpsi = 0.0;
};

enum class RicciDirection { Radial, Tangential };

class ManifoldModel {
 public:
  static ManifoldModel euclidean(int dim) { return {ModelKind::Euclidean, dim, 0.0, WarpPrimitive::Linear, 1.0, kInf}; }
  static ManifoldModel sphere(int dim, double kappa) {
    if (!(kappa > 0.0)) throw InputError("sphere model needs kappa > 0");
    return {ModelKind::Sphere, dim, kappa, WarpPrimitive::Sin, std::sqrt(kappa), std::numbers::pi / std::sqrt(kappa)};
  }
  static ManifoldModel hyperbolic(int dim, double kappa) {
    if (!(kappa > 0.0)) throw InputError("hyperbolic model needs kappa > 0");
    return {ModelKind::Hyperbolic, dim, kappa, WarpPrimitive::Sinh, std::sqrt(kappa), kInf};
  }
  /// User warped product. `kappa` is the declared Ricci lower-bound constant
  /// (Ric >= -(n-1) kappa g), which the caller is responsible for.
  static ManifoldModel warped(int dim, WarpPrimitive prim, double c, double kappa, double r_max = kInf) {
    if (prim == WarpPrimitive::Sin || prim == WarpPrimitive::Sinh || prim == WarpPrimitive::Tanh) {
      if (!(c > 0.0)) throw InputError("warping parameter must be positive");
    }
    if ((prim == WarpPrimitive::Cubic || prim == WarpPrimitive::Rational) && c < 0.0) {
      throw InputError("warping parameter must be nonnegative");
    }
    if (prim == WarpPrimitive::Sin) r_max = std::min(r_max, std::numbers::pi / c);
    if (kappa < 0.0) throw InputError("kappa must be nonnegative");
    return {ModelKind::Warped, dim, kappa, prim, c, r_max};
  }
  /// Named model by string identifier: "euclidean", "sphere", "hyperbolic".
  static ManifoldModel named(const std::string& id, int dim, double kappa) {
    if (id == "euclidean") return euclidean(dim);
    if (id == "sphere") return sphere(dim, kappa);
    if (id == "hyperbolic") return hyperbolic(dim, kappa);
    throw InputError("unknown model '" + id + "'");
  }

  ModelKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double kappa() const { return kappa_; }
  double r_max() const { return r_max_; }
  WarpPrimitive primitive() const { return prim_; }
  double shape() const { return c_; }
  std::string name() const {
    switch (kind_) {
      case ModelKind::Euclidean: return "euclidean";
      case ModelKind::Sphere: return "sphere";
      case ModelKind::Hyperbolic: return "hyperbolic";
      case ModelKind::Warped: return "warped";
    }
    return "?";
  }

  /// Below this radius psi and its derivatives come from the Taylor series.
  double series_threshold() const { return 1e-4 * std::max(1.0, kappa_ > 0.0 ? 1.0 / std::sqrt(kappa_) : 1.0); }

  /// The profile evaluated on a plain double or a jet (closed form).
  template <class T>
  T psi(const T& r) const {
    using std::sin;
    using std::sinh;
    switch (prim_) {
      case WarpPrimitive::Linear: return r;
      case WarpPrimitive::Sin: return sin(r * c_) / c_;
      case WarpPrimitive::Sinh: return sinh(r * c_) / c_;
      case WarpPrimitive::Cubic: return r + c_ * (r * r * r);
      case WarpPrimitive::Rational: return r / (1.0 + c_ * (r * r));
      case WarpPrimitive::Tanh: {
        // tanh(x) = 1 - 2 / (exp(2x) + 1)
        using std::exp;
        return (1.0 - 2.0 / (exp(r * (2.0 * c_)) + 1.0)) / c_;
      }
    }
    return r;
  }

  /// Taylor coefficients of psi at the origin, degrees 0..5.
  std::array<double, 6> series_coefficients() const {
    const auto j = psi(Jet<1, 5>::variable(0, 0.0));
    std::array<double, 6> c{};
    for (int k = 0; k < 6; ++k) c[k] = j.coeff(k);
    return c;
  }

  void check_radius(double r) const {
    if (!(r >= 0.0) || !(r < r_max_)) {
      std::ostringstream os;
      os << "radius " << r << " outside [0, " << r_max_ << ") for model " << name();
      throw DomainError(os.str());
    }
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  ManifoldModel(ModelKind kind, int dim, double kappa, WarpPrimitive prim, double c, double r_max)
      : kind_(kind), dim_(dim), kappa_(kappa), prim_(prim), c_(c), r_max_(r_max) {
    if (dim < 2) throw InputError("manifold dimension must be >= 2");
  }

  ModelKind kind_;
  int dim_;
  double kappa_;
  WarpPrimitive prim_;
  double c_;
  double r_max_;
};

/// (psi, psi', psi'') at r. Series branch below the series threshold.
inline WarpingJet warping_jet(const ManifoldModel& model, double r) {
  model.check_radius(r);
  if (r < model.series_threshold()) {
    const auto c = model.series_coefficients();
    WarpingJet w;
    double rk = 1.0;  // r^k
    for (int k = 0; k < 6; ++k) {
      w.psi += c[k] * rk;
      rk *= r;
    }
    rk = 1.0;
    for (int k = 1; k < 6; ++k) {
      w.dpsi += k * c[k] * rk;
      rk *= r;
    }
    rk = 1.0;
    for (int k = 2; k < 6; ++k) {
      w.ddpsi += k * (k - 1) * c[k] * rk;
      rk *= r;
    }
    return w;
  }
  const auto j = model.psi(Jet<1, 2>::variable(0, r));
  return {j.coeff(0), j.coeff(1), 2.0 * j.coeff(2)};
}

/// Ricci curvature of a unit radial or tangential vector at radius r.
/// Radial: -(n-1) psi''/psi. Tangential: -psi''/psi - (n-2)(psi'^2 - 1)/psi^2.
/// At small r the ratios are taken from the series (finite limit at r = 0).
inline double ricci_radial(const ManifoldModel& model, double r, RicciDirection dir) {
  model.check_radius(r);
  const int n = model.dim();
  double pp_over_p = 0.0;   // psi''/psi
  double tang_term = 0.0;   // (psi'^2 - 1)/psi^2
  if (r < model.series_threshold()) {
    // psi = r q(r) with q = sum c_k r^{k-1}; assumes c_0 = c_2 = 0 (smooth metric).
    const auto c = model.series_coefficients();
    double q = 0.0, num = 0.0, dm1 = 0.0, dp1 = 0.0;
    for (int k = 1; k < 6; ++k) q += c[k] * std::pow(r, k - 1);
    for (int k = 3; k < 6; ++k) num += k * (k - 1) * c[k] * std::pow(r, k - 3);
    for (int k = 3; k < 6; ++k) dm1 += k * c[k] * std::pow(r, k - 3);  // (psi'-1)/r^2
    for (int k = 1; k < 6; ++k) dp1 += k * c[k] * std::pow(r, k - 1);
    dp1 += 1.0;  // psi' + 1
    pp_over_p = num / q;
    tang_term = dm1 * dp1 / (q * q);
  } else {
    const auto w = warping_jet(model, r);
    pp_over_p = w.ddpsi / w.psi;
    tang_term = (w.dpsi * w.dpsi - 1.0) / (w.psi * w.psi);
  }
  if (dir == RicciDirection::Radial) return -(n - 1) * pp_over_p;
  return -pp_over_p - (n - 2) * tang_term;
}

/// Area of the unit (k)-sphere S^k in R^{k+1}.
inline double unit_sphere_area(int k) {
  const double m = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(m);
}

/// Vol(B_R) = |S^{n-1}| * int_0^R psi^{n-1}.
inline double ball_volume(const ManifoldModel& model, double R) {
  if (!(R > 0.0) || R > model.r_max()) {
    std::ostringstream os;
    os << "ball radius " << R << " outside (0, " << model.r_max() << "]";
    throw DomainError(os.str());
  }
  const int n = model.dim();
  auto integrand = [&](double s) { return std::pow(model.psi(s), n - 1); };
  const auto q = integrate(integrand, 0.0, R);
  return unit_sphere_area(n - 1) * q.value;
}

struct BishopGromovReport {
  std::vector<double> radii;
  std::vector<double> ratios;  // Vol(B_r) / r^n
  bool non_increasing = true;
  bool constant = true;
};

/// r -> Vol(B_r)/r^n must be non-increasing on models with Ric >= 0.
inline BishopGromovReport bishop_gromov_check(const ManifoldModel& model, const std::vector<double>& radii) {
  const bool nonneg = model.kind() == ModelKind::Euclidean || model.kind() == ModelKind::Sphere ||
                      (model.kind() == ModelKind::Warped && model.kappa() == 0.0);
  if (!nonneg) throw PreconditionError("Bishop-Gromov comparison requires nonnegative Ricci curvature");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw InputError("radii must be strictly increasing");
  }
  BishopGromovReport rep;
  rep.radii = radii;
  const int n = model.dim();
  for (double r : radii) rep.ratios.push_back(ball_volume(model, r) / std::pow(r, n));
  constexpr double kRel = 1e-9;
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) {
    if (rep.ratios[i] > rep.ratios[i - 1] * (1.0 + kRel)) rep.non_increasing = false;
    if (std::abs(rep.ratios[i] - rep.ratios[0]) > kRel * rep.ratios[0]) rep.constant = false;
  }
  return rep;
}

}  // namespace plap
