#pragma once
/// Quantitative experiments around the log-gradient estimates: the global
/// bound on hyperbolic space and its sharpness, the scale invariance of the
/// local estimate, and weak Harnack / local maximum principle ratios.
///
/// The extremal for the global bound is the horospherical family
///   u(s) = A + int_{-inf}^s exp(beta sqrt(kappa) t) dt,  beta = (n-1)/(p-1),
/// a function of the signed distance s to a horosphere. In that coordinate
/// the metric is ds^2 + exp(-2 sqrt(kappa) s) g_flat, so u is an entire
/// positive p-harmonic function and |grad ln u| increases to beta sqrt(kappa)
/// as s -> infinity. The radial Green-type profile int_r^inf sinh^{-beta} is
/// kept as a diagnostic: it is singular at the pole, its log-gradient
/// decreases from +infinity to the same limit, and it is rejected by the
/// bound check because it does not solve the equation on the whole manifold.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "plap/calculus.hpp"
#include "plap/errors.hpp"
#include "plap/exponents.hpp"
#include "plap/geometry.hpp"
#include "plap/jet.hpp"
#include "plap/jets_operators.hpp"
#include "plap/quadrature.hpp"
#include "plap/rng.hpp"
#include "plap/shooting.hpp"

namespace plap {

// ------------------------------------------------------------ global bound

struct LogGradientProfile {
  std::string family;  // "horospherical", "green" or "constant"
  int n = 2;
  double p = 2.0;
  double kappa = 1.0;
  std::vector<double> grid;
  std::vector<double> u;
  std::vector<double> g;  // |u'| / u
  double sup_g = 0.0;
  double limit_estimate = 0.0;  // Richardson extrapolation in 1/r
  double max_residual = 0.0;    // relative p-harmonicity residual on the grid
  double residual_tol = 1e-9;
  double quad_error = 0.0;      // largest quadrature error estimate (relative)
  bool certified = false;       // max_residual <= residual_tol
  bool global = false;          // solves the equation on the whole manifold
  std::string note;
};

/// beta sqrt(kappa): the limiting log-gradient of both hyperbolic profiles.
inline double extremal_rate(int n, double p, double kappa) { return (n - 1.0) / (p - 1.0) * std::sqrt(kappa); }

/// Default tail radius: the profiles have converged to e^{-40} there.
inline double default_tail(int n, double p, double kappa) { return 40.0 / extremal_rate(n, p, kappa); }

/// `count` equally spaced radii in (0, r_tail].
inline std::vector<double> tail_grid(double r_tail, int count = 400) {
  if (!(r_tail > 0.0) || count < 2) throw InputError("tail grid needs r_tail > 0 and at least two points");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = r_tail * (k + 1.0) / count;
  return g;
}

namespace detail {

inline void check_profile_args(int n, double p, double kappa, const std::vector<double>& grid) {
  if (n < 2 || n > 6) throw InputError("profile dimension must be in [2, 6]");
  if (!(p > 1.0)) throw InputError("p must be > 1");
  if (!(kappa > 0.0)) throw InputError("hyperbolic profiles need kappa > 0");
  if (grid.empty()) throw InputError("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) throw InputError("grid must be positive and increasing");
  }
  if (extremal_rate(n, p, kappa) * grid.back() > 600.0) throw InputError("grid reaches past the representable tail");
}

/// Relative residual of (psi^{n-1} |u'|^{p-2} u')' from first-order jets of
/// psi and u', which is the radial p-Laplacian up to the factor psi^{1-n}.
inline double flux_residual(const Jet<1, 1>& psi, const Jet<1, 1>& du, int n, double p, double* signed_lap = nullptr,
                            double* scale_out = nullptr) {
  if (du.value() == 0.0) {
    if (signed_lap) *signed_lap = 0.0;
    if (scale_out) *scale_out = 0.0;
    if (du.d1(0) != 0.0) throw SingularityError("flux residual at a critical point");
    return 0.0;
  }
  const auto w = pow(psi, n - 1.0);
  const auto phi = du.value() > 0.0 ? pow(du, p - 1.0) : -pow(-du, p - 1.0);
  const double d = (w * phi).d1(0);
  const double scale = std::abs(w.d1(0) * phi.value()) + std::abs(w.value() * phi.d1(0));
  if (signed_lap) *signed_lap = d / w.value();
  if (scale_out) *scale_out = scale / w.value();
  return std::abs(d) / (scale + std::numeric_limits<double>::min());
}

/// Linear extrapolation in 1/r from the last grid point and the point
/// nearest half its radius.
inline double richardson_tail(const std::vector<double>& r, const std::vector<double>& g) {
  const std::size_t last = r.size() - 1;
  if (last == 0) return g[0];
  std::size_t half = 0;
  for (std::size_t i = 0; i < last; ++i) {
    if (std::abs(r[i] - 0.5 * r[last]) < std::abs(r[half] - 0.5 * r[last])) half = i;
  }
  return (r[last] * g[last] - r[half] * g[half]) / (r[last] - r[half]);
}

inline void finish_profile(LogGradientProfile& pr) {
  pr.sup_g = *std::max_element(pr.g.begin(), pr.g.end());
  pr.limit_estimate = richardson_tail(pr.grid, pr.g);
  pr.certified = pr.max_residual <= pr.residual_tol;
}

}  // namespace detail

/// The horospherical extremal on hyperbolic space of curvature -kappa,
/// sampled at signed horosphere distances `grid` (default: tail_grid of
/// default_tail). u is computed by adaptive quadrature of the tail integral.
inline LogGradientProfile hn_p_harmonic_profile(int n, double p, double kappa, std::vector<double> grid = {},
                                                double A = 1.0) {
  if (grid.empty() && n >= 2 && p > 1.0 && kappa > 0.0) grid = tail_grid(default_tail(n, p, kappa));
  detail::check_profile_args(n, p, kappa, grid);
  if (!(A > 0.0)) throw InputError("the additive constant A must be positive");
  LogGradientProfile pr;
  pr.family = "horospherical";
  pr.n = n;
  pr.p = p;
  pr.kappa = kappa;
  pr.grid = grid;
  pr.global = true;
  const double rate = extremal_rate(n, p, kappa), sk = std::sqrt(kappa);
  for (double s : grid) {
    // e^{-rate s} int_{-inf}^s e^{rate t} dt, integrated over the distance back from s.
    // In the variable tau = rate t the integrand is e^{-tau}.
    const auto q = integrate([](double tau) { return std::exp(-tau); }, 0.0, std::numeric_limits<double>::infinity());
    pr.quad_error = std::max(pr.quad_error, q.error / q.value);
    const double scaled = A * std::exp(-rate * s) + q.value / rate;  // u e^{-rate s}
    pr.u.push_back(scaled * std::exp(rate * s));
    pr.g.push_back(1.0 / scaled);
    const auto S = Jet<1, 1>::variable(0, s);
    pr.max_residual = std::max(pr.max_residual, detail::flux_residual(exp(-sk * S), exp(rate * S), n, p));
  }
  detail::finish_profile(pr);
  return pr;
}

/// The radial Green-type profile u(r) = int_r^inf sinh^{-beta}(sqrt(kappa) s) ds.
/// p-harmonic away from the pole only; `global` is false.
inline LogGradientProfile hn_green_profile(int n, double p, double kappa, std::vector<double> grid = {}) {
  if (grid.empty() && n >= 2 && p > 1.0 && kappa > 0.0) grid = tail_grid(default_tail(n, p, kappa));
  detail::check_profile_args(n, p, kappa, grid);
  LogGradientProfile pr;
  pr.family = "green";
  pr.n = n;
  pr.p = p;
  pr.kappa = kappa;
  pr.grid = grid;
  pr.note = "singular at the pole: p-harmonic on M minus a point only";
  const double beta = (n - 1.0) / (p - 1.0), sk = std::sqrt(kappa), rate = beta * sk;
  const auto model = ManifoldModel::hyperbolic(n, kappa);
  for (double r : grid) {
    // J = e^{rate r} u(r) = int_0^inf ((e^{sk t} - e^{-sk (2r + t)}) / 2)^{-beta} dt, taken in tau = rate t
    auto h = [&](double tau) {
      const double t = tau / rate;
      return std::pow(0.5 * (std::exp(sk * t) - std::exp(-sk * (2.0 * r + t))), -beta) / rate;
    };
    const auto q1 = integrate(h, 0.0, 1.0);
    const auto q2 = integrate(h, 1.0, std::numeric_limits<double>::infinity());
    const double J = q1.value + q2.value;
    pr.quad_error = std::max(pr.quad_error, (q1.error + q2.error) / J);
    pr.u.push_back(J * std::exp(-rate * r));
    pr.g.push_back(std::pow(0.5 * (1.0 - std::exp(-2.0 * sk * r)), -beta) / J);
    const auto R = Jet<1, 1>::variable(0, r);
    const auto psi = model.psi(R);
    pr.max_residual = std::max(pr.max_residual, detail::flux_residual(psi, -pow(sk * psi, -beta), n, p));
  }
  detail::finish_profile(pr);
  return pr;
}

/// A constant solution: g = 0, valid on any model (including kappa = 0).
inline LogGradientProfile constant_log_profile(int n, double p, double kappa, const std::vector<double>& grid,
                                               double c = 1.0) {
  if (!(c > 0.0)) throw InputError("constant must be positive");
  if (!(p > 1.0) || n < 2 || !(kappa >= 0.0) || grid.empty()) throw InputError("invalid constant profile arguments");
  LogGradientProfile pr;
  pr.family = "constant";
  pr.n = n;
  pr.p = p;
  pr.kappa = kappa;
  pr.grid = grid;
  pr.u.assign(grid.size(), c);
  pr.g.assign(grid.size(), 0.0);
  pr.global = true;
  detail::finish_profile(pr);
  return pr;
}

struct GlobalBoundReport {
  int n = 2;
  double p = 2.0;
  double kappa = 1.0;
  double delta0 = 0.0;
  double bound = 0.0;           // (n-1)/(p-1) sqrt(kappa / (1 - delta0^+))
  double sup_g = 0.0;
  double margin = 0.0;          // (bound - sup_g) / max(bound, tiny)
  double limit_estimate = 0.0;
  double attainment = 0.0;      // limit_estimate / bound
  double rel_tol = 1e-6;
  double sharp_fraction = 0.99;
  bool sharp = false;
  bool pass = false;
};

/// Tests sup g <= bound (1 + rel_tol) on a certified entire solution of the
/// homogeneous equation (f = 0 satisfies the structure condition for every
/// delta0 < 1). Sharpness is flagged when the tail reaches 99% of the bound.
inline GlobalBoundReport global_bound_check(const LogGradientProfile& prof, int n, double p, double kappa, double delta0,
                                            double rel_tol = 1e-6) {
  if (prof.n != n || prof.p != p || prof.kappa != kappa) throw InputError("profile was built for other (n, p, kappa)");
  if (!(delta0 < 1.0)) throw PreconditionError("delta0 must be < 1");
  if (!prof.certified) {
    std::ostringstream os;
    os << "profile not certified: p-harmonicity residual " << prof.max_residual << " > " << prof.residual_tol;
    throw PreconditionError(os.str());
  }
  if (!prof.global) throw PreconditionError("profile does not solve the equation on the whole manifold (" + prof.note + ")");
  GlobalBoundReport rep;
  rep.n = n;
  rep.p = p;
  rep.kappa = kappa;
  rep.delta0 = delta0;
  rep.rel_tol = rel_tol;
  rep.bound = (n - 1.0) / (p - 1.0) * std::sqrt(kappa / (1.0 - std::max(0.0, delta0)));
  rep.sup_g = prof.sup_g;
  rep.margin = (rep.bound - rep.sup_g) / std::max(rep.bound, std::numeric_limits<double>::min());
  rep.limit_estimate = prof.limit_estimate;
  rep.attainment = rep.bound > 0.0 ? rep.limit_estimate / rep.bound : (rep.limit_estimate == 0.0 ? 1.0 : 0.0);
  rep.pass = rep.sup_g <= rep.bound * (1.0 + rel_tol);
  rep.sharp = rep.limit_estimate >= rep.sharp_fraction * rep.bound;
  return rep;
}

// ----------------------------------------------------------- local scaling

/// Explicit positive p-harmonic families on Euclidean balls B_R:
///  * Affine:       u = 1 + x_1 / R
///  * Fundamental:  u = |x - x0|^{(p-n)/(p-1)} with x0 = 3R e_1
enum class LocalFamily { Affine, Fundamental };

inline std::string to_string(LocalFamily f) { return f == LocalFamily::Affine ? "affine" : "fundamental"; }

inline LocalFamily local_family_from_string(const std::string& s) {
  if (s == "affine") return LocalFamily::Affine;
  if (s == "fundamental") return LocalFamily::Fundamental;
  throw InputError("unknown local family '" + s + "'");
}

struct LocalScalingPoint {
  double R = 1.0;
  double quantity = 0.0;      // R sup_{B_{R/4}} |grad ln u|
  double max_residual = 0.0;  // relative p-harmonicity residual at the samples
  std::uint64_t samples = 0;
};

struct LocalScalingReport {
  std::string family;
  int n = 2;
  double p = 2.0;
  std::vector<LocalScalingPoint> points;
  double sup_quantity = 0.0;
  double slope = 0.0;  // of log quantity against log R
  double slope_tol = 0.05;
  double residual_tol = 1e-9;
  bool finite = false;
  bool stable = false;
  bool certified = false;
  bool pass = false;
};

namespace detail {

template <int N, class T>
T local_family_eval(LocalFamily fam, double p, double R, const std::array<T, N>& x) {
  if (fam == LocalFamily::Affine) return 1.0 + x[0] / R;
  const double k = (p - N) / (p - 1.0);
  T d2 = (x[0] - 3.0 * R) * (x[0] - 3.0 * R);
  for (int i = 1; i < N; ++i) d2 += x[i] * x[i];
  return pow(d2, 0.5 * k);
}

template <int N>
std::array<double, N> ball_point(SampleRng& rng, double radius, bool on_sphere) {
  std::array<double, N> v;
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& c : v) {
      c = rng.normal();
      norm += c * c;
    }
  } while (norm == 0.0);
  const double rho = radius * (on_sphere ? 1.0 : std::pow(rng.uniform(), 1.0 / N)) / std::sqrt(norm);
  for (auto& c : v) c *= rho;
  return v;
}

}  // namespace detail

/// Computes R sup_{B_{R/4}} |grad ln u| for each R over a deterministic point
/// set (the 2n axis points of the sphere of radius R/4, then seeded samples
/// split between that sphere and the ball), certifying p-harmonicity at every
/// point and positivity on B_R. Stable means the log-log slope against R is
/// within slope_tol.
inline LocalScalingReport local_scaling_check(LocalFamily fam, int n, double p, const std::vector<double>& radii,
                                              std::uint64_t samples = 2000, std::uint64_t seed = 42,
                                              double slope_tol = 0.05, double residual_tol = 1e-9) {
  if (!(p > 1.0)) throw InputError("p must be > 1");
  if (n < 2 || n > 6) throw InputError("dimension must be in [2, 6]");
  if (fam == LocalFamily::Fundamental && p == n) throw InputError("fundamental family needs p != n");
  if (radii.empty()) throw InputError("no radii");
  for (double R : radii) {
    if (!(R > 0.0)) throw InputError("radii must be positive");
  }
  LocalScalingReport rep;
  rep.family = to_string(fam);
  rep.n = n;
  rep.p = p;
  rep.slope_tol = slope_tol;
  rep.residual_tol = residual_tol;
  const std::uint64_t stream = stream_id("local-scaling");
  dispatch_dim(n, [&]<int N>() {
    const FlatCalculus<N> calc;
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      const double R = radii[ri];
      LocalScalingPoint pt;
      pt.R = R;
      double sup_h = 0.0;
      auto visit = [&](const std::array<double, N>& x) {
        // Positivity is required on the open ball: probe 4x pulled slightly inside.
        std::array<double, N> big;
        for (int i = 0; i < N; ++i) big[i] = 4.0 * (1.0 - 1e-6) * x[i];
        if (!(detail::local_family_eval<N>(fam, p, R, big) > 0.0)) {
          throw InputError(rep.family + " member is not positive on its ball");
        }
        std::array<Jet<N, 2>, N> X;
        for (int i = 0; i < N; ++i) X[i] = Jet<N, 2>::variable(i, x[i]);
        const Jet2 j = calc.jet2(detail::local_family_eval<N>(fam, p, R, X));
        if (!(j.u > 0.0)) throw InputError(rep.family + " member is not positive on its ball");
        sup_h = std::max(sup_h, j.grad_norm() / j.u);
        const double gn = j.grad_norm();
        double scale = 0.0;
        for (int i = 0; i < N; ++i) scale += std::abs(j.hess(i, i));
        scale = std::pow(gn, p - 2.0) * (scale + std::abs(p - 2.0) * std::abs(inf_laplacian(j)) / (gn * gn));
        const double lap = p_laplacian(j, p, 0.0);
        pt.max_residual = std::max(pt.max_residual, std::abs(lap) / (scale + std::numeric_limits<double>::min()));
        ++pt.samples;
      };
      for (int i = 0; i < N; ++i) {
        for (double sgn : {-1.0, 1.0}) {
          std::array<double, N> x{};
          x[i] = sgn * R / 4.0;
          visit(x);
        }
      }
      for (std::uint64_t s = 0; s < samples; ++s) {
        SampleRng rng(seed, stream, ri * samples + s);
        visit(detail::ball_point<N>(rng, R / 4.0, s % 2 == 0));
      }
      pt.quantity = R * sup_h;
      rep.points.push_back(pt);
    }
  });
  std::vector<std::pair<double, double>> pts;
  rep.finite = true;
  rep.certified = true;
  for (const auto& pt : rep.points) {
    rep.sup_quantity = std::max(rep.sup_quantity, pt.quantity);
    rep.finite = rep.finite && std::isfinite(pt.quantity) && pt.quantity > 0.0;
    rep.certified = rep.certified && pt.max_residual <= residual_tol;
    pts.emplace_back(pt.R, pt.quantity);
  }
  rep.slope = (rep.finite && pts.size() > 1) ? detail::loglog_slope(pts) : 0.0;
  rep.stable = rep.finite && std::abs(rep.slope) <= slope_tol;
  rep.pass = rep.finite && rep.stable && rep.certified;
  return rep;
}

// ------------------------------------------------- Harnack-type ratios

/// Radial test profiles c (1 + (r/a)^k)^{-m/k}; m = 0 is the constant c.
struct SuperharmonicProfile {
  std::string name = "constant";
  double c = 1.0;
  double a = 1.0;
  double k = 2.0;
  double m = 0.0;

  template <class T>
  T eval(const T& r) const {
    if (m == 0.0) return T(c) + 0.0 * r;
    return c * pow(1.0 + pow(r / a, k), -m / k);
  }
  double eval(double r) const { return m == 0.0 ? c : c * std::pow(1.0 + std::pow(r / a, k), -m / k); }
};

/// Named profiles: "constant" (u = 1), "bump" ((1 + r^2)^{-1/2}), "cap"
/// (a smoothed min(1, 1/r)), "fundamental" ((1 + r^2)^{-(n-p)/(2(p-1))},
/// decaying like the fundamental solution; needs p < n).
inline SuperharmonicProfile named_superharmonic_profile(const std::string& name, int n, double p) {
  if (name == "constant") return {"constant", 1.0, 1.0, 2.0, 0.0};
  if (name == "bump") return {"bump", 1.0, 1.0, 2.0, 1.0};
  if (name == "cap") return {"cap", 1.0, 1.0, 8.0, 1.0};
  if (name == "fundamental") {
    if (!(p < n)) throw InputError("fundamental profile needs p < n");
    return {"fundamental", 1.0, 1.0, 2.0, (n - p) / (p - 1.0)};
  }
  throw InputError("unknown profile '" + name + "'");
}

struct RatioReport {
  std::string id;
  std::string profile;
  std::string model;
  int n = 2;
  double p = 2.0;
  double q = 1.0;
  std::vector<double> radii;
  std::vector<double> ratios;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double band = 1e3;
  double min_superharmonic_margin = 0.0;  // min of -Lap_p u / scale on the certification grid
  double certification_tol = 1e-10;
  bool pass = false;
};

namespace detail {

inline void check_ratio_args(const ManifoldModel& model, double p, double q, const std::vector<double>& radii,
                             double outer_factor) {
  const bool nonneg = model.kind() == ModelKind::Euclidean || model.kind() == ModelKind::Sphere;
  if (!nonneg) throw PreconditionError("Harnack ratios are tested on Euclidean or sphere models only");
  HarnackConfig::make(model.dim(), p, q);
  if (radii.empty()) throw InputError("no radii");
  for (double R : radii) {
    if (!(R > 0.0)) throw InputError("radii must be positive");
    if (outer_factor * R > model.r_max()) throw DomainError("ball exceeds the model's radius");
  }
}

/// Certifies -Lap_p u >= -tol * scale on a log-spaced radial grid up to r_hi.
/// Returns the smallest normalized margin; throws PreconditionError on failure.
inline double certify_superharmonic(const ManifoldModel& model, const SuperharmonicProfile& prof, double p, double r_hi,
                                    double tol) {
  constexpr int kPoints = 2048;
  const double r_lo = std::min(1e-3, 1e-3 * r_hi);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPoints; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, i / (kPoints - 1.0));
    const auto R = Jet<1, 2>::variable(0, r);
    const auto du = partial(prof.eval(R), 0);
    double lap = 0.0, scale = 0.0;
    flux_residual(model.psi(Jet<1, 1>::variable(0, r)), du, model.dim(), p, &lap, &scale);
    const double margin = scale > 0.0 ? -lap / scale : 0.0;
    worst = std::min(worst, margin);
    if (margin < -tol) {
      std::ostringstream os;
      os << "profile " << prof.name << " is not p-superharmonic at r=" << r << ": -Lap_p u=" << -lap << " scale=" << scale;
      throw PreconditionError(os.str());
    }
  }
  return worst;
}

/// int_{B_R} h(u) via |S^{n-1}| int_0^R h(u(r)) psi^{n-1} dr.
template <class H>
double ball_integral(const ManifoldModel& model, const SuperharmonicProfile& prof, double R, H&& h) {
  const int n = model.dim();
  auto f = [&](double r) { return h(prof.eval(r)) * std::pow(model.psi(r), n - 1); };
  return unit_sphere_area(n - 1) * integrate(f, 0.0, R).value;
}

/// Sampled extremum of u on [0, R] (1025 equally spaced radii).
inline std::pair<double, double> radial_minmax(const SuperharmonicProfile& prof, double R) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i <= 1024; ++i) {
    const double v = prof.eval(R * i / 1024.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

inline void finish_ratios(RatioReport& rep) {
  rep.min_ratio = *std::min_element(rep.ratios.begin(), rep.ratios.end());
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.pass = rep.min_ratio > 0.0 && std::isfinite(rep.max_ratio) && rep.max_ratio / rep.min_ratio <= rep.band;
}

}  // namespace detail

/// rho(R) = inf_{B_R} u / (R^{-n/q} ||u||_{L^q(B_2R)}).
inline RatioReport weak_harnack_ratio(const ManifoldModel& model, const SuperharmonicProfile& prof, double p, double q,
                                      const std::vector<double>& radii, double band = 1e3, double cert_tol = 1e-10) {
  detail::check_ratio_args(model, p, q, radii, 2.0);
  RatioReport rep{"weak_harnack", prof.name, model.name(), model.dim(), p, q, radii, {}};
  rep.band = band;
  rep.certification_tol = cert_tol;
  rep.min_superharmonic_margin =
      detail::certify_superharmonic(model, prof, p, 2.0 * *std::max_element(radii.begin(), radii.end()), cert_tol);
  const int n = model.dim();
  for (double R : radii) {
    const double inf_u = detail::radial_minmax(prof, R).first;
    const double lq = std::pow(detail::ball_integral(model, prof, 2.0 * R, [q](double v) { return std::pow(v, q); }), 1.0 / q);
    rep.ratios.push_back(inf_u / (std::pow(R, -n / q) * lq));
  }
  detail::finish_ratios(rep);
  return rep;
}

/// sup_{B_{R/2}} u^{-1} / (V_R^{-1/q} ||u^{-1}||_{L^q(B_R)}).
inline RatioReport local_max_principle_ratio(const ManifoldModel& model, const SuperharmonicProfile& prof, double p,
                                             double q, const std::vector<double>& radii, double band = 1e3,
                                             double cert_tol = 1e-10) {
  detail::check_ratio_args(model, p, q, radii, 1.0);
  RatioReport rep{"local_max_principle", prof.name, model.name(), model.dim(), p, q, radii, {}};
  rep.band = band;
  rep.certification_tol = cert_tol;
  rep.min_superharmonic_margin =
      detail::certify_superharmonic(model, prof, p, *std::max_element(radii.begin(), radii.end()), cert_tol);
  for (double R : radii) {
    const double sup_inv = 1.0 / detail::radial_minmax(prof, 0.5 * R).first;
    const double vol = ball_volume(model, R);
    const double lq = std::pow(detail::ball_integral(model, prof, R, [q](double v) { return std::pow(v, -q); }), 1.0 / q);
    rep.ratios.push_back(sup_inv / (std::pow(vol, -1.0 / q) * lq));
  }
  detail::finish_ratios(rep);
  return rep;
}

}  // namespace plap
