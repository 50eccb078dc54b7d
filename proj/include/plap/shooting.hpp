#pragma once
/// Radial shooting for  -Lap_p u = f(u)  on model manifolds.
///
/// The state is (u, m) with the flux m = psi^{n-1} |u'|^{p-2} u', so
///   m' = -psi^{n-1} f(u),   u' = sign(m) (|m| / psi^{n-1})^{1/(p-1)},
/// which stays integrable through u' = 0 for every p > 1. Integration starts
/// at r0 from the regularized series and hands off to Dormand-Prince 5(4).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plap/errors.hpp"
#include "plap/exponents.hpp"
#include "plap/geometry.hpp"
#include "plap/jet.hpp"
#include "plap/ode.hpp"
#include "plap/reaction.hpp"
#include "plap/reports.hpp"

namespace plap {

struct ShootOptions {
  double horizon = 100.0;          // minimal horizon in r
  double horizon_scale = 1000.0;   // horizon is at least this many intrinsic lengths
  double r0 = 1e-4;                // series hand-off radius
  double event_rtol = 1e-10;       // zero-crossing bracket, relative to r
  double tail_steepening = 1.5;    // Inconclusive when local slope < this times the fitted slope
  bool record = true;              // keep the trajectory
  OdeOptions ode;
};

enum class OutcomeKind { CrossedZero, StayedPositive, Inconclusive };

inline std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::CrossedZero: return "crossed_zero";
    case OutcomeKind::StayedPositive: return "stayed_positive";
    case OutcomeKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct TrajectoryPoint {
  double r = 0.0;
  double u = 0.0;
  double uprime = 0.0;
  double m = 0.0;
};

struct ShootOutcome {
  OutcomeKind kind = OutcomeKind::Inconclusive;
  double u0 = 0.0;
  double r_cross = std::numeric_limits<double>::quiet_NaN();
  double r_max = 0.0;  // radius reached
  double horizon = 0.0;
  double tail_exponent = std::numeric_limits<double>::quiet_NaN();
  double local_exponent = std::numeric_limits<double>::quiet_NaN();
  std::string reason;
  std::vector<TrajectoryPoint> trajectory;
  OdeStats stats;
};

/// The radial problem: model, p and nonlinearity.
struct RadialProblem {
  ManifoldModel model;
  double p = 2.0;
  ReactionTerm f = ReactionTerm::zero();

  int n() const { return model.dim(); }

  /// u' from the flux at radius r.
  double uprime(double r, double m) const {
    if (m == 0.0) return 0.0;
    const double w = std::pow(model.psi(r), n() - 1);
    return std::copysign(std::pow(std::abs(m) / w, 1.0 / (p - 1.0)), m);
  }

  OdeState<2> rhs(double r, const OdeState<2>& y) const {
    const double w = std::pow(model.psi(r), n() - 1);
    return {uprime(r, y[1]), -w * f.eval_extended(y[0])};
  }

  /// (u, m) at r0 from the series about the pole: u' ~ -(f(u0) r / n)^{1/(p-1)},
  /// m ~ -f(u0) int_0^r psi^{n-1}, with the psi''' correction in the integral.
  OdeState<2> series_start(double u0, double r0) const {
    const double f0 = f(u0);
    const int nn = n();
    const double s3 = model.series_coefficients()[3];  // psi = r + s3 r^3 + ...
    const double vol = std::pow(r0, nn) / nn + (nn - 1.0) * s3 * std::pow(r0, nn + 2) / (nn + 2.0);
    const double m = -f0 * vol;
    const double du = (p - 1.0) / p * std::pow(std::abs(f0) / nn, 1.0 / (p - 1.0)) * std::pow(r0, p / (p - 1.0));
    return {u0 - std::copysign(du, f0), m};
  }

  /// Intrinsic length (u0^{p-1} / |f(u0)|)^{1/p}; infinite when f(u0) = 0.
  double intrinsic_length(double u0) const {
    const double f0 = std::abs(f(u0));
    if (f0 == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(std::pow(u0, p - 1.0) / f0, 1.0 / p);
  }
};

namespace detail {

inline void check_problem(const RadialProblem& pr, double u0) {
  if (!(pr.p > 1.0)) throw InputError("p must be > 1");
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw InputError("u0 must be positive and finite");
}

/// Largest radius in (0, r_end] where psi^{n-1} stays below 1e250, so that
/// exponentially warped models never overflow the flux weight.
inline double finite_weight_radius(const RadialProblem& pr, double r_end) {
  auto ok = [&](double r) { return std::pow(pr.model.psi(r), pr.n() - 1) < 1e250; };
  if (ok(r_end)) return r_end;
  double lo = 0.0, hi = r_end;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// Least-squares slope of log u against log r.
inline double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(pts.size());
  for (const auto& [r, u] : pts) {
    const double x = std::log(r), y = std::log(u);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace detail

/// Raw integration from r0 to r_end. Stops at the first zero of u when
/// `stop_at_zero`, returning the bisected crossing radius.
struct RadialRun {
  OdeResult<2> ode;
  std::optional<double> r_cross;
  double max_abs_m = 0.0;
  std::vector<TrajectoryPoint> trajectory;
};

template <class Observe>
RadialRun integrate_radial(const RadialProblem& pr, double u0, double r_end, const ShootOptions& opt,
                           bool stop_at_zero, Observe&& extra) {
  detail::check_problem(pr, u0);
  if (!(r_end > opt.r0)) throw InputError("integration end must exceed the series radius");
  RadialRun run;
  const auto y0 = pr.series_start(u0, opt.r0);
  auto push = [&](double r, const OdeState<2>& y) {
    run.max_abs_m = std::max(run.max_abs_m, std::abs(y[1]));
    if (opt.record) run.trajectory.push_back({r, y[0], pr.uprime(r, y[1]), y[1]});
  };
  push(opt.r0, y0);
  run.ode = integrate_dp45<2>(
      [&](double r, const OdeState<2>& y) { return pr.rhs(r, y); }, opt.r0, y0, r_end, opt.ode,
      [&](const DenseStep<2>& d, double r, const OdeState<2>& y) {
        if (stop_at_zero && y[0] <= 0.0) {
          double lo = d.t0, hi = r;
          while (hi - lo > opt.event_rtol * hi) {
            const double mid = 0.5 * (lo + hi);
            (d(mid)[0] > 0.0 ? lo : hi) = mid;
          }
          run.r_cross = hi;
          push(hi, d(hi));
          return false;
        }
        push(r, y);
        return extra(d, r, y);
      });
  return run;
}

/// Shoots from u(0) = u0 and classifies the trajectory.
inline ShootOutcome shoot(const RadialProblem& pr, double u0, const ShootOptions& opt = {}) {
  detail::check_problem(pr, u0);
  ShootOutcome out;
  out.u0 = u0;
  double horizon = std::max(opt.horizon, opt.horizon_scale * pr.intrinsic_length(u0));
  if (!std::isfinite(horizon)) horizon = opt.horizon;
  horizon = std::min(horizon, pr.model.r_max() - opt.r0);
  horizon = detail::finite_weight_radius(pr, horizon);
  out.horizon = horizon;

  // Log-spaced probes over the last decade for the tail fit.
  constexpr int kProbes = 64;
  std::vector<double> probes(kProbes);
  for (int i = 0; i < kProbes; ++i) probes[i] = horizon * std::pow(10.0, -1.0 + i / (kProbes - 1.0));
  std::vector<std::pair<double, double>> tail;
  std::size_t next = 0;
  auto run = integrate_radial(pr, u0, horizon, opt, true, [&](const DenseStep<2>& d, double r, const OdeState<2>&) {
    while (next < probes.size() && probes[next] <= r) {
      const double u = d(probes[next])[0];
      if (u > 0.0) tail.emplace_back(probes[next], u);
      ++next;
    }
    return true;
  });
  out.stats = run.ode.stats;
  out.r_max = run.r_cross ? *run.r_cross : run.ode.t;
  out.trajectory = std::move(run.trajectory);
  if (run.r_cross) {
    out.kind = OutcomeKind::CrossedZero;
    out.r_cross = *run.r_cross;
    return out;
  }
  if (run.ode.stop != OdeStop::Reached) {
    out.kind = OutcomeKind::Inconclusive;
    out.reason = to_string(run.ode.stop) + " at r=" + std::to_string(run.ode.t);
    return out;
  }
  const double u_end = run.ode.y[0];
  out.local_exponent = horizon * pr.uprime(horizon, run.ode.y[1]) / u_end;
  out.tail_exponent = tail.size() >= 8 ? detail::loglog_slope(tail) : out.local_exponent;
  if (out.local_exponent < opt.tail_steepening * out.tail_exponent && out.local_exponent < -1e-12) {
    out.kind = OutcomeKind::Inconclusive;
    out.reason = "tail steepening at the horizon";
    return out;
  }
  out.kind = OutcomeKind::StayedPositive;
  return out;
}

/// Flux monotonicity along a trajectory for f >= 0: m <= 0 and non-increasing
/// while u > 0. Returns the first violating radius, if any.
inline std::optional<double> flux_monotonicity_violation(const std::vector<TrajectoryPoint>& traj,
                                                         double tol = 1e-14) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj[i].u <= 0.0) break;
    const double scale = tol * std::max(1.0, std::abs(traj[i].m));
    if (traj[i].m > scale) return traj[i].r;
    if (i > 0 && traj[i].m > traj[i - 1].m + scale) return traj[i].r;
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ scans

struct ScanCell {
  double alpha = 0.0;
  double u0 = 0.0;
  OutcomeKind kind = OutcomeKind::Inconclusive;
  double r_cross = std::numeric_limits<double>::quiet_NaN();
  double tail_exponent = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct ScanTable {
  int n = 3;
  double p = 2.0;
  ExtendedReal ps = 0.0;
  std::vector<ScanCell> cells;

  std::size_t count(OutcomeKind k) const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [k](const ScanCell& c) { return c.kind == k; }));
  }
};

/// Shooting over an (alpha, u0) grid for f = t^alpha on R^n.
inline ScanTable liouville_scan(int n, double p, const std::vector<double>& alphas, const std::vector<double>& u0s,
                                const ShootOptions& opt = {}) {
  ScanTable t;
  t.n = n;
  t.p = p;
  t.ps = critical_exponent(n, p);
  ShootOptions o = opt;
  o.record = false;
  for (double a : alphas) {
    for (double u0 : u0s) {
      ScanCell c;
      c.alpha = a;
      c.u0 = u0;
      try {
        const auto s = shoot({ManifoldModel::euclidean(n), p, ReactionTerm::pure_power(a)}, u0, o);
        c.kind = s.kind;
        c.r_cross = s.r_cross;
        c.tail_exponent = s.tail_exponent;
        c.note = s.reason;
      } catch (const std::exception& e) {
        c.kind = OutcomeKind::Inconclusive;
        c.note = e.what();
      }
      t.cells.push_back(c);
    }
  }
  return t;
}

/// Header line stating the scope of a radial scan.
inline constexpr const char* kRadialScopeNote =
    "radial class only: a crossing witnesses nonexistence of positive radial solutions, not of all solutions";

inline void write_scan_csv(std::ostream& os, const ScanTable& t) {
  os.precision(17);
  os << "# " << kRadialScopeNote << "\n";
  os << "alpha,u0,outcome,r_cross\n";
  for (const auto& c : t.cells) {
    os << c.alpha << "," << c.u0 << "," << to_string(c.kind) << ",";
    if (std::isfinite(c.r_cross)) os << c.r_cross;
    os << "\n";
  }
}

inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& traj) {
  os.precision(17);
  os << "r,u,uprime,m\n";
  for (const auto& q : traj) os << q.r << "," << q.u << "," << q.uprime << "," << q.m << "\n";
}

/// Shoots at the critical exponent from the bubble's central value and
/// compares with the closed form on [0, horizon]. The critical trajectory is
/// unstable and fast-decaying tails amplify relative error, hence the tight
/// default tolerances.
inline IdentityReport bubble_match(int n, double p, double lambda, double horizon = 20.0, double tol = 1e-6,
                                   const OdeOptions& ode = {1e-12, 1e-16}) {
  const auto e = emden_params(n, p, lambda);
  ShootOptions o;
  o.horizon = horizon;
  o.horizon_scale = 0.0;
  o.ode = ode;
  const auto s = shoot({ManifoldModel::euclidean(n), p, ReactionTerm::pure_power(e.ps())}, emden_bubble(e, 0.0), o);
  ResidualAccumulator acc("bubble_match", tol);
  if (s.kind == OutcomeKind::CrossedZero) {
    acc.add_residual(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                     [&](std::ostream& os) { os << "crossed zero at r=" << s.r_cross; });
  }
  for (const auto& q : s.trajectory) {
    const double ub = emden_bubble(e, q.r);
    acc.add_residual(std::abs(q.u - ub) / ub, std::abs(q.u - ub), [&](std::ostream& os) {
      os << "n=" << n << " p=" << p << " lambda=" << lambda << " r=" << q.r;
    });
  }
  return acc.finish();
}

// ------------------------------------------------------- sphere scan

struct SphereCell {
  double u0 = 0.0;
  bool positive = true;   // u > 0 on the whole run
  bool completed = true;  // reached the antipodal hand-off radius
  double m_end = 0.0;
  double residual = 0.0;  // |m_end| / max |m|
  bool regular = false;
};

struct SphereScanReport {
  int n = 3;
  double q = 3.0;
  double lambda = 1.0;
  double constant = 1.0;           // lambda^{1/(q-1)}
  bool ricci_condition = false;    // (n-1) >= ((n-1)/n)(q-1) lambda
  bool exponent_condition = false; // q <= (n+2)/(n-2)
  bool strict = false;             // at least one of the two is strict
  bool within_hypotheses = false;
  std::vector<SphereCell> cells;
  std::vector<double> regular_u0;  // regular positive solutions found (roots and regular cells)
  bool unique_constant = false;    // every regular solution is the constant
  double tol = 1e-6;
  std::string flag;
};

namespace detail {

inline SphereCell sphere_cell(const RadialProblem& pr, double u0, const ShootOptions& opt, double tol) {
  SphereCell c;
  c.u0 = u0;
  const double r_end = pr.model.r_max() - opt.r0;
  auto run = integrate_radial(pr, u0, r_end, opt, true, [](const DenseStep<2>&, double, const OdeState<2>&) { return true; });
  c.positive = !run.r_cross.has_value();
  c.completed = c.positive && run.ode.stop == OdeStop::Reached;
  c.m_end = run.r_cross ? run.trajectory.back().m : run.ode.y[1];
  c.residual = run.max_abs_m > 0.0 ? std::abs(c.m_end) / run.max_abs_m : 0.0;
  c.regular = c.completed && c.residual <= tol;
  return c;
}

}  // namespace detail

/// Scans u(0) over `u0s` for  Lap u - lambda u + u^q = 0  on the round unit
/// n-sphere and reports which initial values give regular positive solutions
/// (flux vanishing at the antipode). Sign changes of the antipodal flux are
/// refined by bisection in u0 to `tol`.
inline SphereScanReport bv_sphere_scan(int n, double q, double lambda, const std::vector<double>& u0s,
                                       double tol = 1e-6) {
  if (n < 3) throw InputError("sphere scan needs n >= 3");
  if (!(q > 1.0) || !(lambda > 0.0)) throw InputError("sphere scan needs q > 1 and lambda > 0");
  SphereScanReport rep;
  rep.n = n;
  rep.q = q;
  rep.lambda = lambda;
  rep.tol = tol;
  rep.constant = std::pow(lambda, 1.0 / (q - 1.0));
  const double ric = n - 1.0, need = (n - 1.0) / n * (q - 1.0) * lambda;
  const double qcrit = (n + 2.0) / (n - 2.0);
  rep.ricci_condition = ric >= need;
  rep.exponent_condition = q <= qcrit;
  rep.strict = ric > need || q < qcrit;
  rep.within_hypotheses = rep.ricci_condition && rep.exponent_condition && rep.strict;
  if (!rep.within_hypotheses) rep.flag = "outside theorem hypotheses (exploration)";

  const RadialProblem pr{ManifoldModel::sphere(n, 1.0), 2.0, ReactionTerm::linear_minus_power(q, lambda)};
  ShootOptions opt;
  opt.ode.rtol = 1e-12;
  opt.ode.atol = 1e-14;
  for (double u0 : u0s) rep.cells.push_back(detail::sphere_cell(pr, u0, opt, tol));

  auto add_regular = [&](double u0) {
    for (double v : rep.regular_u0) {
      if (std::abs(v - u0) <= tol * std::max(1.0, u0)) return;
    }
    rep.regular_u0.push_back(u0);
  };
  for (std::size_t i = 0; i < rep.cells.size(); ++i) {
    const auto& c = rep.cells[i];
    if (c.regular) add_regular(c.u0);
    if (i + 1 == rep.cells.size()) break;
    const auto& d = rep.cells[i + 1];
    if (c.regular || d.regular || !(c.m_end * d.m_end < 0.0)) continue;
    double lo = c.u0, hi = d.u0, mlo = c.m_end;
    SphereCell mid_cell;
    while (hi - lo > tol * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      mid_cell = detail::sphere_cell(pr, mid, opt, tol);
      if (mid_cell.m_end * mlo > 0.0) {
        lo = mid;
        mlo = mid_cell.m_end;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    const auto rc = detail::sphere_cell(pr, root, opt, std::sqrt(tol));
    if (rc.completed) add_regular(root);
  }
  std::sort(rep.regular_u0.begin(), rep.regular_u0.end());
  rep.unique_constant = !rep.regular_u0.empty();
  for (double v : rep.regular_u0) {
    if (std::abs(v - rep.constant) > tol * std::max(1.0, rep.constant)) rep.unique_constant = false;
  }
  if (!rep.unique_constant && !rep.regular_u0.empty() && !rep.strict) {
    rep.flag += rep.flag.empty() ? "" : "; ";
    rep.flag += "boundary case: nonconstant regular solutions";
  }
  return rep;
}

// ---------------------------------------------------------- solution jets

/// Taylor jet of the radial solution at r from its state (u, m), obtained by
/// Picard iteration of the flux system in jet arithmetic: each pass fixes one
/// more coefficient, so K passes give the exact order-K expansion.
template <int K>
Jet<1, K> radial_solution_jet(const RadialProblem& pr, double r, double u, double m) {
  if (m == 0.0) throw SingularityError("solution jet needs u' != 0");
  const auto R = Jet<1, K>::variable(0, r);
  const auto w = pow(pr.model.psi(R), pr.n() - 1.0);
  const double sg = m > 0.0 ? 1.0 : -1.0;
  Jet<1, K> uj(u), mj(m);
  for (int it = 0; it < K; ++it) {
    const Jet<1, K - 1> ratio = (sg * mj / w).template truncate<K - 1>();
    const Jet<1, K - 1> up = sg * pow(ratio, 1.0 / (pr.p - 1.0));
    const Jet<1, K - 1> mp = (-(w * pr.f.eval(uj))).template truncate<K - 1>();
    uj = Jet<1, K>(u) + integrate(up);
    mj = Jet<1, K>(m) + integrate(mp);
  }
  return uj;
}

}  // namespace plap
