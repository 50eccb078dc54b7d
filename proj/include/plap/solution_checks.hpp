#pragma once
/// Checks that hold only on solutions of  -Lap_p u = f(u): the identity that
/// trades (Lap_p u)^2 for f, its special exponent choice, and the pointwise
/// Moser inequality for w = ln u. Samples are the accepted steps of a
/// shooting trajectory; third derivatives come from the solution jet.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "plap/calculus.hpp"
#include "plap/errors.hpp"
#include "plap/exponents.hpp"
#include "plap/identities.hpp"
#include "plap/jets_operators.hpp"
#include "plap/reports.hpp"
#include "plap/shooting.hpp"
#include "plap/vector_fields.hpp"

namespace plap {

/// A shooting trajectory whose solution jets reproduce the equation.
struct CertifiedSolution {
  RadialProblem problem;
  ShootOutcome shot;
  double r_lo = 1e-2;   // samples stay this far from the pole
  double r_hi = 0.0;    // and below this radius (short of any crossing)
};

/// Largest sampled radius, in units of 1/c, on an exponentially growing
/// warp. Past it the AD divergence of the weighted fields loses digits to
/// cancellation against psi'/psi, although the ODE solution itself is fine.
inline constexpr double kSinhSampleRadius = 30.0;

/// Shoots from u0 and certifies the result: the run must be conclusive and
/// at every sample the order-3 solution jet must satisfy the equation to
/// `tol` relative. Throws PreconditionError otherwise.
inline CertifiedSolution certify_radial_solution(const RadialProblem& pr, double u0, ShootOptions opt = {},
                                                 double tol = 1e-8) {
  if (pr.f.family() == ReactionFamily::Custom) throw CapabilityError("solution jets need a jet-evaluable f");
  opt.record = true;
  CertifiedSolution sol{pr, shoot(pr, u0, opt)};
  if (sol.shot.kind == OutcomeKind::Inconclusive) {
    throw PreconditionError("shooting run is inconclusive: " + sol.shot.reason);
  }
  sol.r_hi = sol.shot.kind == OutcomeKind::CrossedZero ? sol.shot.r_cross * (1.0 - 1e-3) : sol.shot.r_max;
  if (pr.model.primitive() == WarpPrimitive::Sinh) sol.r_hi = std::min(sol.r_hi, kSinhSampleRadius / pr.model.shape());
  for (const auto& q : sol.shot.trajectory) {
    if (q.r < sol.r_lo || q.r > sol.r_hi || q.m == 0.0) continue;
    const auto u = radial_solution_jet<3>(pr, q.r, q.u, q.m);
    const RadialCalculus calc(pr.model, q.r);
    const Jet2 j = calc.jet2(u);
    if (j.grad_norm() < kEpsGrad * std::max(1.0, j.u) && pr.p < 2.0) continue;
    const double lap = p_laplacian(j, pr.p, 0.0);
    const double fu = pr.f(q.u);
    if (std::abs(lap + fu) > tol * (std::abs(lap) + std::abs(fu)) + 1e-300) {
      std::ostringstream os;
      os << "solution jet fails the equation at r=" << q.r << ": Lap_p u=" << lap << " f(u)=" << fu;
      throw PreconditionError(os.str());
    }
  }
  return sol;
}

namespace detail {

/// Visits (calc, jet, point) at every admissible trajectory sample.
template <class Visit>
void for_each_solution_sample(const CertifiedSolution& sol, Visit&& visit, MarginAccumulator* macc,
                              ResidualAccumulator* racc) {
  for (const auto& q : sol.shot.trajectory) {
    if (q.r < sol.r_lo || q.r > sol.r_hi) continue;
    if (q.m == 0.0 || std::abs(q.uprime) < kEpsGrad * std::max(1.0, std::abs(q.u))) {
      if (macc) macc->skip();
      if (racc) racc->skip();
      continue;
    }
    const RadialCalculus calc(sol.problem.model, q.r);
    visit(calc, radial_solution_jet<3>(sol.problem, q.r, q.u, q.m), q);
  }
}

}  // namespace detail

/// Right-hand coefficients of the solution identity for X = u^b |g|^{p-2} g.
struct Basic2Coefficients {
  double c = 0.0;       // c in the field  u^a (nabla_X X - div X X / n) - c u^{a-1} <X, g> X
  double grad2p = 0.0;  // coefficient of u^{a+2b-2} |g|^{2p}
  double f_mult = 0.0;  // f(u) enters as ((n-1)/n)(f_mult f - u f') u^{a+2b-1} |g|^p
};

inline Basic2Coefficients basic2_coefficients(int n, double p, double a, double b) {
  Basic2Coefficients k;
  k.c = combination2_coefficient(n, {p, b, a});
  const double s = b + n * (p - 1.0) * a / ((n - 1.0) * p);
  k.grad2p = (p - 1.0) * a / p * (1.0 - (n - p) * a / ((n - 1.0) * p)) - (n - 1.0) / n * s * s;
  k.f_mult = ((n + 1.0) * p - n) * a / ((n - 1.0) * p);
  return k;
}

/// (a, b) of the special choice for exponent alpha.
inline std::pair<double, double> basic2_special_ab(int n, double p, double alpha) {
  const double d = (n + 1.0) * p - n;
  return {(n - 1.0) * p * alpha / d, -n * (p - 1.0) * alpha / d};
}

/// Coefficient of u^{...}|g|^{2p} in the special identity.
inline double basic2_special_grad2p(int n, double p, double alpha) {
  const double d = (n + 1.0) * p - n;
  return (n - 1.0) * (p - 1.0) * alpha / d * (1.0 - (n - p) * alpha / d);
}

/// Both sides of the general solution identity at one jet.
template <class C>
IdentitySides basic2_sides(const C& calc, const typename C::template Scalar<3>& u, const ReactionTerm& f,
                           const PJetParams& prm) {
  const int n = calc.dim();
  const double lhs = divergence_at(calc, u, {VectorFieldKind::Combination2, prm});
  const Jet2 j = calc.jet2(u);
  const auto k = basic2_coefficients(n, prm.p, prm.a, prm.b);
  const double gp = std::pow(j.grad_norm(), prm.p);
  const Endomorphism e = traceless(endo_X(j, prm), n);
  const double rhs = std::pow(j.u, prm.a) * (trace_square(e) + calc.ricci(field_X(j, prm))) +
                     k.grad2p * std::pow(j.u, prm.a + 2.0 * prm.b - 2.0) * gp * gp +
                     (n - 1.0) / n * (k.f_mult * f(j.u) - j.u * f.derivative(j.u)) *
                         std::pow(j.u, prm.a + 2.0 * prm.b - 1.0) * gp;
  return {lhs, rhs};
}

/// Both sides of the special identity, with its own closed-form exponents.
template <class C>
IdentitySides basic2_special_sides(const C& calc, const typename C::template Scalar<3>& u, const ReactionTerm& f,
                                   double p, double alpha) {
  const int n = calc.dim();
  const auto [a, b] = basic2_special_ab(n, p, alpha);
  const double d = (n + 1.0) * p - n;
  const double lhs = divergence_at(calc, u, {VectorFieldKind::Combination2, {p, b, a}});
  const Jet2 j = calc.jet2(u);
  const PJetParams prm{p, b, a};
  const double gp = std::pow(j.grad_norm(), p);
  const double e0 = -((n + 1.0) * p - 2.0 * n) * alpha / d;
  const double rhs = std::pow(j.u, a) * (trace_square(traceless(endo_X(j, prm), n)) + calc.ricci(field_X(j, prm))) +
                     basic2_special_grad2p(n, p, alpha) * std::pow(j.u, e0 - 2.0) * gp * gp +
                     (n - 1.0) / n * (alpha * f(j.u) - j.u * f.derivative(j.u)) * std::pow(j.u, e0 - 1.0) * gp;
  return {lhs, rhs};
}

inline IdentityReport check_basic2(const CertifiedSolution& sol, double a, double b, double tol = 1e-6) {
  ResidualAccumulator acc("basic2", tol);
  const PJetParams prm{sol.problem.p, b, a};
  detail::for_each_solution_sample(
      sol,
      [&](const RadialCalculus& calc, const Jet<1, 3>& u, const TrajectoryPoint& q) {
        const auto s = basic2_sides(calc, u, sol.problem.f, prm);
        acc.add(s.lhs, s.rhs, [&](std::ostream& os) {
          os << sol.problem.model.name() << " n=" << sol.problem.n() << " p=" << prm.p << " f=" << sol.problem.f.describe()
             << " u0=" << sol.shot.u0 << " a=" << a << " b=" << b << " r=" << q.r;
        });
      },
      nullptr, &acc);
  return acc.finish();
}

/// The special identity on the solution, plus a coefficient audit: the
/// general coefficients at the special (a, b) must reproduce the special
/// ones (c = 0, the |g|^{2p} factor, and f_mult = alpha).
inline IdentityReport check_basic2_special(const CertifiedSolution& sol, double alpha, double tol = 1e-6) {
  ResidualAccumulator acc("basic2_special", tol);
  const int n = sol.problem.n();
  const double p = sol.problem.p;
  const auto [a, b] = basic2_special_ab(n, p, alpha);
  const auto k = basic2_coefficients(n, p, a, b);
  // Residuals are taken relative to max(1, |special|) so that c = 0 is audited absolutely.
  auto audit = [&](const char* what, double general, double special) {
    const double d = std::abs(general - special);
    acc.add_residual(d / std::max(1.0, std::abs(special)), d, [&](std::ostream& os) { os << "coefficient " << what; });
  };
  audit("c", k.c, 0.0);
  audit("grad2p", k.grad2p, basic2_special_grad2p(n, p, alpha));
  audit("f_mult", k.f_mult, alpha);
  detail::for_each_solution_sample(
      sol,
      [&](const RadialCalculus& calc, const Jet<1, 3>& u, const TrajectoryPoint& q) {
        const auto s = basic2_special_sides(calc, u, sol.problem.f, p, alpha);
        acc.add(s.lhs, s.rhs, [&](std::ostream& os) {
          os << sol.problem.model.name() << " n=" << n << " p=" << p << " f=" << sol.problem.f.describe()
             << " u0=" << sol.shot.u0 << " alpha=" << alpha << " r=" << q.r;
        });
      },
      nullptr, &acc);
  return acc.finish();
}

/// Lower Ricci bound constant kappa in Ric >= -(n-1) kappa g for the model.
inline double ricci_lower_kappa(const ManifoldModel& m) {
  switch (m.kind()) {
    case ModelKind::Euclidean:
    case ModelKind::Sphere: return 0.0;
    default: return m.kappa();
  }
}

/// Sides of the pointwise Moser inequality for w = ln u at one jet.
struct MoserSides {
  double lhs = 0.0;    // (1/lambda) L_{p,w} |grad w|^lambda
  double rhs = 0.0;
  double scale = 0.0;  // |lhs| + sum of |rhs terms|
};

template <class C>
MoserSides moser_sides(const C& calc, const typename C::template Scalar<3>& u, double p, double delta0,
                       double lambda, double kappa) {
  const int n = calc.dim();
  const double lhs = divergence_at(calc, u, {VectorFieldKind::MoserField, {p, 0.0, 0.0}, lambda}) / lambda;
  const auto w = log(u);
  const auto gw = calc.template grad<3>(w);
  const auto h = sqrt(dot(gw, gw));  // H = |grad ln u|
  const double H = h.value();
  const double grad_H = calc.frame(calc.template grad<2>(h)).norm();
  const double dplus = std::max(0.0, delta0);
  const double t1 = (1.0 - dplus) * (p - 1.0) * (p - 1.0) / (n - 1.0) * std::pow(H, lambda + p);
  const double t2 = -(n - 1.0) * kappa * std::pow(H, lambda + p - 2.0);
  const double t3 = -p * (p - 1.0) * std::pow(H, lambda + p - 2.0) * grad_H;
  return {lhs, t1 + t2 + t3, std::abs(lhs) + std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

inline InequalityReport check_moser_pointwise(const CertifiedSolution& sol, double delta0, double lambda,
                                              double tol_neg = 1e-8) {
  const auto& pr = sol.problem;
  if (!(delta0 < 1.0)) throw PreconditionError("delta0 must be < 1");
  const auto gp = GradientEstimateParams::make(delta0, pr.p);
  if (!(lambda >= gp.lambda0)) {
    std::ostringstream os;
    os << "lambda=" << lambda << " below lambda0=" << gp.lambda0;
    throw PreconditionError(os.str());
  }
  if (!satisfies_f2(pr.f, delta0, pr.n(), pr.p).at_delta0.holds) {
    throw PreconditionError("f fails the structure condition at delta0=" + std::to_string(delta0));
  }
  const double kappa = ricci_lower_kappa(pr.model);
  MarginAccumulator acc("moser", tol_neg);
  detail::for_each_solution_sample(
      sol,
      [&](const RadialCalculus& calc, const Jet<1, 3>& u, const TrajectoryPoint& q) {
        const auto s = moser_sides(calc, u, pr.p, delta0, lambda, kappa);
        acc.add((s.lhs - s.rhs) / s.scale, [&](std::ostream& os) {
          os << pr.model.name() << " n=" << pr.n() << " p=" << pr.p << " f=" << pr.f.describe() << " u0=" << sol.shot.u0
             << " delta0=" << delta0 << " lambda=" << lambda << " r=" << q.r;
        });
      },
      &acc, nullptr);
  return acc.finish();
}

}  // namespace plap
