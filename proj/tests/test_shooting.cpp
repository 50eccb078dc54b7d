#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "plap/shooting.hpp"

using namespace plap;

namespace {

RadialProblem euclid_power(int n, double p, double alpha) {
  return {ManifoldModel::euclidean(n), p, ReactionTerm::pure_power(alpha)};
}

auto always = [](const DenseStep<2>&, double, const OdeState<2>&) { return true; };

}  // namespace

TEST(Ode, HarmonicOscillatorAndDenseOutput) {
  auto rhs = [](double, const OdeState<2>& y) { return OdeState<2>{y[1], -y[0]}; };
  double worst_dense = 0.0;
  auto obs = [&](const DenseStep<2>& d, double, const OdeState<2>&) {
    for (double th : {0.25, 0.5, 0.75}) {
      const double t = d.t0 + th * d.h;
      worst_dense = std::max(worst_dense, std::abs(d(t)[0] - std::cos(t)));
    }
    return true;
  };
  OdeOptions o;
  const auto res = integrate_dp45<2>(rhs, 0.0, {1.0, 0.0}, 10.0, o, obs);
  EXPECT_EQ(res.stop, OdeStop::Reached);
  EXPECT_DOUBLE_EQ(res.t, 10.0);
  EXPECT_NEAR(res.y[0], std::cos(10.0), 1e-9);
  EXPECT_NEAR(res.y[1], -std::sin(10.0), 1e-9);
  EXPECT_LT(worst_dense, 1e-8);
}

TEST(Ode, ErrorTracksTolerance) {
  // Global error of an adaptive order-5 method scales roughly like rtol.
  auto rhs = [](double, const OdeState<2>& y) { return OdeState<2>{y[1], -y[0]}; };
  std::vector<std::pair<double, double>> pts;
  for (double tol = 1e-6; tol >= 1e-10; tol /= 10.0) {
    OdeOptions o;
    o.rtol = tol;
    o.atol = tol * 1e-2;
    const auto res = integrate_dp45<2>(rhs, 0.0, {1.0, 0.0}, 20.0, o, always);
    pts.emplace_back(tol, std::abs(res.y[0] - std::cos(20.0)) + std::abs(res.y[1] + std::sin(20.0)));
  }
  const double slope = detail::loglog_slope(pts);
  EXPECT_GT(slope, 0.7);
  EXPECT_LT(slope, 1.3);
}

TEST(Ode, ObserverStopsAndBadIntervalThrows) {
  auto rhs = [](double, const OdeState<2>& y) { return OdeState<2>{-y[0], 0.0}; };
  int calls = 0;
  const auto res = integrate_dp45<2>(rhs, 0.0, {1.0, 0.0}, 5.0, OdeOptions{}, [&](const auto&, double, const auto&) {
    return ++calls < 3;
  });
  EXPECT_EQ(res.stop, OdeStop::Observer);
  EXPECT_EQ(res.stats.accepted, 3u);
  EXPECT_THROW(integrate_dp45<2>(rhs, 1.0, {1.0, 0.0}, 1.0, OdeOptions{}, always), InputError);
}

TEST(Shooting, SubcriticalScanCrossesEverywhere) {
  const auto t = liouville_scan(3, 2.0, {1.0, 2.0, 3.0, 4.0, 4.5, 4.9}, {0.5, 1.0, 2.0});
  ASSERT_EQ(t.cells.size(), 18u);
  EXPECT_EQ(t.count(OutcomeKind::CrossedZero), 18u);
  for (const auto& c : t.cells) EXPECT_TRUE(std::isfinite(c.r_cross) && c.r_cross > 0.0) << c.alpha << " " << c.u0;
}

TEST(Shooting, CriticalExponentStaysPositiveWithBubbleTail) {
  const auto t = liouville_scan(3, 2.0, {5.0}, {0.5, 1.0, 2.0});
  ASSERT_EQ(t.cells.size(), 3u);
  for (const auto& c : t.cells) {
    EXPECT_EQ(c.kind, OutcomeKind::StayedPositive) << c.u0 << " " << c.note;
    EXPECT_NEAR(c.tail_exponent, -1.0, 0.05) << c.u0;
  }
}

TEST(Shooting, SupercriticalStaysPositive) {
  const auto s = shoot(euclid_power(3, 2.0, 7.0), 1.0);
  EXPECT_EQ(s.kind, OutcomeKind::StayedPositive) << s.reason;
}

TEST(Shooting, NoCriticalExponentWhenPAtLeastN) {
  // n <= p: every positive power crosses, however large.
  for (double a : {2.0, 10.0}) {
    const auto s = shoot(euclid_power(4, 4.0, a), 1.0);
    EXPECT_EQ(s.kind, OutcomeKind::CrossedZero) << a << " " << s.reason;
  }
  EXPECT_EQ(shoot(euclid_power(2, 3.0, 3.0), 1.0).kind, OutcomeKind::CrossedZero);
}

TEST(Shooting, ZeroReactionGivesConstant) {
  const RadialProblem pr{ManifoldModel::hyperbolic(3, 1.0), 2.5, ReactionTerm::zero()};
  const auto s = shoot(pr, 1.7);
  EXPECT_EQ(s.kind, OutcomeKind::StayedPositive);
  ASSERT_FALSE(s.trajectory.empty());
  for (const auto& q : s.trajectory) {
    EXPECT_DOUBLE_EQ(q.u, 1.7);
    EXPECT_EQ(q.m, 0.0);
  }
}

TEST(Shooting, FluxIsMonotoneForNonnegativeF) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto s = shoot(euclid_power(3, p, 1.3), 1.0);
    ASSERT_EQ(s.kind, OutcomeKind::CrossedZero);
    EXPECT_FALSE(flux_monotonicity_violation(s.trajectory).has_value()) << p;
  }
  const RadialProblem hyp{ManifoldModel::hyperbolic(4, 1.0), 1.5, ReactionTerm::pure_power(1.2)};
  const auto s = shoot(hyp, 1.0);
  EXPECT_NE(s.kind, OutcomeKind::Inconclusive) << s.reason;
  EXPECT_FALSE(flux_monotonicity_violation(s.trajectory).has_value());
}

TEST(Shooting, MonotoneViolationIsReported) {
  std::vector<TrajectoryPoint> traj{{0.1, 1.0, 0.0, -1.0}, {0.2, 0.9, 0.0, -0.5}};
  const auto v = flux_monotonicity_violation(traj);
  ASSERT_TRUE(v.has_value());
  EXPECT_DOUBLE_EQ(*v, 0.2);
}

TEST(Shooting, ScalingInvariance) {
  // v(r) = mu^k u(mu r) with k = p / (alpha - p + 1) solves the same equation.
  for (auto [p, alpha] : {std::pair{1.5, 1.8}, {2.0, 3.0}, {3.0, 3.7}}) {
    const double k = p / (alpha - p + 1.0), mu = 2.5;
    const auto pr = euclid_power(3, p, alpha);
    const auto a = shoot(pr, 1.0), b = shoot(pr, std::pow(mu, k));
    ASSERT_EQ(a.kind, OutcomeKind::CrossedZero);
    ASSERT_EQ(b.kind, OutcomeKind::CrossedZero);
    EXPECT_NEAR(b.r_cross * mu / a.r_cross, 1.0, 1e-7) << p;
  }
}

TEST(Shooting, CrossingIsStableUnderToleranceRefinement) {
  const auto pr = euclid_power(3, 2.0, 3.0);
  ShootOptions tight;
  tight.ode.rtol = 1e-12;
  tight.ode.atol = 1e-14;
  const auto a = shoot(pr, 1.0), b = shoot(pr, 1.0, tight);
  EXPECT_NEAR(a.r_cross, b.r_cross, 1e-7 * b.r_cross);
}

TEST(Shooting, Determinism) {
  const auto pr = euclid_power(3, 1.5, 1.8);
  const auto a = shoot(pr, 1.3), b = shoot(pr, 1.3);
  EXPECT_EQ(a.r_cross, b.r_cross);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  std::ostringstream sa, sb;
  write_trajectory_csv(sa, a.trajectory);
  write_trajectory_csv(sb, b.trajectory);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Shooting, HyperbolicHorizonStaysFinite) {
  // sinh^{n-1} overflows near r ~ 240; the run must stop short of that.
  const RadialProblem pr{ManifoldModel::hyperbolic(4, 1.0), 1.5, ReactionTerm::pure_power(1.2)};
  const auto s = shoot(pr, 1.0);
  EXPECT_NE(s.kind, OutcomeKind::Inconclusive) << s.reason;
  EXPECT_LT(s.r_max, 240.0);
  for (const auto& q : s.trajectory) ASSERT_TRUE(std::isfinite(q.m) && std::isfinite(q.u));
}

TEST(Shooting, InputValidation) {
  EXPECT_THROW(shoot(euclid_power(3, 2.0, 3.0), -1.0), InputError);
  EXPECT_THROW(shoot(euclid_power(3, 1.0, 3.0), 1.0), InputError);
}

TEST(Shooting, SeriesStartMatchesBubble) {
  const auto e = emden_params(3, 2.0, 1.0);
  const auto pr = euclid_power(3, 2.0, 5.0);
  const double r0 = 1e-4;
  const auto y = pr.series_start(emden_bubble(e, 0.0), r0);
  EXPECT_NEAR(y[0], emden_bubble(e, r0), 1e-14);
}

TEST(Bubble, MatchesClosedForm) {
  EXPECT_NEAR(emden_bubble(3, 2.0, 1.0, 0.0), std::pow(3.0, 0.25), 1e-9);
  for (auto [n, p, l] : {std::tuple{3, 2.0, 1.0}, {3, 2.0, 2.0}, {4, 2.0, 1.0}, {5, 3.0, 1.0}}) {
    const auto r = bubble_match(n, p, l);
    EXPECT_TRUE(r.pass) << n << " " << p << " " << l << " dev=" << r.max_rel_residual << " " << r.worst_case;
    EXPECT_LE(r.max_rel_residual, 1e-6);
    EXPECT_GT(r.samples, 10u);
  }
}

TEST(Bubble, LooserTolerancesDriftInTheTail) {
  // Documented: the critical trajectory is unstable, so default ODE
  // tolerances are not enough for a 1e-6 match far out.
  const auto loose = bubble_match(4, 1.5, 1.0, 20.0, 1e-6, OdeOptions{1e-8, 1e-10});
  const auto tight = bubble_match(4, 1.5, 1.0);
  EXPECT_GT(loose.max_rel_residual, tight.max_rel_residual);
}

TEST(SphereScan, SubcriticalHasOnlyTheConstant) {
  std::vector<double> u0s;
  for (int i = 1; i <= 30; ++i) u0s.push_back(0.1 * i);
  const auto rep = bv_sphere_scan(3, 3.0, 1.0, u0s);
  EXPECT_TRUE(rep.within_hypotheses);
  EXPECT_TRUE(rep.flag.empty()) << rep.flag;
  ASSERT_EQ(rep.regular_u0.size(), 1u);
  EXPECT_NEAR(rep.regular_u0[0], 1.0, 1e-6);
  EXPECT_TRUE(rep.unique_constant);
}

TEST(SphereScan, CriticalBoundaryIsFlagged) {
  std::vector<double> u0s;
  for (int i = 1; i <= 40; ++i) u0s.push_back(0.1 * i);
  const auto rep = bv_sphere_scan(3, 5.0, 0.75, u0s);
  EXPECT_FALSE(rep.strict);
  EXPECT_FALSE(rep.unique_constant);
  EXPECT_GE(rep.regular_u0.size(), 2u);
  EXPECT_NE(rep.flag.find("nonconstant"), std::string::npos) << rep.flag;
}

TEST(SphereScan, OutsideHypothesesFlag) {
  const auto rep = bv_sphere_scan(3, 6.0, 1.0, {0.5, 1.0, 1.5});
  EXPECT_FALSE(rep.within_hypotheses);
  EXPECT_NE(rep.flag.find("outside"), std::string::npos);
  EXPECT_THROW(bv_sphere_scan(2, 3.0, 1.0, {1.0}), InputError);
}

TEST(Csv, ScanWriterHasScopeNoteAndHeader) {
  const auto t = liouville_scan(3, 2.0, {3.0}, {1.0});
  std::ostringstream os;
  write_scan_csv(os, t);
  std::istringstream is(os.str());
  std::string l1, l2, l3;
  std::getline(is, l1);
  std::getline(is, l2);
  std::getline(is, l3);
  EXPECT_EQ(l1, std::string("# ") + kRadialScopeNote);
  EXPECT_EQ(l2, "alpha,u0,outcome,r_cross");
  EXPECT_EQ(l3.rfind("3,1,crossed_zero,", 0), 0u) << l3;
}

TEST(SolutionJet, SatisfiesTheEquation) {
  const auto pr = euclid_power(3, 2.0, 3.0);
  const auto s = shoot(pr, 1.0);
  int checked = 0;
  for (const auto& q : s.trajectory) {
    if (q.r < 0.05 || q.r > 0.9 * s.r_cross) continue;
    const auto u = radial_solution_jet<3>(pr, q.r, q.u, q.m);
    EXPECT_NEAR(u.coeff(0), q.u, 1e-15);
    EXPECT_NEAR(u.coeff(1), q.uprime, 1e-14);
    // u'' + 2 u'/r + u^3 = 0
    const double res = 2.0 * u.coeff(2) + 2.0 * u.coeff(1) / q.r + std::pow(q.u, 3);
    EXPECT_LT(std::abs(res), 1e-12) << q.r;
    ++checked;
  }
  EXPECT_GT(checked, 5);
  EXPECT_THROW(radial_solution_jet<3>(pr, 1.0, 1.0, 0.0), SingularityError);
}
