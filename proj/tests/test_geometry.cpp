#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "plap/errors.hpp"
#include "plap/geometry.hpp"

using namespace plap;

TEST(Geometry, WarpingJetNamedModels) {
  auto h = warping_jet(ManifoldModel::hyperbolic(3, 1.0), 1.0);
  EXPECT_NEAR(h.psi, std::sinh(1.0), 1e-14);
  EXPECT_NEAR(h.dpsi, std::cosh(1.0), 1e-14);
  EXPECT_NEAR(h.ddpsi, std::sinh(1.0), 1e-14);
  auto s = warping_jet(ManifoldModel::sphere(3, 1.0), std::numbers::pi / 2);
  EXPECT_NEAR(s.psi, 1.0, 1e-14);
  EXPECT_NEAR(s.dpsi, 0.0, 1e-14);
  EXPECT_NEAR(s.ddpsi, -1.0, 1e-14);
  auto e = warping_jet(ManifoldModel::euclidean(4), 2.5);
  EXPECT_DOUBLE_EQ(e.psi, 2.5);
  EXPECT_DOUBLE_EQ(e.dpsi, 1.0);
  EXPECT_DOUBLE_EQ(e.ddpsi, 0.0);
  auto s4 = warping_jet(ManifoldModel::sphere(2, 4.0), 0.3);
  EXPECT_NEAR(s4.psi, std::sin(0.6) / 2.0, 1e-14);
  EXPECT_NEAR(s4.ddpsi, -2.0 * std::sin(0.6), 1e-14);
}

TEST(Geometry, SeriesBranchContinuous) {
  const std::vector<ManifoldModel> models = {
      ManifoldModel::sphere(3, 1.0), ManifoldModel::hyperbolic(4, 2.0),
      ManifoldModel::warped(3, WarpPrimitive::Cubic, 0.5, 0.0), ManifoldModel::warped(3, WarpPrimitive::Tanh, 1.3, 2.0),
      ManifoldModel::warped(2, WarpPrimitive::Rational, 0.7, 3.0)};
  for (const auto& m : models) {
    const double t = m.series_threshold();
    auto below = warping_jet(m, t * (1 - 1e-12));
    auto above = warping_jet(m, t);
    EXPECT_NEAR(below.psi, above.psi, 1e-12);
    EXPECT_NEAR(below.dpsi, above.dpsi, 1e-12);
    EXPECT_NEAR(below.ddpsi, above.ddpsi, 1e-12);
    for (auto dir : {RicciDirection::Radial, RicciDirection::Tangential}) {
      EXPECT_NEAR(ricci_radial(m, t * (1 - 1e-12), dir), ricci_radial(m, t * 1.0001, dir), 1e-6) << m.name();
    }
  }
}

TEST(Geometry, RicciOfSpaceForms) {
  for (double r : {0.0, 1e-6, 0.5, 2.0}) {
    EXPECT_NEAR(ricci_radial(ManifoldModel::hyperbolic(3, 1.0), r, RicciDirection::Radial), -2.0, 1e-9);
    EXPECT_NEAR(ricci_radial(ManifoldModel::hyperbolic(3, 1.0), r, RicciDirection::Tangential), -2.0, 1e-9);
    EXPECT_NEAR(ricci_radial(ManifoldModel::sphere(3, 1.0), r, RicciDirection::Radial), 2.0, 1e-9);
    EXPECT_NEAR(ricci_radial(ManifoldModel::sphere(3, 1.0), r, RicciDirection::Tangential), 2.0, 1e-9);
    EXPECT_NEAR(ricci_radial(ManifoldModel::euclidean(5), r, RicciDirection::Tangential), 0.0, 1e-12);
  }
  EXPECT_NEAR(ricci_radial(ManifoldModel::hyperbolic(4, 0.25), 1.0, RicciDirection::Radial), -0.75, 1e-9);
}

TEST(Geometry, RadiusDomain) {
  auto s = ManifoldModel::sphere(3, 1.0);
  EXPECT_THROW(warping_jet(s, std::numbers::pi), DomainError);
  EXPECT_THROW(warping_jet(s, -0.1), DomainError);
  EXPECT_THROW(ManifoldModel::sphere(3, 0.0), InputError);
  EXPECT_THROW(ManifoldModel::euclidean(1), InputError);
  EXPECT_THROW(ManifoldModel::named("torus", 3, 1.0), InputError);
}

TEST(Geometry, BallVolumes) {
  EXPECT_NEAR(ball_volume(ManifoldModel::euclidean(3), 1.0), 4.0 * std::numbers::pi / 3.0, 1e-10);
  EXPECT_NEAR(ball_volume(ManifoldModel::sphere(3, 1.0), std::numbers::pi), 2.0 * std::numbers::pi * std::numbers::pi, 1e-9);
  EXPECT_NEAR(ball_volume(ManifoldModel::sphere(2, 1.0), std::numbers::pi), 4.0 * std::numbers::pi, 1e-10);
  EXPECT_NEAR(ball_volume(ManifoldModel::hyperbolic(2, 1.0), 1.0), 2.0 * std::numbers::pi * (std::cosh(1.0) - 1.0), 1e-10);
  EXPECT_NEAR(ball_volume(ManifoldModel::euclidean(2), 2.0), 4.0 * std::numbers::pi, 1e-10);
  EXPECT_THROW(ball_volume(ManifoldModel::euclidean(3), 0.0), DomainError);
}

TEST(Geometry, BishopGromov) {
  auto rep = bishop_gromov_check(ManifoldModel::sphere(2, 1.0), {1.0, 2.0, 3.0});
  EXPECT_TRUE(rep.non_increasing);
  EXPECT_FALSE(rep.constant);
  EXPECT_NEAR(rep.ratios[1], 2.0 * std::numbers::pi * (1 - std::cos(2.0)) / 4.0, 1e-10);
  EXPECT_NEAR(rep.ratios[0], 2.0 * std::numbers::pi * (1 - std::cos(1.0)), 1e-10);
  auto e = bishop_gromov_check(ManifoldModel::euclidean(3), {0.5, 1.0, 4.0});
  EXPECT_TRUE(e.constant);
  EXPECT_TRUE(e.non_increasing);
  EXPECT_THROW(bishop_gromov_check(ManifoldModel::hyperbolic(3, 1.0), {1.0}), PreconditionError);
}
