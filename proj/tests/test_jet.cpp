#include <gtest/gtest.h>

#include <cmath>

#include "plap/jet.hpp"

using plap::Jet;

namespace {

template <class T>
T sample_fn(const T& x, const T& y) {
  using std::exp;
  using std::sin;
  return exp(x * y) * sin(x + 2.0 * y) / (1.0 + x * x + y * y);
}

}  // namespace

TEST(Jet, PolynomialDerivativesExact) {
  auto x = Jet<2, 3>::variable(0, 1.5);
  auto y = Jet<2, 3>::variable(1, -0.5);
  auto f = x * x * y + 3.0 * y * y * y;
  EXPECT_DOUBLE_EQ(f.value(), 1.5 * 1.5 * -0.5 + 3.0 * -0.125);
  EXPECT_DOUBLE_EQ(f.d1(0), 2 * 1.5 * -0.5);
  EXPECT_DOUBLE_EQ(f.d1(1), 1.5 * 1.5 + 9 * 0.25);
  EXPECT_DOUBLE_EQ(f.d2(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(f.d2(1, 1), 18 * -0.5);
  EXPECT_DOUBLE_EQ(f.d3(0, 0, 1), 2.0);
  EXPECT_DOUBLE_EQ(f.d3(1, 1, 1), 18.0);
}

TEST(Jet, MatchesFourthOrderFiniteDifferences) {
  const double x0 = 0.3, y0 = -0.7, h = 1e-3;
  auto f = sample_fn(Jet<2, 2>::variable(0, x0), Jet<2, 2>::variable(1, y0));
  auto fd = [&](double dx, double dy) { return sample_fn(x0 + dx, y0 + dy); };
  const double dx_fd = (-fd(2 * h, 0) + 8 * fd(h, 0) - 8 * fd(-h, 0) + fd(-2 * h, 0)) / (12 * h);
  const double dxx_fd = (-fd(2 * h, 0) + 16 * fd(h, 0) - 30 * fd(0, 0) + 16 * fd(-h, 0) - fd(-2 * h, 0)) / (12 * h * h);
  EXPECT_NEAR(f.d1(0), dx_fd, 1e-9);
  EXPECT_NEAR(f.d2(0, 0), dxx_fd, 1e-6);
  const double dxy_fd = (fd(h, h) - fd(h, -h) - fd(-h, h) + fd(-h, -h)) / (4 * h * h);
  EXPECT_NEAR(f.d2(0, 1), dxy_fd, 1e-5);
}

TEST(Jet, ElementaryFunctionsUnivariate) {
  auto x = Jet<1, 4>::variable(0, 0.7);
  auto e = exp(x);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(e.coeff(k) * plap::detail::factorial(k), std::exp(0.7), 1e-14);
  auto l = log(exp(x));
  EXPECT_NEAR(l.value(), 0.7, 1e-15);
  EXPECT_NEAR(l.coeff(1), 1.0, 1e-14);
  for (int k = 2; k <= 4; ++k) EXPECT_NEAR(l.coeff(k), 0.0, 1e-13);
  auto s = sin(x) * sin(x) + cos(x) * cos(x);
  EXPECT_NEAR(s.value(), 1.0, 1e-15);
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(s.coeff(k), 0.0, 1e-14);
  auto p = pow(x, 2.5);
  EXPECT_NEAR(p.coeff(1), 2.5 * std::pow(0.7, 1.5), 1e-14);
  EXPECT_NEAR(p.coeff(3) * 6, 2.5 * 1.5 * 0.5 * std::pow(0.7, -0.5), 1e-13);
  auto q = x / (1.0 + x);
  EXPECT_NEAR(q.coeff(1), 1.0 / (1.7 * 1.7), 1e-15);
  auto hy = cosh(x) * cosh(x) - sinh(x) * sinh(x);
  EXPECT_NEAR(hy.value(), 1.0, 1e-14);
  EXPECT_NEAR(hy.coeff(2), 0.0, 1e-13);
}

TEST(Jet, PartialLowersOrderAndCommutes) {
  auto x = Jet<3, 3>::variable(0, 0.2);
  auto y = Jet<3, 3>::variable(1, 0.4);
  auto z = Jet<3, 3>::variable(2, -0.1);
  auto f = exp(x * y) * (z + 2.0) + sin(y * z);
  Jet<3, 1> fxy = plap::partial(plap::partial(f, 0), 1);
  Jet<3, 1> fyx = plap::partial(plap::partial(f, 1), 0);
  for (int m = 0; m < Jet<3, 1>::kSize; ++m) EXPECT_NEAR(fxy.coeff(m), fyx.coeff(m), 1e-14);
  EXPECT_NEAR(fxy.value(), f.d2(0, 1), 1e-14);
  EXPECT_NEAR(fxy.d1(2), f.d3(0, 1, 2), 1e-14);
}

TEST(Jet, TruncationIsPrefix) {
  auto x = Jet<2, 3>::variable(0, 0.5);
  auto y = Jet<2, 3>::variable(1, 0.25);
  auto f = exp(x + y * y);
  auto g = exp(Jet<2, 2>::variable(0, 0.5) + Jet<2, 2>::variable(1, 0.25) * Jet<2, 2>::variable(1, 0.25));
  auto t = f.truncate<2>();
  for (int m = 0; m < Jet<2, 2>::kSize; ++m) EXPECT_NEAR(t.coeff(m), g.coeff(m), 1e-14);
}

TEST(Jet, IntegrateInvertsPartial) {
  auto x = Jet<1, 3>::variable(0, 1.0);
  auto f = exp(x);
  auto F = plap::integrate(f);
  auto back = plap::partial(F, 0);
  for (int m = 0; m <= 3; ++m) EXPECT_NEAR(back.coeff(m), f.coeff(m), 1e-15);
}

TEST(Jet, DispatchDim) {
  for (int n = 1; n <= 6; ++n) {
    int got = plap::dispatch_dim(n, []<int N>() { return N; });
    EXPECT_EQ(got, n);
  }
  EXPECT_THROW(plap::dispatch_dim(7, []<int N>() { return N; }), std::invalid_argument);
}
