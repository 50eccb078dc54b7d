#pragma once
/// Embedded Dormand-Prince 5(4) integrator with the standard free
/// fourth-order dense output, for small fixed-size systems.
///
/// Step control is a pure function of the tolerances and the trajectory, so
/// identical inputs always yield identical steps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>

#include "plap/errors.hpp"

namespace plap {

template <std::size_t D>
using OdeState = std::array<double, D>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;            // 0 picks a step from the first derivative
  double h_min_rel = 1e-14;       // minimal step relative to |t|
  std::uint64_t max_steps = 5'000'000;
};

struct OdeStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
};

/// Continuous extension over one accepted step [t0, t0 + h].
template <std::size_t D>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<OdeState<D>, 5> rc{};

  OdeState<D> operator()(double t) const {
    const double th = (t - t0) / h, th1 = 1.0 - th;
    OdeState<D> y;
    for (std::size_t i = 0; i < D; ++i) {
      y[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
    }
    return y;
  }
};

enum class OdeStop { Reached, Observer, StepCollapse, MaxSteps };

inline std::string to_string(OdeStop s) {
  switch (s) {
    case OdeStop::Reached: return "reached";
    case OdeStop::Observer: return "stopped by observer";
    case OdeStop::StepCollapse: return "step size collapse";
    case OdeStop::MaxSteps: return "step budget exhausted";
  }
  return "?";
}

template <std::size_t D>
struct OdeResult {
  OdeStop stop = OdeStop::Reached;
  double t = 0.0;
  OdeState<D> y{};
  OdeStats stats;
};

/// Integrates y' = rhs(t, y) from t0 towards t1 > t0. After each accepted
/// step `observe(dense, t, y)` is called; returning false stops integration.
template <std::size_t D, class Rhs, class Observe>
OdeResult<D> integrate_dp45(Rhs&& rhs, double t0, OdeState<D> y0, double t1, const OdeOptions& opt,
                            Observe&& observe) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  if (!(t1 > t0)) throw InputError("integration interval must be increasing");
  OdeResult<D> res;
  res.t = t0;
  res.y = y0;
  auto& st = res.stats;
  auto f = [&](double t, const OdeState<D>& y) {
    ++st.rhs_evals;
    return rhs(t, y);
  };
  auto axpy = [](const OdeState<D>& y, double h, std::initializer_list<std::pair<double, const OdeState<D>*>> terms) {
    OdeState<D> out = y;
    for (const auto& [c, k] : terms) {
      for (std::size_t i = 0; i < D; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
  };
  auto err_norm = [&](const OdeState<D>& a, const OdeState<D>& b, const OdeState<D>& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
      s += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(s / D);
  };

  double t = t0;
  OdeState<D> y = y0;
  OdeState<D> k1 = f(t, y);
  double h = opt.h_init;
  if (!(h > 0.0)) {
    // Size the first step so that h |y'| is a fraction of the tolerance scale.
    double dn = 0.0, yn = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      dn = std::max(dn, std::abs(k1[i]) / sc);
      yn = std::max(yn, std::abs(y[i]) / sc);
    }
    h = (dn > 1e-300) ? 0.01 * std::max(yn, 1.0) / dn : 1e-6 * std::max(1.0, std::abs(t1 - t0));
    h = std::min(h, 1e-2 * (t1 - t0) + 1e-300);
    h = std::max(h, 1e-12 * std::max(1.0, std::abs(t0)));
  }
  while (t < t1) {
    if (st.accepted + st.rejected >= opt.max_steps) {
      res.stop = OdeStop::MaxSteps;
      return res;
    }
    const double h_min = opt.h_min_rel * std::max(1.0, std::abs(t));
    if (h < h_min) {
      res.stop = OdeStop::StepCollapse;
      return res;
    }
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    const auto k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const auto k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const auto k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const auto k5 = f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const auto k6 = f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const auto y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const auto k7 = f(t + h, y1);
    OdeState<D> e;
    bool finite = true;
    for (std::size_t i = 0; i < D; ++i) {
      e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      finite = finite && std::isfinite(y1[i]) && std::isfinite(e[i]);
    }
    const double err = finite ? err_norm(y, y1, e) : std::numeric_limits<double>::infinity();
    if (!(err <= 1.0)) {
      ++st.rejected;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      continue;
    }
    ++st.accepted;
    DenseStep<D> dense;
    dense.t0 = t;
    dense.h = h;
    for (std::size_t i = 0; i < D; ++i) {
      dense.rc[0][i] = y[i];
      dense.rc[1][i] = y1[i] - y[i];
      dense.rc[2][i] = h * k1[i] - dense.rc[1][i];
      dense.rc[3][i] = dense.rc[1][i] - h * k7[i] - dense.rc[2][i];
      dense.rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    t = last ? t1 : t + h;
    y = y1;
    k1 = k7;
    res.t = t;
    res.y = y;
    if (!observe(dense, t, y)) {
      res.stop = OdeStop::Observer;
      return res;
    }
    const double fac = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0) : 10.0;
    h *= fac;
  }
  res.stop = OdeStop::Reached;
  return res;
}

}  // namespace plap
