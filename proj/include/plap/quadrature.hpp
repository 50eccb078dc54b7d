#pragma once
/// Adaptive Gauss-Kronrod quadrature with an explicit error contract.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "plap/errors.hpp"

namespace plap {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

struct QuadratureOptions {
  double abs_tol_scale = 1e-10;  // accepted error: abs_tol_scale * max(1, |value|, L1)
  unsigned max_depth = 25;       // interval-subdivision cap
};

/// Integrates f over [a, b]; b may be +infinity. Throws NumericalError when
/// the error estimate exceeds the documented tolerance.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0, l1 = 0.0;
  const double value = GK::integrate(f, a, b, opts.max_depth, 1e-14, &err, &l1);
  const double scale = std::max({1.0, std::abs(value), l1});
  if (!std::isfinite(value) || err > opts.abs_tol_scale * scale) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] did not converge: error estimate " << err;
    throw NumericalError(os.str(), err);
  }
  return {value, err};
}

}  // namespace plap
