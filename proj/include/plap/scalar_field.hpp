#pragma once
/// Positive smooth test fields.
///
/// `EuclideanField` is a positive shift plus a sum of products of positive
/// primitives on R^n, evaluable on doubles and on jets. `RadialProfile` is a
/// positive function of the radial coordinate on a warped product. Random
/// members of each family are drawn from documented coefficient ranges so
/// that the field is positive on the sampling cube [-1, 1]^n (resp. on the
/// sampled radii).

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "plap/errors.hpp"
#include "plap/jet.hpp"
#include "plap/rng.hpp"

namespace plap {

enum class FieldPrimitive {
  Polynomial,      // c0 + sum_k (a_k . x + b_k)^2 + e (d . x)^3
  Gaussian,        // A exp(-s |x - x0|^2)
  RadialExp,       // A exp(-s sqrt(1 + |x - x0|^2))
  RadialRational,  // A (1 + s |x - x0|^2)^(-k)
};

struct FieldTerm {
  FieldPrimitive kind = FieldPrimitive::Polynomial;
  double amplitude = 1.0;  // A, or c0 for polynomials
  double rate = 1.0;       // s
  double power = 1.0;      // k
  std::vector<double> center;
  std::vector<std::vector<double>> linear;  // rows (a_k, b_k), length dim + 1
  std::vector<double> cubic_dir;            // d
  double cubic_coef = 0.0;                  // e

  template <class T, std::size_t N>
  T eval(const std::array<T, N>& x) const {
    using std::exp;
    using std::sqrt;
    auto dist_sq = [&] {
      T s(0.0);
      for (std::size_t i = 0; i < N; ++i) {
        const T d = x[i] - center[i];
        s = s + d * d;
      }
      return s;
    };
    switch (kind) {
      case FieldPrimitive::Polynomial: {
        T s(amplitude);
        for (const auto& row : linear) {
          T l(row[N]);
          for (std::size_t i = 0; i < N; ++i) l = l + x[i] * row[i];
          s = s + l * l;
        }
        if (cubic_coef != 0.0) {
          T l(0.0);
          for (std::size_t i = 0; i < N; ++i) l = l + x[i] * cubic_dir[i];
          s = s + cubic_coef * (l * l * l);
        }
        return s;
      }
      case FieldPrimitive::Gaussian: return amplitude * exp(-rate * dist_sq());
      case FieldPrimitive::RadialExp: return amplitude * exp(-rate * sqrt(1.0 + dist_sq()));
      case FieldPrimitive::RadialRational: {
        using std::pow;
        return amplitude * pow(1.0 + rate * dist_sq(), -power);
      }
    }
    return T(0.0);
  }
};

enum class FieldFamily { Polynomial, Gaussian, RadialExp, RadialRational, Mixed };

inline std::string to_string(FieldFamily f) {
  switch (f) {
    case FieldFamily::Polynomial: return "polynomial";
    case FieldFamily::Gaussian: return "gaussian";
    case FieldFamily::RadialExp: return "radial_exp";
    case FieldFamily::RadialRational: return "radial_rational";
    case FieldFamily::Mixed: return "mixed";
  }
  return "?";
}

inline FieldFamily field_family_from_string(const std::string& s) {
  if (s == "polynomial") return FieldFamily::Polynomial;
  if (s == "gaussian") return FieldFamily::Gaussian;
  if (s == "radial_exp") return FieldFamily::RadialExp;
  if (s == "radial_rational") return FieldFamily::RadialRational;
  if (s == "mixed") return FieldFamily::Mixed;
  throw InputError("unknown field family '" + s + "'");
}

class EuclideanField {
 public:
  EuclideanField(int dim, double shift) : dim_(dim), shift_(shift) {
    if (dim < 1) throw InputError("field dimension must be positive");
  }

  int dim() const { return dim_; }
  double shift() const { return shift_; }

  /// Adds the product of the given terms as a summand.
  void add_product(std::vector<FieldTerm> factors) { products_.push_back(std::move(factors)); }
  const std::vector<std::vector<FieldTerm>>& products() const { return products_; }

  template <class T, std::size_t N>
  T eval(const std::array<T, N>& x) const {
    if (static_cast<int>(N) != dim_) throw InputError("field evaluated in the wrong dimension");
    T s(shift_);
    for (const auto& prod : products_) {
      T t(1.0);
      for (const auto& f : prod) t = t * f.eval(x);
      s = s + t;
    }
    return s;
  }

  double operator()(const std::vector<double>& x) const {
    return dispatch_dim(dim_, [&]<int N>() {
      std::array<double, N> a{};
      for (int i = 0; i < N; ++i) a[i] = x.at(i);
      return eval(a);
    });
  }

  /// Third-order jet at `x`.
  template <int N>
  Jet<N, 3> jet3(const std::vector<double>& x) const {
    std::array<Jet<N, 3>, N> v;
    for (int i = 0; i < N; ++i) v[i] = Jet<N, 3>::variable(i, x.at(i));
    return eval(v);
  }

 private:
  int dim_;
  double shift_;
  std::vector<std::vector<FieldTerm>> products_;
};

/// |x|^2 / 2 (positive off the origin).
inline EuclideanField half_square_norm(int dim) {
  FieldTerm t;
  t.kind = FieldPrimitive::Polynomial;
  t.amplitude = 0.0;
  for (int k = 0; k < dim; ++k) {
    std::vector<double> row(dim + 1, 0.0);
    row[k] = std::sqrt(0.5);
    t.linear.push_back(row);
  }
  EuclideanField f(dim, 0.0);
  f.add_product({t});
  return f;
}

namespace detail {

inline std::vector<double> random_center(int dim, SampleRng& rng, double half_width) {
  std::vector<double> c(dim);
  for (auto& v : c) v = rng.uniform(-half_width, half_width);
  return c;
}

inline FieldTerm random_term(FieldPrimitive kind, int dim, SampleRng& rng) {
  FieldTerm t;
  t.kind = kind;
  switch (kind) {
    case FieldPrimitive::Polynomial: {
      t.amplitude = rng.uniform(0.5, 1.5);
      const int rows = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(dim + 1));
      for (int k = 0; k < rows; ++k) {
        std::vector<double> row(dim + 1);
        for (auto& v : row) v = rng.uniform(-1.0, 1.0);
        t.linear.push_back(row);
      }
      t.cubic_dir.resize(dim);
      double l1 = 0.0;
      for (auto& v : t.cubic_dir) {
        v = rng.uniform(-1.0, 1.0);
        l1 += std::abs(v);
      }
      // |e (d.x)^3| <= 0.3 on the unit cube, so the term stays positive.
      t.cubic_coef = rng.uniform(-0.3, 0.3) / (l1 * l1 * l1);
      break;
    }
    case FieldPrimitive::Gaussian:
      t.amplitude = rng.uniform(0.5, 2.0);
      t.rate = rng.uniform(0.2, 1.5);
      t.center = random_center(dim, rng, 1.5);
      break;
    case FieldPrimitive::RadialExp:
      t.amplitude = rng.uniform(0.5, 2.0);
      t.rate = rng.uniform(0.3, 1.5);
      t.center = random_center(dim, rng, 1.5);
      break;
    case FieldPrimitive::RadialRational:
      t.amplitude = rng.uniform(0.5, 2.0);
      t.rate = rng.uniform(0.3, 2.0);
      t.power = rng.uniform(0.5, 2.5);
      t.center = random_center(dim, rng, 1.5);
      break;
  }
  return t;
}

}  // namespace detail

/// A random positive field of the given family on R^dim.
inline EuclideanField random_field(FieldFamily family, int dim, SampleRng& rng) {
  EuclideanField f(dim, rng.uniform(0.1, 0.6));
  auto add_single = [&](FieldPrimitive k) { f.add_product({detail::random_term(k, dim, rng)}); };
  switch (family) {
    case FieldFamily::Polynomial: add_single(FieldPrimitive::Polynomial); break;
    case FieldFamily::Gaussian:
      add_single(FieldPrimitive::Gaussian);
      add_single(FieldPrimitive::Gaussian);
      break;
    case FieldFamily::RadialExp: add_single(FieldPrimitive::RadialExp); break;
    case FieldFamily::RadialRational: add_single(FieldPrimitive::RadialRational); break;
    case FieldFamily::Mixed: {
      constexpr FieldPrimitive kinds[] = {FieldPrimitive::Polynomial, FieldPrimitive::Gaussian,
                                          FieldPrimitive::RadialExp, FieldPrimitive::RadialRational};
      const auto k1 = kinds[rng.next() % 4];
      const auto k2 = kinds[rng.next() % 4];
      const auto k3 = kinds[rng.next() % 4];
      f.add_product({detail::random_term(k1, dim, rng), detail::random_term(k2, dim, rng)});
      add_single(k3);
      break;
    }
  }
  return f;
}

enum class RadialPrimitive {
  Exp,       // c + A exp(-s r)
  Gaussian,  // c + A exp(-s r^2)
  Bump,      // c + A (1 + s r^2)^(-k)
  Poly,      // c + a r^2 + b r^3
};

struct RadialProfile {
  RadialPrimitive kind = RadialPrimitive::Exp;
  double c = 0.0;
  double amplitude = 1.0;  // A, or a for Poly
  double rate = 1.0;       // s, or b for Poly
  double power = 1.0;      // k

  template <class T>
  T eval(const T& r) const {
    using std::exp;
    using std::pow;
    switch (kind) {
      case RadialPrimitive::Exp: return c + amplitude * exp(-rate * r);
      case RadialPrimitive::Gaussian: return c + amplitude * exp(-rate * (r * r));
      case RadialPrimitive::Bump: return c + amplitude * pow(1.0 + rate * (r * r), -power);
      case RadialPrimitive::Poly: return c + amplitude * (r * r) + rate * (r * r * r);
    }
    return T(0.0);
  }

  Jet<1, 3> jet3(double r) const { return eval(Jet<1, 3>::variable(0, r)); }
};

inline RadialProfile radial_exp(double c, double A, double s) { return {RadialPrimitive::Exp, c, A, s, 1.0}; }
inline RadialProfile radial_poly(double c, double a, double b) { return {RadialPrimitive::Poly, c, a, b, 1.0}; }
inline RadialProfile radial_bump(double c, double A, double s, double k) { return {RadialPrimitive::Bump, c, A, s, k}; }

/// A random positive radial profile, monotone in r so that u' != 0 for r > 0.
inline RadialProfile random_profile(SampleRng& rng) {
  RadialProfile p;
  switch (rng.next() % 4) {
    case 0: p = radial_exp(rng.uniform(0.1, 1.0), rng.uniform(0.5, 2.0), rng.uniform(0.3, 1.5)); break;
    case 1: p = {RadialPrimitive::Gaussian, rng.uniform(0.1, 1.0), rng.uniform(0.5, 2.0), rng.uniform(0.2, 1.0), 1.0}; break;
    case 2: p = radial_bump(rng.uniform(0.1, 1.0), rng.uniform(0.5, 2.0), rng.uniform(0.3, 2.0), rng.uniform(0.5, 2.5)); break;
    default: p = radial_poly(rng.uniform(0.5, 2.0), rng.uniform(0.2, 1.0), rng.uniform(0.0, 0.5)); break;
  }
  return p;
}

}  // namespace plap
