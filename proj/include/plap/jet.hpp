#pragma once
/// Truncated multivariate Taylor jets for forward-mode differentiation.
///
/// A `Jet<N, K>` stores the Taylor polynomial of a scalar function of N
/// variables up to total degree K around a fixed point, in the monomial basis
/// with graded ordering. Arithmetic truncates at degree K, so composing jets
/// computes all partial derivatives up to order K exactly (up to rounding).
///
/// The graded ordering is shared across K: the coefficients of a `Jet<N, K2>`
/// are a prefix of those of a `Jet<N, K>` for K2 <= K. Differentiation maps
/// `Jet<N, K>` to `Jet<N, K - 1>`, which lets vector fields built from
/// derivatives be nested without re-seeding.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plap {

namespace detail {

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

constexpr double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

template <int N, int K>
struct MonomialTable {
  static constexpr int kSize = binomial(N + K, K);

  std::array<std::array<int, N>, kSize> exps{};
  std::array<int, kSize> degree{};
  // (i, j, k): monomial i times monomial j is monomial k, deg(k) <= K.
  std::vector<std::array<int, 3>> products;
  // lower[v][m]: index of monomial m with exponent of v decreased by one, or -1.
  std::array<std::array<int, kSize>, N> lower{};

  static const MonomialTable& get() {
    static const MonomialTable table;
    return table;
  }

  int index_of(const std::array<int, N>& e) const {
    auto it = lookup_.find(e);
    return it == lookup_.end() ? -1 : it->second;
  }

 private:
  std::map<std::array<int, N>, int> lookup_;

  MonomialTable() {
    int idx = 0;
    std::array<int, N> cur{};
    for (int d = 0; d <= K; ++d) enumerate(d, 0, cur, idx);
    for (int i = 0; i < kSize; ++i) lookup_[exps[i]] = i;
    for (int i = 0; i < kSize; ++i) {
      for (int j = 0; j < kSize; ++j) {
        if (degree[i] + degree[j] > K) continue;
        std::array<int, N> e{};
        for (int v = 0; v < N; ++v) e[v] = exps[i][v] + exps[j][v];
        products.push_back({i, j, lookup_.at(e)});
      }
    }
    for (int v = 0; v < N; ++v) {
      for (int m = 0; m < kSize; ++m) {
        if (exps[m][v] == 0) {
          lower[v][m] = -1;
          continue;
        }
        auto e = exps[m];
        --e[v];
        lower[v][m] = lookup_.at(e);
      }
    }
  }

  // Monomials of total degree `remaining` over variables [var, N), in
  // descending lexicographic order of the exponent tuple.
  void enumerate(int remaining, int var, std::array<int, N>& cur, int& idx) {
    if (var == N - 1) {
      cur[var] = remaining;
      exps[idx] = cur;
      int d = 0;
      for (int v = 0; v < N; ++v) d += cur[v];
      degree[idx] = d;
      ++idx;
      cur[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[var] = e;
      enumerate(remaining - e, var + 1, cur, idx);
    }
    cur[var] = 0;
  }
};

}  // namespace detail

template <int N, int K>
class Jet {
  static_assert(N >= 1 && K >= 0);

 public:
  static constexpr int kDim = N;
  static constexpr int kOrder = K;
  static constexpr int kSize = detail::binomial(N + K, K);
  using Table = detail::MonomialTable<N, K>;

  Jet() : c_{} {}
  Jet(double v) : c_{} { c_[0] = v; }  // NOLINT: constants promote implicitly

  /// The coordinate function x_i expanded around x_i = x.
  static Jet variable(int i, double x) {
    Jet j(x);
    if constexpr (K >= 1) j.c_[1 + i] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(int m) const { return c_[m]; }
  double& coeff(int m) { return c_[m]; }
  const std::array<double, kSize>& coeffs() const { return c_; }

  /// Partial derivative for the exponent tuple `e` (multi-index), i.e.
  /// coefficient times e!.
  double derivative(const std::array<int, N>& e) const {
    int m = Table::get().index_of(e);
    if (m < 0) throw std::out_of_range("Jet::derivative: order exceeds jet order");
    double scale = 1.0;
    for (int v = 0; v < N; ++v) scale *= detail::factorial(e[v]);
    return c_[m] * scale;
  }

  double d1(int i) const {
    std::array<int, N> e{};
    ++e[i];
    return derivative(e);
  }
  double d2(int i, int j) const {
    std::array<int, N> e{};
    ++e[i];
    ++e[j];
    return derivative(e);
  }
  double d3(int i, int j, int k) const {
    std::array<int, N> e{};
    ++e[i];
    ++e[j];
    ++e[k];
    return derivative(e);
  }

  template <int K2>
  Jet<N, K2> truncate() const {
    static_assert(K2 <= K);
    Jet<N, K2> out;
    for (int m = 0; m < Jet<N, K2>::kSize; ++m) out.coeff(m) = c_[m];
    return out;
  }

  Jet operator-() const {
    Jet r;
    for (int m = 0; m < kSize; ++m) r.c_[m] = -c_[m];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int m = 0; m < kSize; ++m) c_[m] += o.c_[m];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int m = 0; m < kSize; ++m) c_[m] -= o.c_[m];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(double s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator+(double b, Jet a) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator-(Jet a, double b) {
    a.c_[0] -= b;
    return a;
  }
  friend Jet operator-(double b, const Jet& a) { return (-a) + b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    if constexpr (K == 0) {
      r.c_[0] = a.c_[0] * b.c_[0];
    } else {
      for (const auto& t : Table::get().products) r.c_[t[2]] += a.c_[t[0]] * b.c_[t[1]];
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return reciprocal(b) * s; }

  /// f(jet) given f^{(k)}(value) for k = 0..K (Taylor composition via Horner).
  Jet compose(const std::array<double, K + 1>& derivs) const {
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet r(derivs[K] / detail::factorial(K));
    for (int k = K - 1; k >= 0; --k) {
      r = r * h;
      r.c_[0] += derivs[k] / detail::factorial(k);
    }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    std::array<double, K + 1> d{};
    const double x = a.value();
    double inv = 1.0 / x;
    double term = inv;
    for (int k = 0; k <= K; ++k) {
      d[k] = term;
      term *= -(k + 1) * inv;
    }
    return a.compose(d);
  }
  friend Jet exp(const Jet& a) {
    std::array<double, K + 1> d{};
    d.fill(std::exp(a.value()));
    return a.compose(d);
  }
  friend Jet log(const Jet& a) {
    std::array<double, K + 1> d{};
    const double x = a.value();
    d[0] = std::log(x);
    double term = 1.0 / x;
    for (int k = 1; k <= K; ++k) {
      d[k] = term;
      term *= -k / x;
    }
    return a.compose(d);
  }
  friend Jet pow(const Jet& a, double alpha) {
    std::array<double, K + 1> d{};
    const double x = a.value();
    double coef = 1.0;
    for (int k = 0; k <= K; ++k) {
      d[k] = (coef == 0.0) ? 0.0 : coef * std::pow(x, alpha - k);
      coef *= (alpha - k);
    }
    return a.compose(d);
  }
  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }
  friend Jet sin(const Jet& a) {
    std::array<double, K + 1> d{};
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const double cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= K; ++k) d[k] = cyc[k % 4];
    return a.compose(d);
  }
  friend Jet cos(const Jet& a) {
    std::array<double, K + 1> d{};
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const double cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= K; ++k) d[k] = cyc[k % 4];
    return a.compose(d);
  }
  friend Jet sinh(const Jet& a) {
    std::array<double, K + 1> d{};
    const double s = std::sinh(a.value()), c = std::cosh(a.value());
    for (int k = 0; k <= K; ++k) d[k] = (k % 2 == 0) ? s : c;
    return a.compose(d);
  }
  friend Jet cosh(const Jet& a) {
    std::array<double, K + 1> d{};
    const double s = std::sinh(a.value()), c = std::cosh(a.value());
    for (int k = 0; k <= K; ++k) d[k] = (k % 2 == 0) ? c : s;
    return a.compose(d);
  }
  /// |a| for a jet whose value is nonzero.
  friend Jet abs(const Jet& a) { return a.value() < 0.0 ? -a : a; }

 private:
  std::array<double, kSize> c_;
};

/// Partial derivative d/dx_i, lowering the order by one.
template <int N, int K>
Jet<N, K - 1> partial(const Jet<N, K>& a, int i) {
  static_assert(K >= 1);
  const auto& table = detail::MonomialTable<N, K>::get();
  Jet<N, K - 1> out;
  for (int m = 0; m < Jet<N, K>::kSize; ++m) {
    const int lo = table.lower[i][m];
    if (lo < 0) continue;
    out.coeff(lo) += table.exps[m][i] * a.coeff(m);
  }
  return out;
}

/// Antiderivative in x_0 for one-dimensional jets, with zero constant term;
/// raises the order by one.
template <int K>
Jet<1, K + 1> integrate(const Jet<1, K>& a) {
  Jet<1, K + 1> out;
  for (int m = 0; m <= K; ++m) out.coeff(m + 1) = a.coeff(m) / (m + 1);
  return out;
}

template <class T>
struct is_jet : std::false_type {};
template <int N, int K>
struct is_jet<Jet<N, K>> : std::true_type {};

/// Value of a scalar that is either a plain double or a jet.
inline double value_of(double x) { return x; }
template <int N, int K>
double value_of(const Jet<N, K>& j) {
  return j.value();
}

/// Runtime dimension to compile-time dispatch for n in [1, 6].
template <class F>
decltype(auto) dispatch_dim(int n, F&& f) {
  switch (n) {
    case 1: return f.template operator()<1>();
    case 2: return f.template operator()<2>();
    case 3: return f.template operator()<3>();
    case 4: return f.template operator()<4>();
    case 5: return f.template operator()<5>();
    case 6: return f.template operator()<6>();
    default: throw std::invalid_argument("dimension must be in [1, 6]");
  }
}

}  // namespace plap
