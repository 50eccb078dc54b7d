#pragma once
/// Exponent landscape of  -Lap_p u = f(u)  on manifolds with nonnegative
/// Ricci curvature: the critical exponent, the catalogue of thresholds, the
/// structural conditions on f, a Liouville classifier, and the Emden bubble.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plap/errors.hpp"
#include "plap/reaction.hpp"
#include "plap/reports.hpp"

namespace plap {

/// A real number or +infinity.
class ExtendedReal {
 public:
  static ExtendedReal infinity() { return ExtendedReal(true, 0.0); }
  ExtendedReal(double v = 0.0) : inf_(false), v_(v) {}  // NOLINT: finite values promote

  bool is_infinite() const { return inf_; }
  /// The finite value; throws for +infinity.
  double value() const {
    if (inf_) throw DomainError("extended real is +infinity");
    return v_;
  }
  double to_double() const { return inf_ ? std::numeric_limits<double>::infinity() : v_; }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

  std::string str() const {
    if (inf_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << v_;
    return os.str();
  }

 private:
  ExtendedReal(bool inf, double v) : inf_(inf), v_(v) {}
  bool inf_;
  double v_;
};

namespace detail {
inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }
/// num / den^+, +infinity when den^+ = 0.
inline ExtendedReal over_positive_part(double num, double den) {
  const double d = positive_part(den);
  if (d == 0.0) return ExtendedReal::infinity();
  return num / d;
}
inline void check_np(int n, double p) {
  if (n < 2) throw InputError("dimension must be >= 2");
  if (!(p > 1.0)) throw InputError("p must be > 1");
}
}  // namespace detail

/// ((n+1)p - n) / (n - p)^+.
inline ExtendedReal critical_exponent(int n, double p) {
  detail::check_np(n, p);
  return detail::over_positive_part((n + 1.0) * p - n, n - p);
}

enum class ExponentName { Ps, WangWei, SerrinZouIneq, ChengYauLi, Main3Ii, Main2C };

inline std::string to_string(ExponentName e) {
  switch (e) {
    case ExponentName::Ps: return "ps";
    case ExponentName::WangWei: return "wang_wei";
    case ExponentName::SerrinZouIneq: return "serrin_zou_ineq";
    case ExponentName::ChengYauLi: return "cheng_yau_li";
    case ExponentName::Main3Ii: return "main3_ii";
    case ExponentName::Main2C: return "main2_C";
  }
  return "?";
}

struct ExponentRecord {
  ExponentName name;
  ExtendedReal value;
  bool valid = true;
  std::string validity;  // parameter constraints under which it is stated
};

inline std::vector<ExponentRecord> threshold_table(int n, double p) {
  detail::check_np(n, p);
  std::vector<ExponentRecord> t;
  t.push_back({ExponentName::Ps, critical_exponent(n, p), true, "p > 1"});
  t.push_back({ExponentName::WangWei, (n + 3.0) * (p - 1.0) / (n - 1.0), true, "p > 1"});
  t.push_back({ExponentName::SerrinZouIneq, detail::over_positive_part(n * (p - 1.0), n - p), true,
               "p > 1 (differential inequality, lower end p - 1)"});
  ExponentRecord cyl{ExponentName::ChengYauLi, 0.0, p == 2.0 && n > 2, "p = 2, n > 2"};
  cyl.value = n > 2 ? ExtendedReal((n + 1.0) / (n - 1.0) + 2.0 / std::sqrt(n * (n - 2.0))) : ExtendedReal::infinity();
  t.push_back(cyl);
  t.push_back({ExponentName::Main3Ii,
               detail::over_positive_part(2.0 * ((n + 1.0) * p - n) * (p - 1.0), (n + 1.0) * p - 2.0 * n),
               p > 0.5 * n, "p > n/2"});
  ExponentRecord c{ExponentName::Main2C, 0.0, n == 2 && p < 2.0, "n = 2, 1 < p < 2"};
  const double den = detail::positive_part(4.0 - 3.0 * p) * (2.0 - p);
  c.value = den > 0.0 ? ExtendedReal(2.0 * (p - 1.0) * (p - 1.0) * (3.0 * p - 2.0) / den) : ExtendedReal::infinity();
  t.push_back(c);
  return t;
}

inline ExtendedReal threshold(int n, double p, ExponentName name) {
  for (const auto& r : threshold_table(n, p)) {
    if (r.name == name) return r.value;
  }
  throw std::logic_error("threshold: unknown name");
}

/// `count` log-spaced points on [lo, hi].
inline std::vector<double> log_grid(double lo = 1e-6, double hi = 1e6, int count = 1000) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InputError("log grid needs 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

struct ConditionVerdict {
  bool holds = true;
  std::optional<double> witness;  // first grid point where the condition fails
  double min_margin = std::numeric_limits<double>::infinity();  // normalized
  std::optional<bool> analytic;   // closed-form verdict when the family provides one
};

namespace detail {
inline void require_grid(const std::vector<double>& grid) {
  if (grid.size() < 1000 || grid.front() > 1e-6 || grid.back() < 1e6) {
    throw InputError("condition grid must span [1e-6, 1e6] with at least 1000 points");
  }
}
template <class Margin>
ConditionVerdict grid_check(const std::vector<double>& grid, Margin&& margin_terms) {
  constexpr double kRel = 1e-12;
  ConditionVerdict v;
  for (double t : grid) {
    const auto [margin, scale] = margin_terms(t);
    if (!std::isfinite(margin) || !std::isfinite(scale)) {
      std::ostringstream os;
      os << "nonlinearity evaluation is not finite at t = " << t;
      throw InputError(os.str());
    }
    const double norm = scale > 0.0 ? margin / scale : (margin == 0.0 ? 0.0 : margin);
    v.min_margin = std::min(v.min_margin, norm);
    if (margin < -kRel * scale && v.holds) {
      v.holds = false;
      v.witness = t;
    }
  }
  return v;
}
}  // namespace detail

/// alpha f(t) - t f'(t) >= 0 on the grid.
inline ConditionVerdict is_subcritical(const ReactionTerm& f, double alpha, const std::vector<double>& grid = log_grid()) {
  detail::require_grid(grid);
  auto v = detail::grid_check(grid, [&](double t) {
    const double af = alpha * f(t), tdf = t * f.derivative(t);
    return std::pair{af - tdf, std::abs(af) + std::abs(tdf)};
  });
  v.analytic = f.analytic_subcritical(alpha);
  return v;
}

struct F2Verdict {
  ConditionVerdict at_delta0;
  std::optional<double> minimal_delta0;  // none when no delta0 < 1 works
  bool holds_at_search_floor = false;    // holds already at the lower search end
};

/// ((p-1)/(n-1)) ((n+1) f + 2 delta0 |f|) - t f' >= 0 on the grid, plus a
/// bisection search for the least delta0 in [-1, 1) that makes it hold.
inline F2Verdict satisfies_f2(const ReactionTerm& f, double delta0, int n, double p,
                              const std::vector<double>& grid = log_grid()) {
  detail::check_np(n, p);
  if (!(delta0 < 1.0)) throw PreconditionError("delta0 must be < 1");
  detail::require_grid(grid);
  // Sample f once; the condition is affine in delta0.
  std::vector<double> fv(grid.size()), tdf(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fv[i] = f(grid[i]);
    tdf[i] = grid[i] * f.derivative(grid[i]);
  }
  const double c = (p - 1.0) / (n - 1.0);
  auto check = [&](double d) {
    std::size_t i = 0;
    return detail::grid_check(grid, [&](double) {
      const double a = c * (n + 1.0) * fv[i], b = c * 2.0 * d * std::abs(fv[i]), e = tdf[i];
      ++i;
      return std::pair{a + b - e, std::abs(a) + std::abs(b) + std::abs(e)};
    });
  };
  F2Verdict out;
  out.at_delta0 = check(delta0);
  constexpr double kLo = -1.0, kHi = 1.0;
  if (check(kLo).holds) {
    out.minimal_delta0 = kLo;
    out.holds_at_search_floor = true;
    return out;
  }
  double lo = kLo, hi = kHi;  // fails at lo; hi is the open end
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (check(mid).holds) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // A threshold pinned against the open end is the limit case delta0 = 1,
  // accepted only through the grid tolerance.
  if (hi < kHi - 1e-9) out.minimal_delta0 = hi;
  return out;
}

struct GradientEstimateParams {
  double delta0 = 0.0;
  double delta0_plus = 0.0;
  double lambda0 = 0.0;

  static GradientEstimateParams make(double delta0, double p) {
    if (!(delta0 < 1.0)) throw PreconditionError("delta0 must be < 1");
    if (!(p > 1.0)) throw InputError("p must be > 1");
    GradientEstimateParams g;
    g.delta0 = delta0;
    g.delta0_plus = std::max(0.0, delta0);
    g.lambda0 = p / (1.0 - g.delta0_plus);
    return g;
  }
};

struct HarnackConfig {
  double chi = 2.0;
  double q = 1.0;

  /// chi = n/(n-p) for 1 < p < n, else `chi_fallback` (> 1).
  static HarnackConfig make(int n, double p, double q, double chi_fallback = 2.0) {
    detail::check_np(n, p);
    HarnackConfig h;
    if (p < n) {
      h.chi = n / (n - p);
    } else {
      if (!(chi_fallback > 1.0)) throw InputError("chi must be > 1");
      h.chi = chi_fallback;
    }
    if (!(q > 0.0) || !(q < (p - 1.0) * h.chi)) {
      std::ostringstream os;
      os << "q = " << q << " outside (0, (p-1) chi) = (0, " << (p - 1.0) * h.chi << ")";
      throw PreconditionError(os.str());
    }
    h.q = q;
    return h;
  }
};

/// Sign and growth information about f used by the classifier.
struct ReactionClass {
  SignClass sign = SignClass::Nonnegative;
  bool positive = false;    // f > 0 on (0, inf)
  bool pure_power = false;  // f = t^alpha (nonnegative) or -t^alpha (nonpositive)
  std::optional<double> growth_p0;  // some p0 > p with liminf t^{1-p0} |f(t)| > 0
  bool noncompact = true;
};

enum class LiouvilleVerdict { ConstantForced, NoPositiveSolution, OutOfRange };

inline std::string to_string(LiouvilleVerdict v) {
  switch (v) {
    case LiouvilleVerdict::ConstantForced: return "constant_forced";
    case LiouvilleVerdict::NoPositiveSolution: return "no_positive_solution";
    case LiouvilleVerdict::OutOfRange: return "out_of_range";
  }
  return "?";
}

struct LiouvilleClassification {
  LiouvilleVerdict verdict = LiouvilleVerdict::OutOfRange;
  std::string theorem;             // primary tag, empty when out of range
  std::vector<std::string> fired;  // every tag whose hypotheses hold, in precedence order
  std::vector<std::string> notes;
};

/// Applies the Liouville statements for nonnegative Ricci curvature in fixed
/// precedence: 2.1/2.2, 2.6, 2.8, 2.9, 2.3, Cor2.1. `alpha` is the exponent
/// for which f is subcritical.
inline LiouvilleClassification classify_liouville(int n, double p, double alpha, const ReactionClass& fc) {
  detail::check_np(n, p);
  if (fc.pure_power && fc.sign == SignClass::Mixed) throw InputError("a pure power cannot have mixed sign");
  if (fc.positive && fc.sign != SignClass::Nonnegative) throw InputError("positive f must be nonnegative");
  if (fc.growth_p0 && !(*fc.growth_p0 > p)) throw InputError("growth exponent p0 must exceed p");

  const ExtendedReal ps = critical_exponent(n, p);
  const double wang_wei = (n + 3.0) * (p - 1.0) / (n - 1.0);
  const bool nonneg = fc.sign == SignClass::Nonnegative;
  const bool nonpos = fc.sign == SignClass::Nonpositive;
  const bool in_ps = alpha > 0.0 && ExtendedReal(alpha) < ps;

  LiouvilleClassification out;
  auto fire = [&](const std::string& tag, LiouvilleVerdict v) {
    out.fired.push_back(tag);
    if (out.theorem.empty()) {
      out.theorem = tag;
      out.verdict = v;
    }
  };

  if (fc.pure_power && nonneg && ExtendedReal(alpha) < ps) fire("2.1", LiouvilleVerdict::NoPositiveSolution);
  if (fc.pure_power && nonpos && alpha > p - 1.0) fire("2.2", LiouvilleVerdict::NoPositiveSolution);

  if (fc.positive && in_ps) {
    if (p >= n) {
      fire("2.6(A)", LiouvilleVerdict::ConstantForced);
    } else if (3 <= n && n < 2.0 * p) {
      fire("2.6(B)", LiouvilleVerdict::ConstantForced);
    } else if (n == 2 && p < 2.0 && ExtendedReal(alpha) < threshold(n, p, ExponentName::Main2C)) {
      fire("2.6(C)", LiouvilleVerdict::ConstantForced);
    }
  }

  if (fc.growth_p0 && in_ps) {
    if (nonneg) {
      fire("2.8(i)", LiouvilleVerdict::ConstantForced);
    } else if (p > 0.5 * n && ExtendedReal(alpha) <= threshold(n, p, ExponentName::Main3Ii)) {
      fire("2.8(ii)", LiouvilleVerdict::ConstantForced);
    }
  }

  if (fc.noncompact && nonneg && in_ps) {
    if (p >= n) {
      fire("2.9(I)", LiouvilleVerdict::ConstantForced);
    } else if (3 <= n && n < 2.0 * p) {
      fire("2.9(II)", LiouvilleVerdict::ConstantForced);
    } else if (n == 2 && p >= (1.0 + std::sqrt(17.0)) / 4.0) {
      fire("2.9(III)", LiouvilleVerdict::ConstantForced);
      if (p >= 4.0 / 3.0) out.notes.push_back("n = 2, p >= 4/3: this subcase is also covered by 2.6(C), whose threshold is +inf there");
    } else if (fc.growth_p0) {
      fire("2.9(IV)", LiouvilleVerdict::ConstantForced);
    }
  }

  if (alpha > p - 1.0 && alpha < wang_wei) fire("2.3", LiouvilleVerdict::ConstantForced);
  if (nonneg && alpha < wang_wei) fire("Cor2.1(a)", LiouvilleVerdict::ConstantForced);
  if (nonpos && alpha > p - 1.0) fire("Cor2.1(b)", LiouvilleVerdict::ConstantForced);

  // A positive f admits no positive constant solution, so constancy means nonexistence.
  if (out.verdict == LiouvilleVerdict::ConstantForced && fc.positive) {
    out.verdict = LiouvilleVerdict::NoPositiveSolution;
    out.notes.push_back("f > 0 has no positive constant solution, so constancy forces nonexistence");
  }
  if (out.fired.empty() && fc.pure_power && nonneg && !(ExtendedReal(alpha) < ps)) {
    out.notes.push_back("alpha >= p_s: radial positive solutions exist at alpha = p_s (Emden bubble)");
  }
  return out;
}

// Emden bubble

struct EmdenParams {
  int n;
  double p;
  double lambda;

  double s() const { return p / (p - 1.0); }
  double k() const { return (n - p) / p; }
  double B() const { return std::pow(lambda, s()); }
  double C() const {
    return std::pow(lambda, 1.0 / (p - 1.0)) * std::pow(static_cast<double>(n), 1.0 / p) *
           std::pow((n - p) / (p - 1.0), (p - 1.0) / p);
  }
  double ps() const { return ((n + 1.0) * p - n) / (n - p); }
};

inline EmdenParams emden_params(int n, double p, double lambda) {
  detail::check_np(n, p);
  if (!(p < n)) throw PreconditionError("the Emden bubble needs 1 < p < n");
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  return {n, p, lambda};
}

/// u(r) = (C / (B + r^s))^k, on doubles or jets in r.
template <class T>
T emden_bubble(const EmdenParams& e, const T& r) {
  using std::pow;
  return pow(e.C() / (e.B() + pow(r, e.s())), e.k());
}

inline double emden_bubble(int n, double p, double lambda, double r) {
  return emden_bubble(emden_params(n, p, lambda), r);
}

/// Radial Lap_p of the bubble from the exact flux
/// r^{n-1}|u'|^{p-2}u' = -K r^n (B + r^s)^{-q},  K = (k s C^k)^{p-1},  q = n(p-1)/p.
inline double emden_p_laplacian(const EmdenParams& e, double r) {
  const double s = e.s(), k = e.k(), B = e.B(), q = e.n * (e.p - 1.0) / e.p;
  const double K = std::pow(k * s * std::pow(e.C(), k), e.p - 1.0);
  const double rs = std::pow(r, s), base = B + rs;
  return -K * (e.n * std::pow(base, -q) - q * s * rs * std::pow(base, -q - 1.0));
}

/// max over the grid of |Lap_p u + u^{p_s}| / u^{p_s}.
inline IdentityReport emden_residual(int n, double p, double lambda, const std::vector<double>& radii,
                                     double tol = 1e-8) {
  const auto e = emden_params(n, p, lambda);
  ResidualAccumulator acc("emden_residual", tol);
  for (double r : radii) {
    if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
    const double u = emden_bubble(e, r);
    const double ups = std::pow(u, e.ps());
    const double lap = emden_p_laplacian(e, r);
    acc.add_residual(std::abs(lap + ups) / ups, std::abs(lap + ups),
                     [&](std::ostream& os) { os << "n=" << n << " p=" << p << " lambda=" << lambda << " r=" << r; });
  }
  return acc.finish();
}

}  // namespace plap
