#pragma once
/// Nonlinearities f in  -Lap_p u = f(u).

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>

#include "plap/errors.hpp"
#include "plap/jet.hpp"

namespace plap {

enum class ReactionFamily {
  PurePower,         // s t^alpha
  PowerLog,          // t^alpha (log(1 + t))^beta
  TwoPower,          // t^alpha + a t^beta
  Rational,          // t^alpha / (1 + t^beta)
  LinearMinusPower,  // t^alpha - lambda t
  Zero,              // 0
  Custom,
};

enum class SignClass { Nonnegative, Nonpositive, Mixed };

inline std::string to_string(ReactionFamily f) {
  switch (f) {
    case ReactionFamily::PurePower: return "pure_power";
    case ReactionFamily::PowerLog: return "power_log";
    case ReactionFamily::TwoPower: return "two_power";
    case ReactionFamily::Rational: return "rational";
    case ReactionFamily::LinearMinusPower: return "linear_minus_power";
    case ReactionFamily::Zero: return "zero";
    case ReactionFamily::Custom: return "custom";
  }
  return "?";
}

inline std::string to_string(SignClass s) {
  switch (s) {
    case SignClass::Nonnegative: return "nonnegative";
    case SignClass::Nonpositive: return "nonpositive";
    case SignClass::Mixed: return "mixed";
  }
  return "?";
}

class ReactionTerm {
 public:
  static ReactionTerm pure_power(double alpha, double scale = 1.0) {
    return {ReactionFamily::PurePower, alpha, scale, 0.0,
            scale >= 0.0 ? SignClass::Nonnegative : SignClass::Nonpositive};
  }
  static ReactionTerm power_log(double alpha, double beta) {
    return {ReactionFamily::PowerLog, alpha, 1.0, beta, SignClass::Nonnegative};
  }
  static ReactionTerm two_power(double alpha, double a, double beta) {
    return {ReactionFamily::TwoPower, alpha, a, beta, a >= 0.0 ? SignClass::Nonnegative : SignClass::Mixed};
  }
  static ReactionTerm rational(double alpha, double beta) {
    return {ReactionFamily::Rational, alpha, 1.0, beta, SignClass::Nonnegative};
  }
  /// t^q - lambda t.
  static ReactionTerm linear_minus_power(double q, double lambda) {
    return {ReactionFamily::LinearMinusPower, q, lambda, 0.0, lambda > 0.0 ? SignClass::Mixed : SignClass::Nonnegative};
  }
  static ReactionTerm zero() { return {ReactionFamily::Zero, 0.0, 0.0, 0.0, SignClass::Nonnegative}; }
  /// User nonlinearity on doubles only; jet evaluation is unavailable.
  static ReactionTerm custom(std::function<double(double)> f, std::function<double(double)> df, double alpha,
                             SignClass sign) {
    ReactionTerm r{ReactionFamily::Custom, alpha, 0.0, 0.0, sign};
    r.f_ = std::move(f);
    r.df_ = std::move(df);
    return r;
  }

  ReactionFamily family() const { return family_; }
  /// Declared exponent alpha (q for linear-minus-power).
  double alpha() const { return alpha_; }
  /// Secondary coefficient: scale, a, or lambda.
  double coef() const { return coef_; }
  double beta() const { return beta_; }
  SignClass sign_class() const { return sign_; }
  bool is_zero() const { return family_ == ReactionFamily::Zero; }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(family_) << "(alpha=" << alpha_;
    if (family_ == ReactionFamily::PurePower) os << ", scale=" << coef_;
    if (family_ == ReactionFamily::PowerLog || family_ == ReactionFamily::Rational) os << ", beta=" << beta_;
    if (family_ == ReactionFamily::TwoPower) os << ", a=" << coef_ << ", beta=" << beta_;
    if (family_ == ReactionFamily::LinearMinusPower) os << ", lambda=" << coef_;
    os << ")";
    return os.str();
  }

  /// f(t) for t > 0 (t >= 0 for doubles), on doubles or jets.
  template <class T>
  T eval(const T& t) const {
    using std::log;
    using std::pow;
    switch (family_) {
      case ReactionFamily::PurePower: return coef_ * pow(t, alpha_);
      case ReactionFamily::PowerLog: return pow(t, alpha_) * pow(log(1.0 + t), beta_);
      case ReactionFamily::TwoPower: return pow(t, alpha_) + coef_ * pow(t, beta_);
      case ReactionFamily::Rational: return pow(t, alpha_) / (1.0 + pow(t, beta_));
      case ReactionFamily::LinearMinusPower: return pow(t, alpha_) - coef_ * t;
      case ReactionFamily::Zero: return T(0.0);
      case ReactionFamily::Custom:
        if constexpr (std::is_same_v<T, double>) {
          return f_(t);
        } else {
          throw CapabilityError("custom nonlinearity has no jet evaluation");
        }
    }
    return T(0.0);
  }

  double operator()(double t) const { return eval(t); }

  /// f'(t) for t > 0, by forward differentiation (or the user derivative).
  double derivative(double t) const {
    if (family_ == ReactionFamily::Custom) return df_(t);
    if (family_ == ReactionFamily::Zero) return 0.0;
    return eval(Jet<1, 1>::variable(0, t)).coeff(1);
  }

  /// Odd extension used past a zero crossing: f(u) for u >= 0, -f(-u) below.
  double eval_extended(double u) const { return u >= 0.0 ? eval(u) : -eval(-u); }

  /// Exact verdict of the subcriticality condition for exponent `a` when the
  /// family admits a closed-form sign analysis of a f - t f'.
  std::optional<bool> analytic_subcritical(double a) const {
    switch (family_) {
      case ReactionFamily::Zero: return true;
      case ReactionFamily::PurePower: return coef_ * (a - alpha_) >= 0.0;  // (a - alpha) s t^alpha
      case ReactionFamily::PowerLog:
        // f (a - alpha - beta s(t)) with s(t) = t / ((1 + t) log(1 + t)) ranging over (0, 1).
        return a - alpha_ >= 0.0 && a - alpha_ - beta_ >= 0.0;
      case ReactionFamily::Rational:
        // f (a - alpha + beta s(t)) with s(t) = t^beta / (1 + t^beta) ranging over (0, 1).
        return a - alpha_ >= 0.0 && a - alpha_ + beta_ >= 0.0;
      case ReactionFamily::TwoPower: {
        // (a - alpha) t^alpha + coef (a - beta) t^beta.
        const double c1 = a - alpha_, c2 = coef_ * (a - beta_);
        if (c1 >= 0.0 && c2 >= 0.0) return true;
        if (alpha_ == beta_) return c1 + c2 >= 0.0;
        return false;  // a negative term dominates at 0 or at infinity
      }
      default: return std::nullopt;
    }
  }

 private:
  ReactionTerm(ReactionFamily fam, double alpha, double coef, double beta, SignClass sign)
      : family_(fam), alpha_(alpha), coef_(coef), beta_(beta), sign_(sign) {}

  ReactionFamily family_;
  double alpha_;
  double coef_;
  double beta_;
  SignClass sign_;
  std::function<double(double)> f_;
  std::function<double(double)> df_;
};

}  // namespace plap
