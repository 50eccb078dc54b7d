#pragma once
/// Result records shared by the verification modules, and the residual
/// accumulators that fill them.

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>

namespace plap {

struct IdentityReport {
  std::string identity_id;
  std::uint64_t samples = 0;
  std::uint64_t skipped = 0;  // near-critical samples filtered out
  double max_rel_residual = 0.0;
  double max_abs_residual = 0.0;
  std::string worst_case;
  double tol = 0.0;
  bool pass = true;
};

struct InequalityReport {
  std::string identity_id;
  std::uint64_t samples = 0;
  std::uint64_t skipped = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string worst_case;
  double tol_neg = 0.0;
  bool pass = true;
};

/// |L - R| / (|L| + |R| + floor).
inline double relative_residual(double lhs, double rhs) {
  constexpr double kFloor = std::numeric_limits<double>::min();
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + kFloor);
}

/// Folds per-sample residuals into an IdentityReport.
class ResidualAccumulator {
 public:
  ResidualAccumulator(std::string id, double tol) {
    report_.identity_id = std::move(id);
    report_.tol = tol;
  }

  /// `describe` is called only when the sample becomes the worst case.
  template <class Describe>
  void add(double lhs, double rhs, Describe&& describe) {
    ++report_.samples;
    const double rel = relative_residual(lhs, rhs);
    const double abs = std::abs(lhs - rhs);
    report_.max_abs_residual = std::max(report_.max_abs_residual, abs);
    if (report_.samples == 1 || !(rel <= report_.max_rel_residual)) {
      report_.max_rel_residual = std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity();
      std::ostringstream os;
      os.precision(17);
      describe(os);
      os << " lhs=" << lhs << " rhs=" << rhs;
      report_.worst_case = os.str();
    }
  }
  /// Records an already normalized residual.
  template <class Describe>
  void add_residual(double rel, double abs, Describe&& describe) {
    ++report_.samples;
    report_.max_abs_residual = std::max(report_.max_abs_residual, abs);
    if (report_.samples == 1 || !(rel <= report_.max_rel_residual)) {
      report_.max_rel_residual = std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity();
      std::ostringstream os;
      os.precision(17);
      describe(os);
      os << " residual=" << rel;
      report_.worst_case = os.str();
    }
  }
  void skip() { ++report_.skipped; }

  void merge(const IdentityReport& other) {
    report_.samples += other.samples;
    report_.skipped += other.skipped;
    report_.max_abs_residual = std::max(report_.max_abs_residual, other.max_abs_residual);
    if (other.max_rel_residual > report_.max_rel_residual) {
      report_.max_rel_residual = other.max_rel_residual;
      report_.worst_case = other.worst_case;
    }
  }

  IdentityReport finish() const {
    IdentityReport r = report_;
    r.pass = r.samples > 0 && r.max_rel_residual <= r.tol;
    return r;
  }

 private:
  IdentityReport report_;
};

/// Folds normalized margins (LHS - RHS) / scale into an InequalityReport.
class MarginAccumulator {
 public:
  MarginAccumulator(std::string id, double tol_neg) {
    report_.identity_id = std::move(id);
    report_.tol_neg = tol_neg;
  }

  template <class Describe>
  void add(double normalized_margin, Describe&& describe) {
    ++report_.samples;
    if (normalized_margin < report_.min_margin || std::isnan(normalized_margin)) {
      report_.min_margin = std::isnan(normalized_margin) ? -std::numeric_limits<double>::infinity() : normalized_margin;
      std::ostringstream os;
      os.precision(17);
      describe(os);
      os << " margin=" << normalized_margin;
      report_.worst_case = os.str();
    }
  }
  void skip() { ++report_.skipped; }

  void merge(const InequalityReport& other) {
    report_.samples += other.samples;
    report_.skipped += other.skipped;
    if (other.min_margin < report_.min_margin) {
      report_.min_margin = other.min_margin;
      report_.worst_case = other.worst_case;
    }
  }

  InequalityReport finish() const {
    InequalityReport r = report_;
    r.pass = r.samples > 0 && r.min_margin >= -r.tol_neg;
    return r;
  }

 private:
  InequalityReport report_;
};

}  // namespace plap
