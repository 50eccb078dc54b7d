#pragma once
#include <stdexcept>
#include <string>

namespace plap {

/// Argument outside the domain of an operation (e.g. radius beyond r_max).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Evaluation at a (near-)critical point where the formula is singular.
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, integration) failed to converge.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

/// The requested quantity needs derivative data the source cannot provide.
struct CapabilityError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Malformed or contradictory user input.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace plap
