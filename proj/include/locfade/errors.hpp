#pragma once

#include <stdexcept>
#include <string>

namespace locfade {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numeric procedure (series, quadrature, bracketing) did not reach its
/// tolerance. `partial()` holds the best estimate obtained so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}
  explicit ConvergenceError(const std::string& what)
      : ConvergenceError(what, 0.0, 0.0) {}

  double partial() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

/// Conditional TOA variance is infinite (zero envelope or 1 - sin 2θ = 0).
class DegenerateChannelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fisher information matrix too ill-conditioned to invert.
class SingularGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedRegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No threshold attains the requested operating point.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace locfade
