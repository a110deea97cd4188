#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

// Argument outside the mathematical domain of an operation (alpha <= -1,
// t <= 0, |t| >= T0, nu outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request exceeds a configured capability (order caps, unsupported norm pairs,
// kernels the library does not expose).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical procedure could not reach its tolerance. Carries the estimate.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

// Spectral truncation cannot meet the requested tail tolerance.
class TruncationError : public AccuracyError {
 public:
  using AccuracyError::AccuracyError;
};

// Caller-side precondition violated (e.g. |g''| dips below delta).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dlab

namespace dlab {

// Regression input unusable (too few points, zero or non-finite entries).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dlab
