#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace ppborrow {

/// Short "%g" rendering for error messages.
inline std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Invalid argument or violated precondition. The CLI maps this to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The historical data make the initial Be(0,0) prior improper (x0 in {0, n0}).
class ImproperPriorError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// X'X is not positive definite.
class SingularDesignError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Zero or full event counts; a log risk ratio needs a continuity correction.
class ContinuityCorrectionRequired : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative routine (series, quadrature, factorization) failed to reach its
/// target. Carries the last estimate and its error bound. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string what_failed, double last_estimate, double error_bound)
      : std::runtime_error(what_failed + " (last estimate " + format_g(last_estimate) +
                           ", error estimate " + format_g(error_bound) + ")"),
        last_estimate_(last_estimate),
        error_bound_(error_bound) {}

  [[nodiscard]] double last_estimate() const noexcept { return last_estimate_; }
  [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

 private:
  double last_estimate_;
  double error_bound_;
};

}  // namespace ppborrow
