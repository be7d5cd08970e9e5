#pragma once

#include <stdexcept>
#include <string>

namespace gbspec {

// Caller passed arguments outside an operation's domain (index, degree, size).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A section-space feasibility constraint is violated, e.g. a trigonometric
// phase of at least pi on some knot interval.
class ConstraintViolation : public std::domain_error {
 public:
  explicit ConstraintViolation(const std::string& what, int min_feasible_n = -1)
      : std::domain_error(what), min_feasible_n_(min_feasible_n) {}

  // Smallest number of subintervals that makes the phase feasible, or -1.
  int min_feasible_n() const { return min_feasible_n_; }

 private:
  int min_feasible_n_;
};

// Input data (coefficients, geometry maps, configs) failed grid validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical procedure failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbspec
