#pragma once

#include <stdexcept>
#include <string>

namespace hyperhardy {

// Nonpositive radius, N out of range, t outside (0, 1], ...
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed construction arguments (grid bounds, weights, parameters).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A test function whose support is not compact inside the integration window.
class SupportError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Non-finite integrand at a quadrature node.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double node)
      : std::runtime_error(what + " at r = " + std::to_string(node)), node_(node) {}
  double node() const noexcept { return node_; }

 private:
  double node_;
};

// Derivative data requested from a function that does not carry it.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Iterative solver failed within its budget, or a value overflowed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The truncated quotient is not positive definite; widen the interval.
class TruncationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Lookup outside a tabulated range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A sample point hit a zero of the function being divided by.
class ResampleError : public std::runtime_error {
 public:
  ResampleError(const std::string& what, double suggested)
      : std::runtime_error(what), suggested_(suggested) {}
  double suggested_point() const noexcept { return suggested_; }

 private:
  double suggested_;
};

// Quadrature window too short for the decay of the integrand.
class RefinementRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable output path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hyperhardy
