#pragma once

#include <stdexcept>
#include <string>

namespace fracdense {

/// Raised when caller-supplied data violates a precondition. The CLI maps
/// every InputError to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver its contract (budget
/// exhausted, non-finite values, rank loss). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input errors.
class BadExponent : public InputError {
 public:
  using InputError::InputError;
};
class GeometryError : public InputError {
 public:
  using InputError::InputError;
};
class TooCloseToBoundary : public InputError {
 public:
  using InputError::InputError;
};
class OrderTooHigh : public InputError {
 public:
  using InputError::InputError;
};
class BadEta : public InputError {
 public:
  using InputError::InputError;
};
class SupportError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical errors.
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class NonFinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class OverflowRisk : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class BudgetInfeasible : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace fracdense
