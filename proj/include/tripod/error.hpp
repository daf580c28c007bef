#pragma once

#include <stdexcept>
#include <string>

namespace tripod {

/// Violated precondition on an argument (bad size, out-of-range index, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced a result that violates a physical or numerical
/// invariant (non-convergence, efficiency above one, unstable growth).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateKernelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tripod
