#pragma once

#include <stdexcept>
#include <string>

namespace hsu2 {

// Argument outside the mathematical domain of an operation (bad index,
// time outside the gate window, derivative at a discontinuity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input violates a stated invariant (non-unitary matrix, bad gate form).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsu2
