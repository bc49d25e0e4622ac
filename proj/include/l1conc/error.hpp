#pragma once

#include <stdexcept>
#include <string>

namespace l1conc {

/// Input violates a documented precondition (bad simplex vector, S < 2, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside the domain where a closed-form expression is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Problem instance is too large for the requested exact computation.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace l1conc
