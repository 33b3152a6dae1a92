#pragma once

#include <stdexcept>
#include <string>

namespace lastzero {

// Parameters that violate a model or configuration invariant.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (e.g. psi at theta < 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The operation exists only for some model families.
class UnsupportedModel : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Iteration caps, quadrature non-convergence, too-short tables, runaway paths.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lastzero
