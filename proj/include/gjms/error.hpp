#pragma once

#include <stdexcept>
#include <string>

namespace gjms {

/// Invalid parameters or configuration (violated preconditions).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method (Newton, quadrature refinement, descent) did not
/// reach its tolerance within the allotted budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies at (or within the guard distance of) an excluded point.
class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace gjms
