#pragma once

#include <stdexcept>
#include <string>

namespace afpk {

// Bad parameter values (negative coefficients, exponents out of range, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Arguments outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A discretisation could not reach its accuracy gate (grid too coarse,
// quadrature or tail truncation did not converge).
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Valid request that this implementation does not cover (e.g. d_i > 3).
struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace afpk
