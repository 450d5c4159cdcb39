#pragma once

#include <stdexcept>
#include <string>

namespace pssmp {

// Bad user input. The CLI maps this family to exit code 2.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside a function's domain (pole of Gamma, x = 0 for a density...).
struct DomainError : ParameterError {
  using ParameterError::ParameterError;
};

// A theorem's hypotheses do not hold for the supplied inputs.
struct PreconditionError : ParameterError {
  using ParameterError::ParameterError;
};

// Numerical failure. The CLI maps this family to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integral or transform diverges (Mellin outside its strip, non-normalizable density).
struct DivergenceError : NumericError {
  using NumericError::NumericError;
};

// No sign change on the bracket handed to a root finder.
struct BracketError : NumericError {
  using NumericError::NumericError;
};

}  // namespace pssmp
