#pragma once

#include <stdexcept>
#include <string>

namespace empscen {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad dimensions, non-finite data, ...).
struct InvalidInputError : Error {
  using Error::Error;
};

/// Integer overflow in basis-size arithmetic.
struct OverflowError : Error {
  using Error::Error;
};

/// A matrix required to be positive semidefinite is not.
struct NotPsdError : Error {
  using Error::Error;
};

/// Moment normalization violated (total mass of a probability measure is 1).
struct NormalizationError : Error {
  using Error::Error;
};

/// Block-restricted pivoting cannot reduce the residual: the input admits
/// no atomic representation at the requested degree.
struct FlatnessViolationError : Error {
  using Error::Error;
};

/// Scenario extraction failed, e.g. complex joint eigenvalues.
struct ExtractionFailureError : Error {
  using Error::Error;
};

/// Zero pivot with nonzero residual or similar loss of progress.
struct NumericalBreakdownError : Error {
  using Error::Error;
};

/// Division by a vanishing norm.
struct DegenerateError : Error {
  using Error::Error;
};

}  // namespace empscen
