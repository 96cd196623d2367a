#pragma once

#include <stdexcept>
#include <string>

namespace stablehcm {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature or series did not reach the requested tolerance.
struct NonConvergence : NumericError {
  using NumericError::NumericError;
};

/// An evaluator returned NaN or infinity at a sampled point.
struct NonFiniteSample : NumericError {
  using NumericError::NumericError;
};

/// Alternating-sign summation lost too many digits (max term / result over guard).
struct CancellationOverflow : NumericError {
  using NumericError::NumericError;
};

struct DomainError : NumericError {
  using NumericError::NumericError;
};

struct GridTooSmall : NumericError {
  using NumericError::NumericError;
};

struct BadRange : NumericError {
  using NumericError::NumericError;
};

/// A theta table endpoint is not where the limit laws say it must be.
struct EndpointMismatch : NumericError {
  using NumericError::NumericError;
};

struct NotMonotone : NumericError {
  using NumericError::NumericError;
};

/// A log-scaled value cannot be exponentiated into a plain double.
struct OverflowRisk : NumericError {
  using NumericError::NumericError;
};

}  // namespace stablehcm
