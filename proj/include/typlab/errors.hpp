#pragma once

#include <stdexcept>
#include <string>

namespace typlab {

/// Invalid parameters, grids or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the domain of an operation (all-zero density, mismatched bins, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for failures of the numerics themselves.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Wave function not resolved by the grid (spectral tail too heavy).
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Conditioning on an environment value where the slice of the wave function vanishes.
class DegenerateSliceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace typlab
