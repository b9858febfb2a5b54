#pragma once

#include <stdexcept>
#include <string>

namespace spindimer {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: parameters, configs, presets, brackets. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical guard tripped. CLI exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonHermitianInput : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotAState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonPositiveTemperature : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParameter : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BracketInvalid : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownPreset : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace spindimer
