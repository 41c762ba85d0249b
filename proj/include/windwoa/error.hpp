#pragma once

#include <stdexcept>
#include <string>

namespace windwoa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition: mismatched dimensions, wrong vector length,
/// out-of-range argument.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data could not be read or failed validation.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A metric is mathematically undefined for the given series
/// (zero variance, zero mean, ...).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// No initial search agent produced a finite objective value.
class InitializationError : public Error {
 public:
  using Error::Error;
};

}  // namespace windwoa
