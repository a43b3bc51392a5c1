#pragma once

#include <stdexcept>
#include <string>

namespace eigencond {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to meet its accuracy contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonHermitianError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

class DivergentIntegralError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PairingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double res)
      : NumericalError(what), residual(res) {}
  double residual;
};

class NotPsdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StuckSamplerError : public NumericalError {
 public:
  StuckSamplerError(const std::string& what, double e_star)
      : NumericalError(what), last_energy_star(e_star) {}
  double last_energy_star;
};

class InvalidBetaError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class LatticeError : public Error {
 public:
  using Error::Error;
};

class EmptyObservableError : public Error {
 public:
  using Error::Error;
};

class InterruptedError : public Error {
 public:
  using Error::Error;
};

}  // namespace eigencond
