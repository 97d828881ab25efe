#pragma once

#include <stdexcept>
#include <string>

namespace rsw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: configuration, regime or precondition problems (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Failure while computing on valid input (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RegimeViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainTooSmall : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SlowTimeOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Data outside the zero-mean space on which the antiderivative is defined.
class NonZeroMean : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Water depth 1 + eps*zeta - beta*b dropped below h_min.
class NonPositiveDepth : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EllipticSolveFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonFinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotAnOstrovskySolution : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A stepper error re-raised by the integrator with the failing time attached.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(double time, const std::string& cause)
      : NumericalError("integration failed at t=" + std::to_string(time) + ": " + cause),
        time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace rsw
