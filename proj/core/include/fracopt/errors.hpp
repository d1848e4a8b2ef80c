#pragma once

#include <stdexcept>
#include <string>

namespace fracopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter combination (orders, truncation indices, grid sizes).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (poles, t outside [a,b]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Result not representable as a finite double.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A required capability is missing, e.g. a derivative callable with the
/// finite-difference fallback disabled.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Input record is missing channels that an evaluation needs.
class IncompleteInputError : public Error {
 public:
  using Error::Error;
};

/// Problem variant that the data model represents but the solver rejects.
class UnsupportedVariantError : public Error {
 public:
  using Error::Error;
};

/// Reduced dynamics denominator vanishes or changes sign on the horizon.
class SingularReductionError : public Error {
 public:
  using Error::Error;
};

class SingularJacobianError : public Error {
 public:
  SingularJacobianError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class IntegrationBlowupError : public Error {
 public:
  IntegrationBlowupError(const std::string& what, double time)
      : Error(what), time_(time) {}
  /// Time at which the field first returned a non-finite value.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Free-time bracket is degenerate or has no sign change of the time residual.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Problem definition failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Config file parse failure; carries the 1-based line number (0 if unknown).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace fracopt
