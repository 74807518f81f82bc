#pragma once

#include <stdexcept>
#include <string>

namespace landau {

// Exit codes used by the command-line front end. Library code throws the
// exception types below and the CLI maps them onto these values.
enum class ExitCode : int {
  kPass = 0,
  kVerdictFailure = 1,
  kUsage = 2,
  kInsufficientData = 3,
  kNumericFailure = 4,
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an explicit time step would drive the density negative.
class StepSizeError : public NumericError {
 public:
  StepSizeError(const std::string& what, double time, double dt)
      : NumericError(what), time_(time), dt_(dt) {}
  double time() const noexcept { return time_; }
  double dt() const noexcept { return dt_; }

 private:
  double time_;
  double dt_;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace landau
