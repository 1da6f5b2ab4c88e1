#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace driveloop {

// Invalid input file / config content. Carries the offending field name.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Invalid argument to an operation (empty batch, nonpositive dt, ...).
class ArgumentError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite numbers are required.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions between data and parameters.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training diverged; message names the last finite checkpoint if one was kept.
class TrainingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace driveloop
