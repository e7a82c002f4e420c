#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace topopump {

/// Invalid or incomplete run configuration. Carries the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

  /// The same error with a location prefix such as "run.cfg:3".
  ConfigError located(const std::string& where) const { return ConfigError(field_, where + ": " + what(), 0); }

 private:
  ConfigError(std::string field, const std::string& full_message, int)
      : std::runtime_error(full_message), field_(std::move(field)) {}

  std::string field_;
};

/// Integration or eigensolver failure (instability, NaN, non-convergence,
/// broken gap-state continuity, undefined phase).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topopump
