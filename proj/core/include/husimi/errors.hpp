#pragma once

#include <stdexcept>
#include <string>

namespace husimi {

// Numerical-guard violation (truncation blow-up, step-size rejection,
// escaped-characteristic fraction, ...). CLI maps this to exit code 3.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration parse/validation failure. Message names the offending
// field. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Output-side failure (unwritable path, ...). CLI maps this to exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace husimi
