#pragma once

#include <stdexcept>
#include <string>

namespace rowsim {

/// Bad user input: config file, CLI flags, trace files. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Trace line that does not parse; carries the offending line number.
class TraceParseError : public ConfigError {
 public:
  TraceParseError(const std::string& what, long line)
      : ConfigError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Internal invariant broke: an illegal command was applied, a schedule
/// violated timing. Never absorbed; CLI exit code 3.
class HardFault : public std::logic_error {
 public:
  explicit HardFault(const std::string& what) : std::logic_error(what) {}
};

/// Caller violated a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace rowsim
