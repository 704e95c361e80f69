#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckptsim {

/// A precondition of a model operation was violated by the caller.
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A domain value failed its invariant check.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Scenario file could not be parsed or validated. `line()` is 0 when the
/// problem is not tied to a single line.
class ScenarioError : public std::runtime_error {
public:
  ScenarioError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Communication script is malformed or deadlocks.
class ScriptError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ckptsim
