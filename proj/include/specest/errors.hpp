#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specest {

/// A matrix that must be symmetric was not.
class symmetry_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced NaN or infinity.
class non_finite_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A combinatorial guard was exceeded (e.g. exhaustive enumeration).
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace specest
