#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphnoise {

/// Invalid arguments or malformed in-memory inputs.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed file contents; carries the 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t line_number)
      : std::runtime_error(message + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  std::size_t line;
};

/// Failed filesystem reads/writes.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad sweep or CLI configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& message, int at_epoch)
      : std::runtime_error(message + " (epoch " + std::to_string(at_epoch) + ")"),
        epoch(at_epoch) {}
  int epoch;
};

}  // namespace graphnoise
