#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphmill {

// Invalid run configuration or parameters. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data. Carries the 1-based line number when known (0 = whole stream).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// BSP memory budget exceeded; raised before any superstep runs. CLI exit code 3.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal engine invariant broken (lost vertex record, unsorted run, unknown
// destination). CLI exit code 4.
class EngineFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulated-DFS failure: missing file, I/O error, or concurrent write to one file.
class DfsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphmill
