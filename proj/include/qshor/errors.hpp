#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qshor {

// Invalid arguments or domain violations detected before any work starts.
struct param_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reversible program failed validation (wire out of range, aliased control, ...).
struct typing_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Control nesting exceeded what the fixed gate set can express.
struct translate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simulator resource cap exceeded; carries the support size that tripped the cap.
struct resource_error : std::runtime_error {
  std::uint64_t peak_support;
  resource_error(const std::string& msg, std::uint64_t peak)
      : std::runtime_error(msg), peak_support(peak) {}
};

// Malformed OpenQASM input, with a 1-based source position.
struct parse_error : std::runtime_error {
  int line;
  int column;
  parse_error(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                           std::to_string(column_)),
        line(line_),
        column(column_) {}
};

// Filesystem problems surfaced by the CLI.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qshor
