#pragma once

#include <stdexcept>
#include <string>

namespace lcpp {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  std::size_t line_number;
};

// The requested level sits exactly on a multiple of the penalty saturation
// value, where the explicit dual bound degenerates to zero.
struct degenerate_level_error : config_error {
  using config_error::config_error;
};

}  // namespace lcpp
