#pragma once

#include <stdexcept>
#include <string>

namespace ixpsim {

// Raised for malformed or inconsistent input data (CSV/JSON parse failures,
// schema violations, broken referential integrity). The CLI maps this to
// exit code 2; API misuse (violated preconditions) uses std::invalid_argument.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}

  DataError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what) {}
};

}  // namespace ixpsim
