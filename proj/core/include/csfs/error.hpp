#pragma once

#include <stdexcept>
#include <string>

namespace csfs {

// Invalid input data: unparseable files, inconsistent artifacts, degenerate
// datasets. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid caller-supplied configuration (bad flag values, mismatched
// artifact/topology pairs). The CLI maps this to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace csfs
