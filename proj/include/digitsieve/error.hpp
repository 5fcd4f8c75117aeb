#pragma once

#include <stdexcept>
#include <string>

namespace digitsieve {

// Bad input or a violated precondition. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured resource cap (enumeration size, table size, search size) would
// be exceeded. The CLI maps this to exit code 1.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace digitsieve
