#pragma once

#include <stdexcept>
#include <string>

namespace bcglpm {

// Input/validation problems (bad files, bad dimensions, bad flags).
// The CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures (factorization breakdown, non-finite results).
// The CLI maps these to exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bcglpm
