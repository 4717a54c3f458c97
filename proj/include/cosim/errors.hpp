#pragma once

#include <stdexcept>
#include <string>

namespace cosim {

// Raised for numeric breakdown: non-finite values, step-size underflow.
// Usage and configuration problems use std::invalid_argument instead.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cosim
