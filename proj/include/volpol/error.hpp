#pragma once

#include <stdexcept>
#include <string>

namespace volpol {

// Bad or inconsistent input data (malformed files, invariant violations).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid option combination, e.g. a filter policy the input cannot support.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistic is undefined for the given input (zero variance, zero log-spacing).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace volpol
