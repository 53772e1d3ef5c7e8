#pragma once

#include <stdexcept>

namespace swe {

/// Loss of positivity, a diverging iteration or a non-finite value.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace swe
