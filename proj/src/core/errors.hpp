#pragma once

#include <stdexcept>
#include <string>

namespace deconv {

//! Invalid user-facing configuration (bad key, value out of range, ...).
//! The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument
{
public:
  explicit ConfigError(const std::string& what)
    : std::invalid_argument(what)
  {}
};

//! A computation produced a value that cannot be trusted (non-finite
//! contrast, parity violation, lost orthogonality). Exit code 3.
class NumericalError : public std::runtime_error
{
public:
  explicit NumericalError(const std::string& what)
    : std::runtime_error(what)
  {}
};

//! File could not be read or written.
class IoError : public std::runtime_error
{
public:
  explicit IoError(const std::string& what)
    : std::runtime_error(what)
  {}
};

} // namespace deconv
