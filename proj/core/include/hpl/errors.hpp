#pragma once

#include <stdexcept>
#include <string>

namespace hpl {

/// Invalid or inconsistent configuration / construction arguments.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during a computation (NaN/Inf, CFL refusal, singular solve).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Field/grid shape mismatch between operands.
class ShapeError : public std::runtime_error {
  public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hpl
