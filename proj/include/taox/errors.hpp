#pragma once

#include <stdexcept>
#include <string>

namespace taox {

/// Raised when a configuration file cannot be parsed or fails validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a linear or nonlinear solve fails to converge.
/// Carries the last residual and iteration count for diagnostics.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}

    double residual = 0.0;
    int iterations = 0;
};

} // namespace taox
