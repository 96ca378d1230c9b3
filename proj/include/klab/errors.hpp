#pragma once

#include <stdexcept>
#include <string>

namespace klab {

// Bad user input: configs, invalid lattice parameters, precondition violations.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: Newton stagnation, positivity loss, Krylov breakdown.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace klab
