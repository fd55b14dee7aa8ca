#pragma once

#include <stdexcept>
#include <string>

namespace binn {

// Problem-definition/schema violations. CLI exit code 2.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad geometry: open loops, degenerate elements.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration values (quadrature order, alpha range, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training diverged (non-finite or exploding loss). CLI exit code 3.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure in assembly or the linear solve. CLI exit code 4.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Point queries outside their admissible domain.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace binn
