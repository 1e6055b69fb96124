#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chsplit {

/// Raised for malformed inputs to library entry points (bad mesh size, degree, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Run configuration could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value that must be finite was not (integrand, interpolant, residual).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear or nonlinear solver failed; carries the residual history seen so far.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> residual_history = {})
        : std::runtime_error(what), history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Right-hand side violates the solvability condition of a singular system.
class CompatibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace chsplit
