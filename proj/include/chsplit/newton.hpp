#pragma once

#include "chsplit/errors.hpp"
#include "chsplit/sparse_linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chsplit {

struct NewtonOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_iter = 30;
    /// Step halvings tried when a full step does not reduce the residual.
    int max_halvings = 10;
};

struct NewtonReport {
    int iterations = 0;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    int halvings = 0;
    std::vector<double> residual_history;
};

/// Residual F(x) and its exact Jacobian.
class NonlinearSystem {
public:
    virtual ~NonlinearSystem() = default;
    virtual Vector residual(const Vector& x) const = 0;
    virtual SparseMatrix jacobian(const Vector& x) const = 0;
};

class NewtonError : public SolverError {
public:
    NewtonError(const std::string& what, NewtonReport report)
        : SolverError(what, report.residual_history), report_(std::move(report)) {}
    const NewtonReport& report() const noexcept { return report_; }

private:
    NewtonReport report_;
};

/// Damped Newton iteration. Converged when ||F|| <= abs_tol or
/// ||F|| <= rel_tol * ||F(x0)||. Throws NewtonError on iteration cap,
/// failed damping, or a non-finite residual.
std::pair<Vector, NewtonReport> newton_solve(const NonlinearSystem& system, Vector guess,
                                             const NewtonOptions& options);

} // namespace chsplit
