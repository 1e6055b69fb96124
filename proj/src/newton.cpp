#include "chsplit/newton.hpp"

#include <cmath>

namespace chsplit {

std::pair<Vector, NewtonReport> newton_solve(const NonlinearSystem& system, Vector x, const NewtonOptions& options)
{
    NewtonReport report;
    Vector r = system.residual(x);
    double rnorm = r.norm();
    report.initial_residual = rnorm;
    report.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) {
        throw NewtonError("newton_solve: non-finite initial residual", report);
    }
    const double target = std::max(options.abs_tol, options.rel_tol * rnorm);

    ReusableLu lu;
    while (rnorm > target) {
        if (report.iterations >= options.max_iter) {
            report.final_residual = rnorm;
            throw NewtonError("newton_solve: no convergence in " + std::to_string(options.max_iter)
                                  + " iterations (residual " + std::to_string(rnorm) + ")",
                              report);
        }
        lu.factorize(system.jacobian(x));
        const Vector dx = lu.solve(-r, 1e-8);

        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= options.max_halvings; ++h) {
            Vector trial = x + step * dx;
            Vector rt = system.residual(trial);
            const double tn = rt.norm();
            if (!std::isfinite(tn)) {
                if (h == options.max_halvings) {
                    report.final_residual = rnorm;
                    throw NewtonError("newton_solve: residual diverged to a non-finite value", report);
                }
            } else if (tn < rnorm) {
                x = std::move(trial);
                r = std::move(rt);
                rnorm = tn;
                accepted = true;
                break;
            }
            step *= 0.5;
            ++report.halvings;
        }
        ++report.iterations;
        report.residual_history.push_back(rnorm);
        if (!accepted) {
            report.final_residual = rnorm;
            throw NewtonError("newton_solve: damping failed to reduce the residual " + std::to_string(rnorm), report);
        }
    }
    report.final_residual = rnorm;
    return {std::move(x), std::move(report)};
}

} // namespace chsplit
