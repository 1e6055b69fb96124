#pragma once

#include "chsplit/diagnostics.hpp"
#include "chsplit/initial_condition.hpp"
#include "chsplit/newton.hpp"
#include "chsplit/operators.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace chsplit {

enum class InitPhiMode { Ritz, Interp };
enum class InitMuMode { RitzAnalytic, DiscreteVariational };

struct SchemeParams {
    double epsilon = 0.0;
    double tau = 0.0;
    double final_time = 0.0;
    int degree = 2;
    NewtonOptions newton;
    InitPhiMode init_phi = InitPhiMode::Interp;
    InitMuMode init_mu = InitMuMode::DiscreteVariational;

    /// Throws InvalidArgument for nonpositive epsilon/tau/T/tolerances.
    void validate() const;
    /// T / tau; throws InvalidArgument unless tau divides T to 1e-12 relative.
    int num_steps() const;
};

/// Sliding window of the two-step recurrence.
struct SchemeState {
    int step = 0;                      ///< m: phi_curr is phi^m
    std::optional<Field> phi_prev;     ///< phi^{m-1}, absent at m = 0
    Field phi_curr;                    ///< phi^m
    std::optional<Field> mu_half_last; ///< mu^{m-1/2}, absent at m = 0
    Field mu0;                         ///< mu_h^0, consumed by the first step
};

/// chi(a, b) = (a^2 + b^2)(a + b)/4, the implicit part of the nonlinear term.
constexpr double chi(double a, double b) noexcept { return 0.25 * (a * a + b * b) * (a + b); }
constexpr double chi_da(double a, double b) noexcept { return 0.5 * a * (a + b) + 0.25 * (a * a + b * b); }
constexpr double chi_db(double a, double b) noexcept { return 0.5 * b * (a + b) + 0.25 * (a * a + b * b); }

/// Builds phi_h^0 and mu_h^0 according to the initialization modes.
/// Throws ConfigError when a mode needs derivatives the initial condition lacks.
SchemeState initialize(const SchemeParams& params, const DiscreteOperators& ops, const InitialCondition& ic);

/// Coupled weak equations for one time step in the unknowns x = [phi^{m+1}; mu^{m+1/2}].
///
/// Row block a:  M (phi^{m+1} - phi^m) + tau eps K mu
/// Row block b:  N(phi^{m+1}, phi^m)/eps - M phi_tilde/eps + eps K phi_check - M mu
/// where N_i = <chi(phi^{m+1}, phi^m), psi_i>. For the regular step
/// phi_tilde = 3/2 phi^m - 1/2 phi^{m-1} and phi_check = 3/4 phi^{m+1} + 1/4 phi^{m-1};
/// the first step uses phi_tilde = phi^0, phi_check = (phi^1 + phi^0)/2 and the
/// extra load tau/2 K mu^0.
class StepSystem final : public NonlinearSystem {
public:
    static StepSystem first_step(const SchemeState& state, const SchemeParams& params, const DiscreteOperators& ops);
    static StepSystem regular_step(const SchemeState& state, const SchemeParams& params,
                                   const DiscreteOperators& ops);

    Vector residual(const Vector& x) const override;
    SparseMatrix jacobian(const Vector& x) const override;

    /// phi: extrapolation 2 phi^m - phi^{m-1} (phi^0 on the first step); mu: last half-step value (mu^0).
    Vector initial_guess() const { return guess_; }
    int num_dofs() const noexcept { return n_; }

private:
    StepSystem(const DiscreteOperators& ops, double epsilon, double tau, double check_weight);
    // Nonlinear load N and optionally the Jacobian block d N / d phi^{m+1}.
    void assemble_nonlinear(const Vector& phi_next, Vector* load, std::vector<Eigen::Triplet<double>>* jac) const;

    const DiscreteOperators* ops_;
    double epsilon_;
    double tau_;
    double check_weight_;
    int n_;
    Vector phi_curr_;
    Vector const_a_;
    Vector const_b_;
    Vector guess_;
    SparseMatrix linear_jacobian_;
};

struct StepResult {
    Field phi_next;
    Field mu_half;
    NewtonReport newton;
};

StepResult first_step(const SchemeState& state, const SchemeParams& params, const DiscreteOperators& ops);
StepResult step(const SchemeState& state, const SchemeParams& params, const DiscreteOperators& ops);

/// Shift the window after a step.
void advance(SchemeState& state, StepResult result);

/// Called after initialization (m = 0) and after every step.
using StepObserver = std::function<void(const SchemeState&, const DiagnosticsRecord&)>;

struct RunResult {
    Trajectory trajectory;
    SchemeState final_state;
};

/// Initialize, take the first step, then M-1 regular steps.
RunResult run(const SchemeParams& params, std::shared_ptr<const DiscreteOperators> ops, const InitialCondition& ic,
              std::span<const StepObserver> observers = {});
RunResult run(const SchemeParams& params, std::shared_ptr<const FeSpace> space, const InitialCondition& ic,
              std::span<const StepObserver> observers = {});

} // namespace chsplit
