#pragma once

#include "chsplit/newton.hpp"
#include "chsplit/operators.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace chsplit {

/// Ginzburg-Landau energy: integral of (phi^2-1)^2/(4 eps) + eps/2 |grad phi|^2.
double energy_E(const Field& phi, double epsilon);

/// Modified energy E(phi) + |phi-psi|^2/(4 eps) + eps/8 |grad(phi-psi)|^2.
double energy_F(const Field& phi_new, const Field& phi_old, double epsilon);

/// Per-step record. Row m describes phi^m and the half-step potential
/// mu^{m-1/2} that produced it.
struct DiagnosticsRecord {
    int m = 0;
    double t = 0.0;
    double mass = 0.0;
    double E = 0.0;
    double F = 0.0;
    double grad_mu_half_L2 = 0.0;
    double mu_half_L2 = 0.0;
    double phi_L2 = 0.0;
    double phi_L4 = 0.0;
    double phi_H1 = 0.0;
    double phi_Linf = 0.0;
    double delta_h_phi_L2 = 0.0;
    double dtau_phi_L2 = 0.0;
    int newton_iters = 0;
    double newton_residual = 0.0;

    // Quantities for the stability ledger (not in the CSV).
    double grad_phi_sq = 0.0;         ///< ||grad phi^m||^2
    double well_sq = 0.0;             ///< ||(phi^m)^2 - 1||^2
    double phi_diff_sq = 0.0;         ///< ||phi^m - phi^{m-1}||^2
    double grad_phi_diff_sq = 0.0;    ///< ||grad(phi^m - phi^{m-1})||^2
    double second_diff_sq = 0.0;      ///< ||phi^m - 2 phi^{m-1} + phi^{m-2}||^2
    double grad_second_diff_sq = 0.0; ///< same for the gradient
    double energy_law_residual = 0.0; ///< telescoped energy identity, relative to F(phi^1, phi^0)
    double step_law_residual = 0.0;   ///< single-step form of the identity, same scaling
};

/// Fields describing step m: phi^m and up to two predecessors, plus mu^{m-1/2}.
struct StepFields {
    int m = 0;
    double t = 0.0;
    const Field* phi = nullptr;
    const Field* phi_prev = nullptr;
    const Field* phi_prev2 = nullptr;
    const Field* mu_half = nullptr;
    const NewtonReport* newton = nullptr;
};

DiagnosticsRecord measure_step(const DiscreteOperators& ops, double epsilon, double tau, const StepFields& fields);

/// Monitored properties of the initial data.
struct InitialDiagnostics {
    DiagnosticsRecord record;        ///< m = 0 row (F = E)
    double delta_h_mu0_L2 = 0.0;     ///< ||Lap_h mu_h^0||
    double mu0_L2 = 0.0;
    /// E(phi^0) + tau^2 ||Lap_h mu^0||^2 + ||Lap_h phi^0||^2.
    double initial_stability = 0.0;
};

InitialDiagnostics measure_initial(const DiscreteOperators& ops, double epsilon, double tau, const Field& phi0,
                                   const Field& mu0);

/// Both sides of the first-step energy inequality
/// E(phi^1) + tau eps ||grad mu^{1/2}||^2 + ||phi^1-phi^0||^2/(4 eps)
///   <= E(phi^0) + eps tau^2/4 ||Lap_h mu^0||^2.
struct FirstStepCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin() const noexcept { return rhs - lhs; }
};

FirstStepCheck first_step_energy_check(const InitialDiagnostics& initial, const DiagnosticsRecord& step1,
                                       double epsilon, double tau);

/// Accumulates the telescoped energy law
/// F(phi^{l+1}, phi^l) + sum_{m=1}^{l} D_m = F(phi^1, phi^0), with
/// D_m = tau eps ||grad mu^{m+1/2}||^2 + ||second diff||^2/(4 eps) + eps/8 ||grad second diff||^2.
class EnergyLawTracker {
public:
    EnergyLawTracker(double epsilon, double tau) : epsilon_(epsilon), tau_(tau) {}

    void start(double F1) noexcept
    {
        F1_ = F1;
        F_last_ = F1;
        accumulated_ = 0.0;
    }
    /// Fills record.energy_law_residual and record.step_law_residual.
    void add_step(DiagnosticsRecord& record);

    double reference() const noexcept { return F1_; }
    double accumulated_dissipation() const noexcept { return accumulated_; }

private:
    double epsilon_;
    double tau_;
    double F1_ = 0.0;
    double F_last_ = 0.0;
    double accumulated_ = 0.0;
};

struct Trajectory {
    double epsilon = 0.0;
    double tau = 0.0;
    InitialDiagnostics initial;
    FirstStepCheck first_step;
    std::vector<DiagnosticsRecord> steps; ///< m = 1..M
};

/// Maxima and sums of the a priori stability quantities over a trajectory.
struct StabilitySummary {
    double max_grad_phi_sq = 0.0;
    double max_well_sq = 0.0;
    double max_phi_L4_4 = 0.0;
    double max_phi_diff_sq = 0.0;
    double max_delta_h_phi_sq = 0.0;
    double max_phi_Linf = 0.0;
    double max_mu_half_sq = 0.0;
    double sum_grad_mu_sq = 0.0;         ///< tau sum_{m=0}^{M-1} ||grad mu^{m+1/2}||^2
    double sum_grad_mu_sq_from_one = 0.0; ///< same sum starting at m = 1
    double sum_dtau_phi_sq = 0.0;        ///< tau sum ||delta_tau phi^{m+1/2}||^2
    double sum_second_diff_sq = 0.0;     ///< sum of L2 + gradient second differences
    double initial_stability = 0.0;
    double F1 = 0.0;
    double F_final = 0.0;
    double max_energy_law_residual = 0.0;
    double max_F_increase = 0.0;         ///< max_m F(m+1) - F(m), m >= 1
    double max_mass_drift = 0.0;         ///< max_m |<phi^m - phi^0, 1>|
    double first_step_margin = 0.0;
};

StabilitySummary stability_ledger(const Trajectory& trajectory);

/// Names of ledger quantities that grew by more than `relative_tolerance` when
/// going from `coarse` to `refined` (smaller tau, same final time).
std::vector<std::string> growth_flags(const StabilitySummary& coarse, const StabilitySummary& refined,
                                      double relative_tolerance = 0.05);

/// Column header of the diagnostics CSV.
extern const char* const diagnostics_csv_header;

/// One row per record; reals printed with 17 significant digits.
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);

/// "%.17g" formatting used by every machine-readable output.
std::string format_real(double v);

} // namespace chsplit
