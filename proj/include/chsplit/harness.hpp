#pragma once

#include "chsplit/scheme.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace chsplit {

/// Time at which the potentials of two runs are compared.
enum class MuAlignment {
    /// mu(T) extrapolated linearly from the last two half-step values
    /// (3/2 mu^{M-1/2} - 1/2 mu^{M-3/2}); second-order accurate.
    FinalTime,
    /// mu^{M-1/2} of each run, which sit tau_c/2 and tau_f/2 before T.
    LastHalfStep,
};

/// Nested-level convergence study along the refinement path tau = kappa * h.
struct ConvergenceConfig {
    std::vector<int> levels;  ///< cells per side, each twice the previous
    double kappa = 0.0;
    double final_time = 0.0;
    double epsilon = 0.0;
    int degree = 2;
    InitialCondition initial_condition;
    NewtonOptions newton;
    InitPhiMode init_phi = InitPhiMode::Interp;
    InitMuMode init_mu = InitMuMode::DiscreteVariational;
    MuAlignment mu_alignment = MuAlignment::FinalTime;
    /// Level simulations run concurrently on up to this many threads.
    unsigned threads = 1;

    void validate() const;
    SchemeParams scheme_params(int n) const;
};

/// One adjacent-level pair. Rates are absent on the first row and whenever a
/// norm vanishes.
struct CauchyRow {
    double h_coarse = 0.0;
    double h_fine = 0.0;
    double cauchy_phi = 0.0; ///< ||phi_f - phi_c||_{H1} at T
    double cauchy_mu = 0.0;  ///< ||mu_f - mu_c||_{H1} at the configured alignment
    double cauchy_mu_half = 0.0; ///< same for the last half-step potentials
    std::optional<double> rate_phi;
    std::optional<double> rate_mu;
};

struct LevelRun {
    int n = 0;
    double h = 0.0;
    double tau = 0.0;
    int steps = 0;
    std::shared_ptr<const FeSpace> space;
    Trajectory trajectory;
    std::optional<SchemeState> final_state;
    std::optional<Field> mu_half_prev; ///< mu^{M-3/2}, absent when M = 1
};

Field terminal_potential(const LevelRun& level, MuAlignment alignment);

struct CauchyStudy {
    std::vector<LevelRun> levels;
    std::vector<CauchyRow> rows;
};

/// Observers for one level's trajectory, created before that level starts.
using LevelObservers = std::function<std::vector<StepObserver>(const LevelRun&)>;

CauchyStudy run_cauchy_study(const ConvergenceConfig& config, const LevelObservers& observers = {});
std::vector<CauchyRow> cauchy_study(const ConvergenceConfig& config);

/// log2(coarse_pair / fine_pair); both must be positive.
double rate(double norm_coarse_pair, double norm_fine_pair);

extern const char* const cauchy_csv_header;
/// Undefined rates are written as NA.
void write_cauchy_csv(std::ostream& out, const std::vector<CauchyRow>& rows);

} // namespace chsplit
