#pragma once

#include "chsplit/harness.hpp"
#include "chsplit/scheme.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chsplit {

enum class RunMode { Simulate, Cauchy };

struct InitialConditionSpec {
    std::string type; ///< "paper", "constant" or "expression"
    double constant = 0.0;
    std::string expression;
};

/// Validated contents of a run configuration file (format_version 1).
struct RunConfig {
    RunMode mode = RunMode::Simulate;
    int n = 0;                ///< simulate
    std::vector<int> levels;  ///< cauchy
    int degree = 2;
    double epsilon = 0.0;
    double final_time = 0.0;
    double tau = 0.0;         ///< simulate
    double kappa = 0.0;       ///< cauchy, tau = kappa * h
    InitialConditionSpec initial_condition;
    InitPhiMode init_phi = InitPhiMode::Interp;
    InitMuMode init_mu = InitMuMode::DiscreteVariational;
    NewtonOptions newton;
    std::filesystem::path output_directory;
    int snapshot_stride = 0;  ///< 0: initial and final only
    unsigned threads = 1;
    std::optional<long long> seed;
    /// Canonical JSON text of the accepted configuration, echoed into outputs.
    std::string canonical;

    SchemeParams scheme_params() const;
    ConvergenceConfig convergence_config() const;
    InitialCondition make_initial_condition() const;
};

inline constexpr int config_format_version = 1;

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

const char* to_string(InitPhiMode mode) noexcept;
const char* to_string(InitMuMode mode) noexcept;

} // namespace chsplit
