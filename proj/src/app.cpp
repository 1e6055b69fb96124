#include "chsplit/app.hpp"

#include "chsplit/errors.hpp"
#include "chsplit/vtk.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

#ifndef CHSPLIT_VERSION
#define CHSPLIT_VERSION "0.0.0"
#endif

namespace chsplit {

using nlohmann::ordered_json;

const char* version() noexcept { return CHSPLIT_VERSION; }

bool snapshot_due(int m, int num_steps, int stride) noexcept
{
    if (m == 0 || m == num_steps) {
        return true;
    }
    return stride > 0 && m % stride == 0;
}

namespace {

namespace fs = std::filesystem;

void prepare_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string step_tag(int m)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", m);
    return buf;
}

ordered_json summary_json(const StabilitySummary& s)
{
    ordered_json j;
    j["first_step_margin"] = s.first_step_margin;
    j["F1"] = s.F1;
    j["F_final"] = s.F_final;
    j["max_F_increase"] = s.max_F_increase;
    j["max_energy_law_residual"] = s.max_energy_law_residual;
    j["max_mass_drift"] = s.max_mass_drift;
    j["max_phi_Linf"] = s.max_phi_Linf;
    j["max_grad_phi_sq"] = s.max_grad_phi_sq;
    j["max_well_sq"] = s.max_well_sq;
    j["max_phi_L4_4"] = s.max_phi_L4_4;
    j["max_phi_diff_sq"] = s.max_phi_diff_sq;
    j["max_delta_h_phi_sq"] = s.max_delta_h_phi_sq;
    j["max_mu_half_sq"] = s.max_mu_half_sq;
    j["sum_grad_mu_sq"] = s.sum_grad_mu_sq;
    j["sum_dtau_phi_sq"] = s.sum_dtau_phi_sq;
    j["sum_second_diff_sq"] = s.sum_second_diff_sq;
    j["initial_stability"] = s.initial_stability;
    return j;
}

void write_run_info(const RunConfig& config, const ordered_json& results)
{
    ordered_json info;
    info["program"] = "chsplit";
    info["version"] = version();
    info["config"] = ordered_json::parse(config.canonical);
    info["results"] = results;
    const fs::path path = config.output_directory / "run_info.json";
    std::ofstream out = open_output(path);
    out << info.dump(2) << '\n';
    finish(out, path);
}

StepObserver snapshot_observer(const fs::path& dir, const std::string& prefix, int num_steps, int stride,
                               const std::string& title)
{
    return [=](const SchemeState& state, const DiagnosticsRecord&) {
        if (snapshot_due(state.step, num_steps, stride)) {
            write_snapshot(state.phi_curr, dir / (prefix + step_tag(state.step) + ".vtk"), "phi", title);
        }
    };
}

} // namespace

StabilitySummary run_simulate(const RunConfig& config, std::ostream& log)
{
    if (config.mode != RunMode::Simulate) {
        throw ConfigError("mode: run_simulate needs mode \"simulate\"");
    }
    prepare_directory(config.output_directory);
    const SchemeParams params = config.scheme_params();
    const int num_steps = params.num_steps();
    const std::string title = std::string("chsplit ") + version() + " phi";
    auto space = build_space(build_uniform(config.n), config.degree);

    const StepObserver observers[] = {
        snapshot_observer(config.output_directory, "phi_", num_steps, config.snapshot_stride, title)};
    log << "simulate: n=" << config.n << " q=" << config.degree << " tau=" << format_real(params.tau)
        << " steps=" << num_steps << '\n';
    RunResult result = run(params, space, config.make_initial_condition(), observers);

    const fs::path csv = config.output_directory / "diagnostics.csv";
    std::ofstream out = open_output(csv);
    write_diagnostics_csv(out, result.trajectory.steps);
    finish(out, csv);

    const StabilitySummary summary = stability_ledger(result.trajectory);
    ordered_json results;
    results["num_steps"] = num_steps;
    results["summary"] = summary_json(summary);
    write_run_info(config, results);
    log << "first-step margin " << format_real(summary.first_step_margin) << ", max F increase "
        << format_real(summary.max_F_increase) << ", max mass drift " << format_real(summary.max_mass_drift)
        << '\n';
    return summary;
}

std::vector<CauchyRow> run_cauchy(const RunConfig& config, std::ostream& log)
{
    if (config.mode != RunMode::Cauchy) {
        throw ConfigError("mode: run_cauchy needs mode \"cauchy\"");
    }
    prepare_directory(config.output_directory);
    const ConvergenceConfig cc = config.convergence_config();
    const std::string title = std::string("chsplit ") + version() + " phi";
    const fs::path dir = config.output_directory;
    const int stride = config.snapshot_stride;

    log << "cauchy: levels";
    for (int n : cc.levels) {
        log << ' ' << n;
    }
    log << " kappa=" << format_real(cc.kappa) << '\n';
    const CauchyStudy study = run_cauchy_study(cc, [&](const LevelRun& level) {
        return std::vector<StepObserver>{snapshot_observer(
            dir, "phi_n" + std::to_string(level.n) + "_", level.steps, stride, title)};
    });

    ordered_json levels = ordered_json::array();
    for (const LevelRun& level : study.levels) {
        const fs::path csv = dir / ("diagnostics_n" + std::to_string(level.n) + ".csv");
        std::ofstream out = open_output(csv);
        write_diagnostics_csv(out, level.trajectory.steps);
        finish(out, csv);
        ordered_json l;
        l["n"] = level.n;
        l["h"] = level.h;
        l["tau"] = level.tau;
        l["num_steps"] = level.steps;
        l["summary"] = summary_json(stability_ledger(level.trajectory));
        levels.push_back(l);
    }
    const fs::path table = dir / "table.csv";
    std::ofstream out = open_output(table);
    write_cauchy_csv(out, study.rows);
    finish(out, table);
    write_cauchy_csv(log, study.rows);

    ordered_json results;
    results["levels"] = levels;
    write_run_info(config, results);
    return study.rows;
}

} // namespace chsplit
