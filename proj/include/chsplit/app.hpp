#pragma once

#include "chsplit/config.hpp"

#include <iosfwd>

namespace chsplit {

const char* version() noexcept;

/// Writes diagnostics.csv, run_info.json and phi_<step>.vtk snapshots into the
/// output directory. Returns the trajectory summary.
StabilitySummary run_simulate(const RunConfig& config, std::ostream& log);

/// Writes table.csv, run_info.json, per-level diagnostics_n<N>.csv and
/// phi_n<N>_<step>.vtk snapshots.
std::vector<CauchyRow> run_cauchy(const RunConfig& config, std::ostream& log);

/// Snapshot steps: every `stride` steps plus the final one; stride 0 keeps only 0 and M.
bool snapshot_due(int m, int num_steps, int stride) noexcept;

} // namespace chsplit
