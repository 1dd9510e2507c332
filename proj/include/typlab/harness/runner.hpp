#pragma once

#include <filesystem>
#include <string>

#include "typlab/harness/config.hpp"
#include "typlab/report.hpp"

namespace typlab::harness {

std::string artifact_version();

/// Resolves the config, dispatches to the experiment and fills the config
/// echo, wall time and version. Errors keep their type and gain the
/// experiment name as context. Writes nothing.
ExperimentReport execute_experiment(const ExperimentConfig& config);

/// Writes report.json, one CSV per table and one SVG per plot into `dir`
/// (created if missing).
void write_artifacts(const ExperimentReport& report, const std::filesystem::path& dir);

/// execute_experiment, then write_artifacts into <output dir>/<experiment>.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Process exit code for a finished report: 0 if every metric passes, else 1.
int exit_code(const ExperimentReport& report);

}  // namespace typlab::harness
