#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace typlab::harness {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "TYPLAB_OUTPUT_DIR";
inline constexpr const char* kFallbackOutputDir = "typlab-out";

/// One run request. `params` holds the experiment's own keys, possibly sparse;
/// the catalog resolves it against the experiment's defaults.
///
/// File form (JSON):
///   { "experiment": "maxwell-lln", "seed": 1, "workers": 1,
///     "output_dir": "out", "params": { "epsilon": 0.02 } }
/// Only "experiment" is required. Unknown keys are rejected at every level.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Empty: CLI flag, then $TYPLAB_OUTPUT_DIR, then "typlab-out".
  std::string output_dir;
  nlohmann::json params = nlohmann::json::object();
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config with params fully resolved against the experiment's defaults.
/// Throws ConfigError on unknown experiments, unknown keys or bad types.
ExperimentConfig resolve_config(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);

/// Explicit directory if nonempty, else $TYPLAB_OUTPUT_DIR, else "typlab-out".
std::filesystem::path default_output_dir(const std::string& explicit_dir);

}  // namespace typlab::harness
