// typicality-lab: run, list and validate experiments.
//
// Exit codes: 0 all metrics pass, 1 a metric failed, 2 configuration error,
// 3 numerical or integration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "typlab/errors.hpp"
#include "typlab/harness/catalog.hpp"
#include "typlab/harness/config.hpp"
#include "typlab/harness/runner.hpp"

namespace {

using namespace typlab;
using namespace typlab::harness;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::size_t width = 6;
  for (const auto& m : r.metrics) width = std::max(width, m.name.size());
  for (const auto& m : r.metrics) {
    std::string bound;
    if (m.criterion == Criterion::target_in_ci && m.ci_low && m.ci_high) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "target %.6g in [%.6g, %.6g]", m.target.value_or(0.0), *m.ci_low, *m.ci_high);
      bound = buf;
    } else if (m.criterion == Criterion::within) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "|v - %.6g| <= %.3g", m.target.value_or(0.0), m.tolerance.value_or(0.0));
      bound = buf;
    } else if (m.tolerance) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s %.6g", to_string(m.criterion).c_str(), *m.tolerance);
      bound = buf;
    } else {
      bound = to_string(m.criterion);
    }
    std::printf("%-4s  %-*s  %-14.8g  %s\n", m.pass ? "ok" : "FAIL", static_cast<int>(width), m.name.c_str(), m.value,
                bound.c_str());
  }
  for (const auto& f : r.flags) std::printf("flag  %s\n", f.c_str());
  std::printf("%s: %s in %.2f s; artifacts in %s\n", r.experiment.c_str(), r.all_pass() ? "all metrics pass" : "METRIC FAILURE",
              r.wall_time_s, dir.string().c_str());
}

int cmd_list(bool as_json) {
  if (as_json) {
    std::cout << catalog_json().dump(2) << '\n';
    return 0;
  }
  for (const auto& e : catalog()) {
    std::printf("%-22s %s\n", e.name.c_str(), e.summary.c_str());
    for (const auto& a : e.anchors) std::printf("%-22s   anchor: %s\n", "", a.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typicality experiments: classical and Bohmian laws of large numbers"};
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one experiment and write report.json, CSV tables and SVG plots");
  run->add_option("experiment", experiment, "Experiment name (see 'list'); may come from the config instead");
  run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--workers", workers, "Worker threads (overrides the config); results do not depend on it")
      ->check(CLI::Range(1, 4096));
  run->add_option("--out", out_dir,
                  std::string("Output root (overrides the config; default $") + kOutputDirEnv + " or " +
                      kFallbackOutputDir + ")");

  bool as_json = false;
  auto* list = app.add_subcommand("list", "List experiments with their anchors");
  list->add_flag("--json", as_json, "Machine-readable catalog with every default");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file and print it with defaults resolved");
  validate->add_option("--config", validate_path, "JSON config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*list) return cmd_list(as_json);
    if (*validate) {
      const ExperimentConfig resolved = resolve_config(load_config(validate_path));
      std::cout << config_to_json(resolved).dump(2) << '\n';
      return 0;
    }
    ExperimentConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    if (!experiment.empty()) {
      if (!config.experiment.empty() && config.experiment != experiment) {
        throw ConfigError("experiment '" + experiment + "' does not match the config's '" + config.experiment + "'");
      }
      config.experiment = experiment;
    }
    if (config.experiment.empty()) throw ConfigError("no experiment named; pass one or set it in --config");
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    if (!out_dir.empty()) config.output_dir = out_dir;
    config.output_dir = default_output_dir(config.output_dir).string();
    const ExperimentReport report = run_experiment(config);
    print_report(report, std::filesystem::path(config.output_dir) / report.experiment);
    return exit_code(report);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
