#include "typlab/harness/runner.hpp"

#include <chrono>
#include <fstream>

#include "typlab/errors.hpp"
#include "typlab/harness/catalog.hpp"
#include "typlab/harness/csv.hpp"
#include "typlab/harness/report_io.hpp"
#include "typlab/harness/svg.hpp"

#ifndef TYPLAB_VERSION
#define TYPLAB_VERSION "0.0.0"
#endif

namespace typlab::harness {

namespace {

// Rethrows the in-flight exception as the same type with the experiment name prefixed.
[[noreturn]] void rethrow_with_context(const std::string& name) {
  const std::string where = "experiment '" + name + "': ";
  try {
    throw;
  } catch (const ResolutionError& e) {
    throw ResolutionError(where + e.what());
  } catch (const IntegrationError& e) {
    throw IntegrationError(where + e.what());
  } catch (const SingularityError& e) {
    throw SingularityError(where + e.what());
  } catch (const DegenerateSliceError& e) {
    throw DegenerateSliceError(where + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  }
}

}  // namespace

std::string artifact_version() { return std::string("typicality-lab ") + TYPLAB_VERSION; }

ExperimentReport execute_experiment(const ExperimentConfig& config) {
  const ExperimentConfig resolved = resolve_config(config);
  const ExperimentEntry& entry = find_experiment(resolved.experiment);
  const RunContext ctx{resolved.seed, resolved.workers};
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  try {
    report = entry.run(resolved.params, ctx);
  } catch (...) {
    rethrow_with_context(resolved.experiment);
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.experiment = resolved.experiment;
  report.config = config_to_json(resolved);
  report.version = artifact_version();
  return report;
}

void write_artifacts(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  save_report(dir / "report.json", report);
  for (const auto& t : report.tables) save_csv(dir / (t.name + ".csv"), t);
  for (const auto& p : report.plots) {
    const DataTable* t = report.table(p.table);
    if (t == nullptr) throw DomainError("plot '" + p.name + "' refers to missing table '" + p.table + "'");
    std::ofstream out(dir / (p.name + ".svg"), std::ios::binary);
    if (!out) throw ConfigError("cannot write plot " + p.name);
    out << render_svg(p, *t);
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report = execute_experiment(config);
  write_artifacts(report, default_output_dir(config.output_dir) / report.experiment);
  return report;
}

int exit_code(const ExperimentReport& report) { return report.all_pass() ? 0 : 1; }

}  // namespace typlab::harness
