#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "typlab/report.hpp"

namespace typlab::harness {

struct ExperimentEntry {
  std::string name;
  std::string summary;
  /// Relations of the theory the experiment exercises; never empty.
  std::vector<std::string> anchors;
  /// Parallelizable unit the experiment splits its work into.
  std::string units;
  /// Every parameter with its default value.
  std::function<nlohmann::json()> defaults;
  /// Sparse params -> complete params; throws ConfigError on unknown keys or bad types.
  std::function<nlohmann::json(const nlohmann::json&)> resolve;
  std::function<ExperimentReport(const nlohmann::json& resolved, const RunContext&)> run;
};

/// The fixed experiment set, in presentation order.
const std::vector<ExperimentEntry>& catalog();

/// Throws ConfigError for unknown names.
const ExperimentEntry& find_experiment(const std::string& name);

/// Machine-readable catalog: {"version", "experiments": [{name, summary, anchors, units, defaults}]}.
nlohmann::json catalog_json();

}  // namespace typlab::harness
