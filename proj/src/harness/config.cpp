#include "typlab/harness/config.hpp"

#include <cstdlib>
#include <fstream>

#include "typlab/errors.hpp"
#include "typlab/harness/catalog.hpp"

namespace typlab::harness {

using nlohmann::json;

namespace {

constexpr int kMaxWorkers = 4096;

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      if (!value.is_string()) throw ConfigError("config key 'experiment' must be a string");
      c.experiment = value.get<std::string>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "workers") {
      if (!value.is_number_integer()) throw ConfigError("config key 'workers' must be an integer");
      const auto w = value.get<std::int64_t>();
      if (w < 1 || w > kMaxWorkers) throw ConfigError("config key 'workers' must lie in [1, 4096]");
      c.workers = static_cast<int>(w);
    } else if (key == "output_dir") {
      if (!value.is_string()) throw ConfigError("config key 'output_dir' must be a string");
      c.output_dir = value.get<std::string>();
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError("config key 'params' must be an object");
      c.params = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (c.experiment.empty()) throw ConfigError("config needs an 'experiment' name");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

ExperimentConfig resolve_config(const ExperimentConfig& config) {
  if (config.workers < 1 || config.workers > kMaxWorkers) throw ConfigError("workers must lie in [1, 4096]");
  const ExperimentEntry& e = find_experiment(config.experiment);
  ExperimentConfig r = config;
  r.params = e.resolve(config.params);
  return r;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"experiment", c.experiment},
              {"seed", c.seed},
              {"workers", c.workers},
              {"output_dir", c.output_dir},
              {"params", c.params}};
}

std::filesystem::path default_output_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return kFallbackOutputDir;
}

}  // namespace typlab::harness
