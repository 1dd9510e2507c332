#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace typlab::testing {

/// Small parameter overrides, one per catalog entry, that run in seconds.
inline std::vector<std::pair<std::string, nlohmann::json>> reduced_configs() {
  using nlohmann::json;
  return {
      {"maxwell-lln", json{{"ladder", {100, 1000}}, {"seeds", 20}}},
      {"liouville-check", json{{"samples", 5000}}},
      {"coin-lln", json{{"ladder", {1000, 10000}}, {"seeds", 20}}},
      {"stone-robustness", json{{"perturbations", 200}, {"halving_levels", 2}, {"halving_samples", 50}}},
      {"equivariance", json{{"samples", 1000}, {"points", 256}, {"checkpoints", 2}, {"noise_replicas", 50}}},
      {"conditional-born", json{{"samples", 10000}, {"points", 128}, {"noise_replicas", 50}}},
      {"effective-detect", json{{"points", 128}}},
      {"born-lln", json{{"ladder", {100, 1000}}, {"seeds", 100}}},
      {"absolute-uncertainty", json{{"samples", 2000}, {"points", 512}, {"sigma_ladder", {1.0, 0.5}}}},
  };
}

}  // namespace typlab::testing
