#pragma once

#include <cstddef>
#include <vector>

#include "typlab/numerics/rng.hpp"
#include "typlab/report.hpp"

namespace typlab::classical {

/// Rigid coin launched straight up with speed u while spinning at rate omega.
/// Flight time is 2u/g and the coin lands after turning omega * 2u/g + theta0.
struct CoinMachineSpec {
  double gravity = 9.8;
  double u_min = 4.0;
  double u_max = 6.0;
  double omega_min = 50.0;
  double omega_max = 100.0;
  double theta0 = 0.0;

  void validate() const;
};

enum class CoinFace { heads, tails };

/// Heads iff cos(omega * 2u/g + theta0) >= 0.
CoinFace coin_outcome(const CoinMachineSpec& spec, double u, double omega);

/// Full turns covered by the landing angle as (u, omega) ranges over the spec.
double spin_turns_spanned(const CoinMachineSpec& spec);

/// Heads frequency of n tosses with (u, omega) uniform over the spec ranges.
double coin_heads_frequency(const CoinMachineSpec& spec, std::size_t n, RngStream& rng);

struct CoinLlnParams {
  CoinMachineSpec spec{};
  std::vector<std::size_t> ladder{1000, 10000, 100000};
  double epsilon = 0.01;
  std::size_t seeds = 100;
  double tau = kDefaultTypicalityThreshold;
  /// Tolerance on |frequency - 1/2| at the largest N, for every seed.
  double frequency_tolerance = 0.01;
  /// Bound on sqrt(N) * rms |frequency - 1/2| at each ladder point.
  double rms_scaling_bound = 1.0;
  CoinMachineSpec narrow_control{9.8, 4.0, 6.0, 0.0, 0.1, 0.0};
  double narrow_min_frequency = 0.9;
};

ExperimentReport coin_lln_experiment(const CoinLlnParams& params, const RunContext& ctx);

}  // namespace typlab::classical
