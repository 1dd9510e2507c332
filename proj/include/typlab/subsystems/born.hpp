#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "typlab/numerics/sampling.hpp"
#include "typlab/numerics/stats.hpp"
#include "typlab/report.hpp"

namespace typlab::subsystems {

struct YBinResult {
  double y_lo = 0.0;
  double y_hi = 0.0;
  std::uint64_t count = 0;
  /// L1 between the empirical X histogram of the bin and the bin-averaged |psi^Y|^2.
  double l1 = 0.0;
  /// Noise quantile of that distance for `count` exact draws (0 unless requested).
  double noise = 0.0;
  bool excluded = false;
  /// Masses over the x-bins.
  std::vector<double> target;
  std::vector<double> empirical;
};

struct ConditionalBornOptions {
  BinEdges y_edges = BinEdges::uniform(-2.0, 2.0, 16);
  BinEdges x_edges = BinEdges::uniform(-4.0, 4.0, 32);
  std::size_t min_count = 500;
  /// Per-bin noise quantiles are simulated when replicas > 0.
  int noise_replicas = 0;
  double noise_quantile = 0.999;
};

/// X-target of one y-bin: rows weighted by their cell overlap with the bin
/// and by their slice norms, i.e. the bin average of N(Y) |psi^Y|^2.
BinnedMasses conditional_target(const ComplexField& psi, double y_lo, double y_hi, const BinEdges& x_edges);

/// Per-bin comparison of samples (X, Y) ~ |Psi|^2 with the conditional targets.
std::vector<YBinResult> conditional_born_bins(const ComplexField& psi, const Samples& samples,
                                              const ConditionalBornOptions& options, std::uint64_t seed = 1,
                                              int workers = 1);

struct ConditionalBornParams {
  std::size_t points = 256;
  double length = 16.0;
  double s = 0.5;
  double big_s = 2.0;
  std::size_t samples = 100000;
  std::size_t y_bins = 16;
  double y_lo = -2.0;
  double y_hi = 2.0;
  std::size_t x_bins = 32;
  double x_lo = -4.0;
  double x_hi = 4.0;
  std::size_t min_count = 500;
  double l1_tolerance = 0.1;
  bool product_control = true;
  std::array<double, 2> product_sigma{1.0, 1.2};
  double noise_quantile = 0.999;
  int noise_replicas = 1000;
};

ExperimentReport conditional_born_experiment(const ConditionalBornParams& params, const RunContext& ctx);

/// Mass of a 1D grid density inside [lo, hi] under the cell-uniform law, normalized.
double region_probability(const Grid& grid, std::span<const double> density, double lo, double hi);

struct BornLlnParams {
  std::size_t points = 1024;
  double length = 20.0;
  double sigma = 1.0;
  double center = 0.0;
  double region_lo = 0.0;
  double region_hi = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> ladder{100, 1000, 10000};
  double epsilon = 0.02;
  std::size_t seeds = 1000;
  double tau = kDefaultTypicalityThreshold;
};

/// M identically prepared subsystems: the universal |Psi|^2 factorizes into
/// M independent |phi|^2 draws, so each seed draws M points from |phi|^2.
ExperimentReport born_lln_experiment(const BornLlnParams& params, const RunContext& ctx);

}  // namespace typlab::subsystems
