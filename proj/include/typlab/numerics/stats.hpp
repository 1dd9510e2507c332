#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "typlab/numerics/grid.hpp"
#include "typlab/numerics/rng.hpp"

namespace typlab {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

/// Default typicality threshold tau.
inline constexpr double kDefaultTypicalityThreshold = 0.01;

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion.
ConfidenceInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

/// Exact (Clopper-Pearson) interval; coverage is at least 1 - alpha for every p.
ConfidenceInterval clopper_pearson_interval(std::uint64_t successes, std::uint64_t trials, double alpha = 0.01);

/// Monte Carlo estimate of the measure of a set from indicator hits.
struct MeasureEstimate {
  double value = 0.0;
  ConfidenceInterval ci;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  /// Largest distance from the estimate to an interval end.
  double halfwidth() const;
};

MeasureEstimate estimate_measure(std::uint64_t hits, std::uint64_t trials, double z = kZ99);

enum class Typicality { typical, atypical, neither };

std::string to_string(Typicality t);

struct TypicalityVerdict {
  double measure = 0.0;
  double halfwidth = 0.0;
  double threshold = kDefaultTypicalityThreshold;
  Typicality classification = Typicality::neither;
};

/// typical iff measure - halfwidth > 1 - tau, atypical iff measure + halfwidth < tau.
TypicalityVerdict classify_typicality(double measure, double halfwidth, double tau = kDefaultTypicalityThreshold);
TypicalityVerdict classify_typicality(const MeasureEstimate& estimate, double tau = kDefaultTypicalityThreshold);

/// Strictly increasing bin edges.
class BinEdges {
 public:
  explicit BinEdges(std::vector<double> edges);
  static BinEdges uniform(double lo, double hi, std::size_t bins);

  std::size_t bins() const { return edges_.size() - 1; }
  std::span<const double> edges() const { return edges_; }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  double width(std::size_t bin) const { return edges_[bin + 1] - edges_[bin]; }
  double center(std::size_t bin) const { return 0.5 * (edges_[bin] + edges_[bin + 1]); }
  /// Bin containing x in [lo, hi), or -1.
  long long locate(double x) const;

  bool operator==(const BinEdges&) const = default;

 private:
  std::vector<double> edges_;
};

/// Normalized bin masses over fixed edges.
struct BinnedMasses {
  BinEdges edges;
  std::vector<double> masses;
};

/// Histogram of samples; samples outside the edges are tallied separately.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(BinEdges edges);
  static EmpiricalDistribution from_samples(BinEdges edges, std::span<const double> samples);

  void add(double x);
  const BinEdges& edges() const { return edges_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  /// Number of samples inside the edges (sum of counts).
  std::uint64_t total() const { return total_; }
  std::uint64_t outside() const { return outside_; }
  BinnedMasses normalized() const;

 private:
  BinEdges edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t outside_ = 0;
};

/// Sum over bins of |p_a - p_b|, in [0, 2].
double l1_distance(const BinnedMasses& a, const BinnedMasses& b);
double l1_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
double l1_distance(const EmpiricalDistribution& a, const BinnedMasses& b);

/// Masses of a 1D grid density (piecewise constant on cells) falling into each bin,
/// normalized by the total mass on the grid.
BinnedMasses bin_density(const Grid& grid, std::span<const double> density, const BinEdges& edges);

/// q-quantile of the L1 distance between a multinomial sample of size n drawn
/// from `target` and `target` itself, by simulation.
double l1_noise_quantile(const BinnedMasses& target, std::uint64_t n, double q, int replicas, RngStream& rng);

/// P(|K/M - p| > eps) for K ~ Binomial(M, p), summed exactly over k.
double binomial_deviation_probability(std::uint64_t trials, double p, double eps);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
};
MeanVariance mean_variance(std::span<const double> xs);

}  // namespace typlab
