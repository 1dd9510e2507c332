#include "typlab/numerics/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "typlab/errors.hpp"

namespace typlab {

ConfidenceInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  if (successes > trials) throw DomainError("more successes than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ConfidenceInterval ci{std::max(0.0, center - spread), std::min(1.0, center + spread)};
  // the score interval always brackets the point estimate; pin the degenerate ends
  if (successes == 0) ci.low = 0.0;
  if (successes == trials) ci.high = 1.0;
  return ci;
}

double MeasureEstimate::halfwidth() const { return std::max(value - ci.low, ci.high - value); }

ConfidenceInterval clopper_pearson_interval(std::uint64_t successes, std::uint64_t trials, double alpha) {
  if (trials == 0 || successes > trials) throw DomainError("interval needs 0 <= successes <= trials, trials > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double x = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  ConfidenceInterval ci;
  ci.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, 0.5 * alpha);
  ci.high = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - 0.5 * alpha);
  return ci;
}

MeasureEstimate estimate_measure(std::uint64_t hits, std::uint64_t trials, double z) {
  MeasureEstimate e;
  e.hits = hits;
  e.trials = trials;
  e.value = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
  e.ci = wilson_interval(hits, trials, z);
  return e;
}

std::string to_string(Typicality t) {
  switch (t) {
    case Typicality::typical:
      return "typical";
    case Typicality::atypical:
      return "atypical";
    case Typicality::neither:
      return "neither";
  }
  return "neither";
}

TypicalityVerdict classify_typicality(double measure, double halfwidth, double tau) {
  TypicalityVerdict v{measure, halfwidth, tau, Typicality::neither};
  if (measure - halfwidth > 1.0 - tau) {
    v.classification = Typicality::typical;
  } else if (measure + halfwidth < tau) {
    v.classification = Typicality::atypical;
  }
  return v;
}

TypicalityVerdict classify_typicality(const MeasureEstimate& estimate, double tau) {
  return classify_typicality(estimate.value, estimate.halfwidth(), tau);
}

BinEdges::BinEdges(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw DomainError("bin edges need at least two entries");
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1])) throw DomainError("bin edges must be strictly increasing");
  }
}

BinEdges BinEdges::uniform(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw DomainError("invalid uniform binning");
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  return BinEdges(std::move(e));
}

long long BinEdges::locate(double x) const {
  if (!(x >= edges_.front()) || !(x < edges_.back())) return -1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<long long>(it - edges_.begin()) - 1;
}

EmpiricalDistribution::EmpiricalDistribution(BinEdges edges) : edges_(std::move(edges)), counts_(edges_.bins(), 0) {}

EmpiricalDistribution EmpiricalDistribution::from_samples(BinEdges edges, std::span<const double> samples) {
  EmpiricalDistribution d(std::move(edges));
  for (const double x : samples) d.add(x);
  return d;
}

void EmpiricalDistribution::add(double x) {
  const long long bin = edges_.locate(x);
  if (bin < 0) {
    ++outside_;
    return;
  }
  ++counts_[static_cast<std::size_t>(bin)];
  ++total_;
}

BinnedMasses EmpiricalDistribution::normalized() const {
  BinnedMasses m{edges_, std::vector<double>(counts_.size(), 0.0)};
  if (total_ == 0) return m;
  const double n = static_cast<double>(total_);
  for (std::size_t i = 0; i < counts_.size(); ++i) m.masses[i] = static_cast<double>(counts_[i]) / n;
  return m;
}

double l1_distance(const BinnedMasses& a, const BinnedMasses& b) {
  if (!(a.edges == b.edges) || a.masses.size() != b.masses.size()) {
    throw DomainError("l1_distance requires identical binning");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.masses.size(); ++i) sum += std::abs(a.masses[i] - b.masses[i]);
  return sum;
}

double l1_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return l1_distance(a.normalized(), b.normalized());
}

double l1_distance(const EmpiricalDistribution& a, const BinnedMasses& b) { return l1_distance(a.normalized(), b); }

BinnedMasses bin_density(const Grid& grid, std::span<const double> density, const BinEdges& edges) {
  if (grid.dimension() != 1 || density.size() != grid.size()) {
    throw DomainError("bin_density expects a 1D density matching its grid");
  }
  BinnedMasses out{edges, std::vector<double>(edges.bins(), 0.0)};
  const double dx = grid.spacing();
  const auto e = edges.edges();
  double total = 0.0;
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double mass = density[j] * dx;
    total += mass;
    if (mass == 0.0) continue;
    const double c_lo = grid.coordinate(j) - 0.5 * dx;
    const double c_hi = c_lo + dx;
    // first bin whose upper edge exceeds the cell's lower edge
    auto it = std::upper_bound(e.begin(), e.end(), c_lo);
    std::size_t bin = it == e.begin() ? 0 : static_cast<std::size_t>(it - e.begin()) - 1;
    for (; bin < edges.bins() && e[bin] < c_hi; ++bin) {
      const double overlap = std::min(c_hi, e[bin + 1]) - std::max(c_lo, e[bin]);
      if (overlap > 0.0) out.masses[bin] += mass * overlap / dx;
    }
  }
  if (!(total > 0.0)) throw DomainError("density has no mass");
  for (auto& m : out.masses) m /= total;
  return out;
}

double l1_noise_quantile(const BinnedMasses& target, std::uint64_t n, double q, int replicas, RngStream& rng) {
  if (n == 0 || replicas <= 0) throw DomainError("noise quantile needs samples and replicas");
  const std::size_t bins = target.masses.size();
  // sample over bins plus one overflow category so that sub-unit total mass is respected
  std::vector<double> cdf(bins + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    acc += target.masses[i];
    cdf[i] = acc;
  }
  cdf[bins] = std::max(1.0, acc);
  std::vector<double> distances(static_cast<std::size_t>(replicas));
  std::vector<std::uint64_t> counts(bins + 1);
  for (int r = 0; r < replicas; ++r) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t s = 0; s < n; ++s) {
      const double u = rng.uniform() * cdf[bins];
      const auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      ++counts[std::min(idx, bins)];
    }
    const std::uint64_t inside = n - counts[bins];
    double sum = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
      const double p = inside == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(inside);
      sum += std::abs(p - target.masses[i] / acc);
    }
    distances[static_cast<std::size_t>(r)] = sum;
  }
  std::sort(distances.begin(), distances.end());
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(replicas))) - 1;
  return distances[std::min(k, distances.size() - 1)];
}

double binomial_deviation_probability(std::uint64_t trials, double p, double eps) {
  if (trials == 0) throw DomainError("binomial tail needs at least one trial");
  const boost::math::binomial_distribution<double> dist(static_cast<double>(trials), p);
  const double m = static_cast<double>(trials);
  double inside = 0.0;
  double outside = 0.0;
  for (std::uint64_t k = 0; k <= trials; ++k) {
    const double pk = boost::math::pdf(dist, static_cast<double>(k));
    if (std::abs(static_cast<double>(k) / m - p) > eps) {
      outside += pk;
    } else {
      inside += pk;
    }
  }
  // sum the smaller side for accuracy when the deviation set is nearly everything
  return outside <= inside ? outside : 1.0 - inside;
}

MeanVariance mean_variance(std::span<const double> xs) {
  MeanVariance mv;
  if (xs.empty()) return mv;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (const double x : xs) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  mv.mean = mean;
  mv.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return mv;
}

}  // namespace typlab
