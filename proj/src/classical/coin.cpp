#include "typlab/classical/coin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "typlab/errors.hpp"
#include "typlab/numerics/parallel.hpp"

namespace typlab::classical {

void CoinMachineSpec::validate() const {
  if (!(gravity > 0.0)) throw ConfigError("coin gravity must be positive");
  if (!(u_min > 0.0) || !(u_max >= u_min)) throw ConfigError("coin launch speeds need 0 < u_min <= u_max");
  if (!(omega_min >= 0.0) || !(omega_max >= omega_min)) {
    throw ConfigError("coin spin rates need 0 <= omega_min <= omega_max");
  }
  if (!std::isfinite(theta0)) throw ConfigError("coin theta0 must be finite");
}

CoinFace coin_outcome(const CoinMachineSpec& spec, double u, double omega) {
  if (!(u > 0.0)) throw DomainError("coin launch speed must be positive");
  if (!(omega >= 0.0)) throw DomainError("coin spin rate must be non-negative");
  const double angle = omega * (2.0 * u / spec.gravity) + spec.theta0;
  return std::cos(angle) >= 0.0 ? CoinFace::heads : CoinFace::tails;
}

double spin_turns_spanned(const CoinMachineSpec& spec) {
  spec.validate();
  const double low = spec.omega_min * 2.0 * spec.u_min / spec.gravity;
  const double high = spec.omega_max * 2.0 * spec.u_max / spec.gravity;
  return (high - low) / (2.0 * std::numbers::pi);
}

double coin_heads_frequency(const CoinMachineSpec& spec, std::size_t n, RngStream& rng) {
  if (n == 0) throw ConfigError("coin frequency needs at least one toss");
  std::size_t heads = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = spec.u_min == spec.u_max ? spec.u_min : rng.uniform(spec.u_min, spec.u_max);
    const double omega = spec.omega_min == spec.omega_max ? spec.omega_min : rng.uniform(spec.omega_min, spec.omega_max);
    if (coin_outcome(spec, u, omega) == CoinFace::heads) ++heads;
  }
  return static_cast<double>(heads) / static_cast<double>(n);
}

ExperimentReport coin_lln_experiment(const CoinLlnParams& p, const RunContext& ctx) {
  p.spec.validate();
  p.narrow_control.validate();
  if (p.ladder.empty()) throw ConfigError("coin-lln needs a non-empty N ladder");
  for (std::size_t i = 0; i < p.ladder.size(); ++i) {
    if (p.ladder[i] == 0 || (i > 0 && p.ladder[i] <= p.ladder[i - 1])) {
      throw ConfigError("coin-lln ladder must be strictly increasing and positive");
    }
  }
  if (p.seeds == 0) throw ConfigError("coin-lln needs at least one seed");
  if (!(p.epsilon > 0.0)) throw ConfigError("epsilon must be positive");

  ExperimentReport report;
  report.flags.push_back("surrogate-measure: initial conditions uniform over the machine's (u, omega) ranges");
  const double turns = spin_turns_spanned(p.spec);
  if (turns < 10.0) {
    report.flags.push_back("config-warning: spin range spans " + std::to_string(turns) +
                           " turns (< 10); the 1/2 limit is not expected");
  }

  const std::size_t rungs = p.ladder.size();
  std::vector<double> freq(rungs * p.seeds);
  parallel_for(freq.size(), ctx.workers, [&](std::size_t u) {
    RngStream rng(ctx.seed, derive_stream("coin-lln", u));
    freq[u] = coin_heads_frequency(p.spec, p.ladder[u / p.seeds], rng);
  });

  DataTable ladder{"ladder", "measure of {|heads frequency - 1/2| > eps} along the N ladder",
                   {"N", "hits", "estimate", "ci_low", "ci_high", "mean_frequency", "rms_deviation",
                    "rms_deviation_times_sqrtN", "max_abs_deviation", "verdict"}};
  DataTable per_seed{"frequencies", "heads frequency per seed and N", {"N", "seed_index", "frequency"}};
  std::vector<double> estimates;
  for (std::size_t r = 0; r < rungs; ++r) {
    const double n = static_cast<double>(p.ladder[r]);
    std::uint64_t hits = 0;
    double sum = 0.0, sq = 0.0, worst = 0.0;
    for (std::size_t s = 0; s < p.seeds; ++s) {
      const double f = freq[r * p.seeds + s];
      const double d = std::abs(f - 0.5);
      hits += d > p.epsilon ? 1 : 0;
      sum += f;
      sq += d * d;
      worst = std::max(worst, d);
      per_seed.add_row({n, static_cast<double>(s), f});
    }
    const MeasureEstimate est = estimate_measure(hits, p.seeds);
    const TypicalityVerdict verdict = classify_typicality(est, p.tau);
    const double rms = std::sqrt(sq / static_cast<double>(p.seeds));
    const double mean = sum / static_cast<double>(p.seeds);
    const double code = verdict.classification == Typicality::typical    ? 1.0
                        : verdict.classification == Typicality::atypical ? -1.0
                                                                         : 0.0;
    ladder.add_row({n, static_cast<double>(hits), est.value, est.ci.low, est.ci.high, mean, rms, rms * std::sqrt(n),
                    worst, code});
    estimates.push_back(est.value);
    const std::string tag = "N=" + std::to_string(p.ladder[r]);
    report.metrics.push_back(Metric::info("deviation_measure_" + tag, est.value)
                                 .with_ci(est.ci)
                                 .with_note("verdict " + to_string(verdict.classification)));
    report.metrics.push_back(Metric::at_most("rms_deviation_times_sqrtN_" + tag, rms * std::sqrt(n), p.rms_scaling_bound));
    if (r + 1 == rungs) {
      report.metrics.push_back(Metric::less_than("max_abs_frequency_deviation_" + tag, worst, p.frequency_tolerance)
                                   .with_note("largest |frequency - 1/2| over all seeds"));
      report.metrics.push_back(Metric::info("pooled_frequency_" + tag, mean));
      report.metrics.push_back(Metric::less_than("deviation_measure_at_largest_N", est.value, p.tau));
    }
  }
  bool non_increasing = true;
  for (std::size_t r = 1; r < rungs; ++r) non_increasing = non_increasing && estimates[r] <= estimates[r - 1];
  report.metrics.push_back(Metric::holds("deviation_measure_non_increasing", non_increasing));

  {
    RngStream rng(ctx.seed, derive_stream("coin-lln-narrow", 0));
    const double f = coin_heads_frequency(p.narrow_control, p.ladder.back(), rng);
    report.metrics.push_back(Metric::greater_than("narrow_control_frequency", f, p.narrow_min_frequency)
                                 .with_note("special initial conditions: spin range spans " +
                                            std::to_string(spin_turns_spanned(p.narrow_control)) + " turns"));
  }

  report.tables.push_back(std::move(ladder));
  report.tables.push_back(std::move(per_seed));
  report.plots.push_back({"ladder", "RMS deviation of the heads frequency from 1/2", PlotKind::lines, "ladder", "N",
                          {"rms_deviation", "max_abs_deviation"}, "N", "|frequency - 1/2|", true, true});
  return report;
}

}  // namespace typlab::classical
