#include "typlab/subsystems/born.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "typlab/bohmian/wavefunction.hpp"
#include "typlab/errors.hpp"
#include "typlab/numerics/parallel.hpp"
#include "typlab/subsystems/conditional.hpp"
#include "typlab/subsystems/states.hpp"

namespace typlab::subsystems {

namespace {

BinnedMasses renormalized(BinnedMasses m) {
  double s = 0.0;
  for (const double v : m.masses) s += v;
  if (s > 0.0) {
    for (auto& v : m.masses) v /= s;
  }
  return m;
}

}  // namespace

BinnedMasses conditional_target(const ComplexField& psi, double y_lo, double y_hi, const BinEdges& x_edges) {
  const Grid& g = psi.grid();
  if (g.dimension() != 2) throw ConfigError("conditional targets need a 2D field");
  const std::size_t n = g.points();
  const double dy = g.spacing();
  const Grid xg = x_grid(g);
  BinnedMasses acc{x_edges, std::vector<double>(x_edges.bins(), 0.0)};
  std::vector<double> row(n);
  double weight_total = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double c_lo = g.coordinate(iy) - 0.5 * dy;
    const double overlap = std::min(c_lo + dy, y_hi) - std::max(c_lo, y_lo);
    if (!(overlap > 0.0)) continue;
    double norm = 0.0;
    for (std::size_t ix = 0; ix < n; ++ix) norm += row[ix] = std::norm(psi.at(ix, iy));
    if (!(norm > 0.0)) continue;
    const double w = overlap / dy * norm;
    const BinnedMasses m = bin_density(xg, row, x_edges);
    for (std::size_t b = 0; b < m.masses.size(); ++b) acc.masses[b] += w * m.masses[b];
    weight_total += w;
  }
  if (!(weight_total > 0.0)) throw DegenerateSliceError("y-bin carries no probability mass");
  return renormalized(std::move(acc));
}

std::vector<YBinResult> conditional_born_bins(const ComplexField& psi, const Samples& samples,
                                              const ConditionalBornOptions& options, std::uint64_t seed,
                                              int workers) {
  if (samples.dim != 2) throw ConfigError("conditional Born statistics need 2D samples");
  const auto ye = options.y_edges.edges();
  const std::size_t bins = options.y_edges.bins();
  std::vector<EmpiricalDistribution> hist(bins, EmpiricalDistribution(options.x_edges));
  std::vector<std::uint64_t> counts(bins, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const long long b = options.y_edges.locate(samples(i, 1));
    if (b < 0) continue;
    ++counts[static_cast<std::size_t>(b)];
    hist[static_cast<std::size_t>(b)].add(samples(i, 0));
  }
  std::vector<YBinResult> out(bins);
  parallel_for(bins, workers, [&](std::size_t b) {
    YBinResult& r = out[b];
    r.y_lo = ye[b];
    r.y_hi = ye[b + 1];
    r.count = counts[b];
    const BinnedMasses target = conditional_target(psi, r.y_lo, r.y_hi, options.x_edges);
    const BinnedMasses empirical = hist[b].normalized();
    r.target = target.masses;
    r.empirical = empirical.masses;
    r.excluded = counts[b] < options.min_count || hist[b].total() == 0;
    if (r.excluded) return;
    r.l1 = l1_distance(empirical, target);
    if (options.noise_replicas > 0) {
      RngStream rng(seed, derive_stream("conditional-born-noise", b));
      r.noise = l1_noise_quantile(target, hist[b].total(), options.noise_quantile, options.noise_replicas, rng);
    }
  });
  return out;
}

ExperimentReport conditional_born_experiment(const ConditionalBornParams& p, const RunContext& ctx) {
  if (p.samples == 0 || p.y_bins == 0 || p.x_bins == 0) throw ConfigError("conditional-born needs samples and bins");
  const Grid grid(2, p.points, p.length);
  ConditionalBornOptions opt{BinEdges::uniform(p.y_lo, p.y_hi, p.y_bins), BinEdges::uniform(p.x_lo, p.x_hi, p.x_bins),
                             p.min_count, 0, p.noise_quantile};

  ExperimentReport report;
  DataTable table{"y_bins", "per y-bin L1 between empirical X and the bin-averaged conditional density |psi^Y|^2",
                  {"state", "y_lo", "y_hi", "count", "l1", "noise_quantile", "excluded"}};
  DataTable example{"bin_profiles", "empirical X distribution against the conditional target in the most populated bin",
                    {"x_lo", "x_hi", "empirical_density", "target_density"}};

  const ComplexField corr = correlated_gaussian(grid, p.s, p.big_s);
  const DensitySampler sampler(grid, corr.density());
  const Samples draws = sampler.draw_parallel(p.samples, ctx.seed, "conditional-born", ctx.workers);
  const auto bins = conditional_born_bins(corr, draws, opt, ctx.seed, ctx.workers);
  double worst = 0.0;
  std::size_t excluded = 0;
  std::size_t busiest = 0;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const auto& r = bins[b];
    table.add_row({0.0, r.y_lo, r.y_hi, static_cast<double>(r.count), r.l1, r.noise, r.excluded ? 1.0 : 0.0});
    if (r.excluded) {
      ++excluded;
      char flag[96];
      std::snprintf(flag, sizeof flag, "excluded y-bin [%.4g, %.4g): %llu samples", r.y_lo, r.y_hi,
                    static_cast<unsigned long long>(r.count));
      report.flags.push_back(flag);
      continue;
    }
    worst = std::max(worst, r.l1);
    if (r.count > bins[busiest].count) busiest = b;
  }
  report.metrics.push_back(Metric::less_than("correlated_max_bin_l1", worst, p.l1_tolerance));
  report.metrics.push_back(Metric::info("correlated_excluded_bins", static_cast<double>(excluded)));
  const auto& top = bins[busiest];
  for (std::size_t k = 0; k < opt.x_edges.bins(); ++k) {
    const double w = opt.x_edges.width(k);
    example.add_row({opt.x_edges.edges()[k], opt.x_edges.edges()[k + 1], top.empirical[k] / w,
                     top.target[k] / w});
  }

  if (p.product_control) {
    const ComplexField prod = product_state(grid, {0.0, 0.0}, p.product_sigma);
    const DensitySampler ps(grid, prod.density());
    const Samples pd = ps.draw_parallel(p.samples, ctx.seed, "conditional-born-product", ctx.workers);
    ConditionalBornOptions popt = opt;
    popt.noise_replicas = p.noise_replicas;
    const auto pbins = conditional_born_bins(prod, pd, popt, ctx.seed, ctx.workers);
    std::size_t failing = 0, used = 0;
    double worst_ratio = 0.0;
    for (const auto& r : pbins) {
      table.add_row({1.0, r.y_lo, r.y_hi, static_cast<double>(r.count), r.l1, r.noise, r.excluded ? 1.0 : 0.0});
      if (r.excluded) continue;
      ++used;
      if (r.l1 > r.noise) ++failing;
      worst_ratio = std::max(worst_ratio, r.l1 / r.noise);
    }
    report.metrics.push_back(Metric::at_most("product_bins_above_noise_floor", static_cast<double>(failing), 0.0)
                                 .with_note(std::to_string(used) + " bins compared with their noise quantile"));
    report.metrics.push_back(Metric::info("product_worst_l1_over_noise", worst_ratio));
  }

  report.tables.push_back(std::move(table));
  report.tables.push_back(std::move(example));
  report.plots.push_back({"y_bins", "Per y-bin L1 distance", PlotKind::lines, "y_bins", "y_lo", {"l1", "noise_quantile"},
                          "y-bin lower edge", "L1"});
  report.plots.push_back({"bin_profiles", "Conditional X distribution in the busiest y-bin", PlotKind::histogram,
                          "bin_profiles", "x_lo", {"empirical_density", "target_density"}, "x", "density"});
  return report;
}

double region_probability(const Grid& grid, std::span<const double> density, double lo, double hi) {
  if (!(hi > lo)) throw ConfigError("region needs lo < hi");
  if (grid.dimension() != 1 || density.size() != grid.size()) throw DomainError("region probability needs a 1D density");
  const double dx = grid.spacing();
  double inside = 0.0, total = 0.0;
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double c_lo = grid.coordinate(j) - 0.5 * dx;
    const double overlap = std::min(c_lo + dx, hi) - std::max(c_lo, lo);
    total += density[j];
    if (overlap > 0.0) inside += density[j] * overlap / dx;
  }
  if (!(total > 0.0)) throw DomainError("density has no mass");
  return inside / total;
}

ExperimentReport born_lln_experiment(const BornLlnParams& p, const RunContext& ctx) {
  if (p.ladder.empty() || p.seeds == 0) throw ConfigError("born-lln needs an M ladder and seeds");
  for (std::size_t i = 0; i < p.ladder.size(); ++i) {
    if (p.ladder[i] == 0 || (i > 0 && p.ladder[i] <= p.ladder[i - 1])) {
      throw ConfigError("born-lln ladder must be strictly increasing and positive");
    }
  }
  if (!(p.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(p.region_hi > p.region_lo)) throw ConfigError("region A needs lo < hi");
  const Grid grid(1, p.points, p.length);
  const ComplexField phi = bohmian::gaussian_packet(grid, p.center, p.sigma);
  const auto rho = phi.density();
  const double target = region_probability(grid, rho, p.region_lo, p.region_hi);
  const DensitySampler sampler(grid, rho);

  const std::size_t rungs = p.ladder.size();
  std::vector<double> freq(rungs * p.seeds);
  parallel_for(freq.size(), ctx.workers, [&](std::size_t u) {
    RngStream rng(ctx.seed, derive_stream("born-lln", u));
    const std::size_t m = p.ladder[u / p.seeds];
    std::vector<double> x;
    std::uint64_t in = 0;
    for (std::size_t i = 0; i < m; ++i) {
      x.clear();
      sampler.draw(rng, x);
      if (x[0] >= p.region_lo && x[0] <= p.region_hi) ++in;
    }
    freq[u] = static_cast<double>(in) / static_cast<double>(m);
  });

  ExperimentReport report;
  report.metrics.push_back(Metric::info("target_probability", target).with_note("integral of |phi|^2 over A"));
  report.flags.push_back("universal |Psi|^2 of the M-fold product factorizes into independent |phi|^2 draws");
  DataTable ladder{"ladder", "measure of {|(1/M) sum chi_A(X_i) - integral_A |phi|^2| > eps} against the binomial tail",
                   {"M", "hits", "estimate", "ci_low", "ci_high", "exact_ci_low", "exact_ci_high", "binomial_oracle", "mean_frequency",
                    "mean_ci_low", "mean_ci_high", "verdict"}};
  std::vector<double> estimates;
  for (std::size_t r = 0; r < rungs; ++r) {
    const std::size_t m = p.ladder[r];
    std::uint64_t hits = 0;
    std::vector<double> fs(freq.begin() + static_cast<std::ptrdiff_t>(r * p.seeds),
                           freq.begin() + static_cast<std::ptrdiff_t>((r + 1) * p.seeds));
    // same predicate as binomial_deviation_probability
    for (const double f : fs) hits += std::abs(f - target) > p.epsilon ? 1 : 0;
    const MeasureEstimate est = estimate_measure(hits, p.seeds);
    const double oracle = binomial_deviation_probability(m, target, p.epsilon);
    const MeanVariance mv = mean_variance(fs);
    const double half = kZ99 * std::sqrt(mv.variance / static_cast<double>(p.seeds));
    const TypicalityVerdict verdict = classify_typicality(est, p.tau);
    const double code = verdict.classification == Typicality::typical    ? 1.0
                        : verdict.classification == Typicality::atypical ? -1.0
                                                                         : 0.0;
    estimates.push_back(est.value);
    const std::string tag = "M=" + std::to_string(m);
    // Wilson under-covers when the oracle is tiny, so the check uses the exact interval
    const ConfidenceInterval exact = clopper_pearson_interval(hits, p.seeds);
    ladder.add_row({static_cast<double>(m), static_cast<double>(hits), est.value, est.ci.low, est.ci.high, exact.low,
                    exact.high, oracle, mv.mean, mv.mean - half, mv.mean + half, code});
    report.metrics.push_back(Metric::target_in_ci("deviation_measure_" + tag, est.value, exact, oracle)
                                 .with_note("binomial tail inside the 99% Clopper-Pearson interval; Wilson [" +
                                            std::to_string(est.ci.low) + ", " + std::to_string(est.ci.high) +
                                            "]; verdict " + to_string(verdict.classification)));
    report.metrics.push_back(
        Metric::target_in_ci("mean_frequency_" + tag, mv.mean, {mv.mean - half, mv.mean + half}, target));
  }
  bool decreasing = true;
  for (std::size_t r = 1; r < rungs; ++r) decreasing = decreasing && estimates[r] < estimates[r - 1];
  report.metrics.push_back(Metric::holds("deviation_measure_decreasing", decreasing));
  report.metrics.push_back(Metric::less_than("deviation_measure_at_largest_M", estimates.back(), p.tau));

  report.tables.push_back(std::move(ladder));
  report.plots.push_back({"ladder", "Deviation-set measure against the binomial oracle", PlotKind::lines, "ladder", "M",
                          {"estimate", "binomial_oracle"}, "M", "measure", true, true});
  return report;
}

}  // namespace typlab::subsystems
