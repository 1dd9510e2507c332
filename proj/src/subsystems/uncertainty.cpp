#include "typlab/subsystems/uncertainty.hpp"

#include <cmath>
#include <cstdio>

#include "typlab/bohmian/trajectory.hpp"
#include "typlab/errors.hpp"
#include "typlab/numerics/stats.hpp"

namespace typlab::subsystems {

ExperimentReport absolute_uncertainty_experiment(const AbsoluteUncertaintyParams& p, const RunContext& ctx) {
  if (p.sigma_ladder.empty() || p.samples < 2) throw ConfigError("absolute-uncertainty needs widths and samples");
  if (!(p.t_final_over_tau > 0.0) || !(p.frame_interval_over_tau > 0.0) || !(p.trajectory_dt_over_tau > 0.0)) {
    throw ConfigError("absolute-uncertainty time scales must be positive");
  }
  p.units.validate();
  const double m = p.units.mass[0];
  const double hbar = p.units.hbar;

  ExperimentReport report;
  DataTable table{"ladder", "position spread times m times asymptotic velocity spread against hbar / 2",
                  {"sigma0", "tau", "t_final", "dx0", "dv", "product", "hbar_over_2", "spread_final",
                   "sigma_final", "clamp_rate"}};
  DataTable velocities{"velocity_histogram", "asymptotic velocities of the narrowest packet, in units of hbar / (2 m sigma0)",
                       {"bin_lo", "bin_hi", "empirical_density", "gaussian_density"}};
  std::vector<double> dv_by_sigma;
  for (std::size_t level = 0; level < p.sigma_ladder.size(); ++level) {
    const double s0 = p.sigma_ladder[level];
    if (!(s0 > 0.0)) throw ConfigError("packet widths must be positive");
    const double tau = 2.0 * m * s0 * s0 / hbar;
    const double t_final = p.t_final_over_tau * tau;
    const double t_mid = 0.5 * t_final;
    const Grid grid(1, p.points, p.length_over_sigma * s0);
    const bohmian::WaveFunction wf(bohmian::gaussian_packet(grid, 0.0, s0), p.units);

    const double spread_factor = bohmian::free_gaussian_width(s0, t_final, m, hbar) / s0;
    if (spread_factor < p.min_spread_factor) {
      char flag[120];
      std::snprintf(flag, sizeof flag, "sigma0 = %.4g: sigma(t_final)/sigma0 = %.3g below %.3g, not asymptotic", s0,
                    spread_factor, p.min_spread_factor);
      report.flags.push_back(flag);
    }

    // V = 0: one split step per frame is exact
    const double interval = p.frame_interval_over_tau * tau;
    const auto history = bohmian::PsiHistory::propagate(wf, interval, 1, t_final);
    const DensitySampler sampler(grid, wf.density());
    char purpose[48];
    std::snprintf(purpose, sizeof purpose, "absolute-uncertainty-%zu", level);
    const Samples starts = sampler.draw_parallel(p.samples, ctx.seed, purpose, ctx.workers);
    bohmian::TrajectoryOptions topt;
    topt.dt = p.trajectory_dt_over_tau * tau;
    const std::vector<double> times{t_mid, history.final_time()};
    const auto ens = bohmian::advance_ensemble(history, starts, times, topt, ctx.workers);

    const auto x0 = starts.axis(0);
    const auto xm = ens.positions[0].axis(0);
    const auto xf = ens.positions[1].axis(0);
    const double span = times[1] - times[0];
    std::vector<double> v(x0.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (xf[i] - xm[i]) / span;
    const double dx0 = std::sqrt(mean_variance(x0).variance);
    const double dv = std::sqrt(mean_variance(v).variance);
    const double spread = std::sqrt(mean_variance(xf).variance);
    const double sigma_final = bohmian::free_gaussian_width(s0, times[1], m, hbar);
    const double product = dx0 * m * dv;
    table.add_row({s0, tau, times[1], dx0, dv, product, 0.5 * hbar, spread, sigma_final, ens.quality.clamp_rate()});
    dv_by_sigma.push_back(dv);

    char tag[32];
    std::snprintf(tag, sizeof tag, "sigma0=%.4g", s0);
    report.metrics.push_back(Metric::within(std::string("uncertainty_product_") + tag, product, 0.5 * hbar,
                                            p.product_tolerance * 0.5 * hbar));
    report.metrics.push_back(Metric::within(std::string("spread_ratio_") + tag, spread / sigma_final, 1.0,
                                            p.spread_tolerance)
                                 .with_note("measured spread at t_final over sigma(t_final)"));

    if (level + 1 == p.sigma_ladder.size()) {
      const double unit = hbar / (2.0 * m * s0);
      const BinEdges edges = BinEdges::uniform(-4.0, 4.0, 40);
      std::vector<double> scaled(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = v[i] / unit;
      const auto hist = EmpiricalDistribution::from_samples(edges, scaled);
      for (std::size_t b = 0; b < edges.bins(); ++b) {
        const double w = edges.width(b);
        const double c = edges.center(b);
        velocities.add_row({edges.edges()[b], edges.edges()[b + 1],
                            static_cast<double>(hist.counts()[b]) / static_cast<double>(scaled.size()) / w,
                            std::exp(-0.5 * c * c) / std::sqrt(2.0 * 3.141592653589793)});
      }
    }
  }
  for (std::size_t level = 1; level < dv_by_sigma.size(); ++level) {
    const double halving = p.sigma_ladder[level - 1] / p.sigma_ladder[level];
    const double ratio = dv_by_sigma[level] / dv_by_sigma[level - 1];
    char label[64];
    std::snprintf(label, sizeof label, "velocity_spread_ratio_%zu_%zu", level - 1, level);
    // compare against the width ratio, which is 2 on a halving ladder
    report.metrics.push_back(Metric::within(label, ratio, p.ratio_target * halving / 2.0, p.ratio_tolerance));
  }
  report.tables.push_back(std::move(table));
  report.tables.push_back(std::move(velocities));
  report.plots.push_back({"ladder", "Velocity spread against packet width", PlotKind::lines, "ladder", "sigma0", {"dv"},
                          "sigma0", "velocity spread", true, true});
  report.plots.push_back({"velocity_histogram", "Asymptotic velocities of the narrowest packet", PlotKind::histogram,
                          "velocity_histogram", "bin_lo", {"empirical_density", "gaussian_density"},
                          "v / (hbar / 2 m sigma0)", "density"});
  return report;
}

}  // namespace typlab::subsystems
