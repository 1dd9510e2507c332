#include "typlab/bohmian/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "typlab/errors.hpp"
#include "typlab/numerics/fft.hpp"
#include "typlab/numerics/stats.hpp"

namespace typlab::bohmian {

namespace {

/// psi(x) and psi'(x) of the trigonometric interpolant.
void evaluate_interpolant(const ComplexField& spec, const Grid& g, double x, Complex& value, Complex& slope) {
  const auto k = g.wavenumbers();
  const double n = static_cast<double>(g.points());
  value = slope = Complex(0.0, 0.0);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const Complex e = spec[m] * std::polar(1.0, k[m] * (x - g.origin()));
    value += e;
    slope += Complex(0.0, k[m]) * e;
  }
  value /= n;
  slope /= n;
}

double current_at(const ComplexField& psi, const Units& units, double x) {
  const ComplexField spec = dft_forward(psi);
  Complex v, d;
  evaluate_interpolant(spec, psi.grid(), x, v, d);
  return units.hbar / units.mass[0] * std::imag(std::conj(v) * d);
}

}  // namespace

double box_probability(const ComplexField& psi, double a, double b) {
  const Grid& g = psi.grid();
  if (g.dimension() != 1) throw ConfigError("box_probability needs a 1D field");
  if (!(b > a)) throw ConfigError("box needs a < b");
  const std::size_t n = g.points();
  const std::size_t n2 = 2 * n;
  const ComplexField spec = dft_forward(psi);
  std::vector<Complex> padded(n2, Complex(0.0, 0.0));
  for (std::size_t m = 0; m < n; ++m) padded[m < n / 2 ? m : m + n] = spec[m];
  const Fft fft(n2);
  fft.inverse(padded);
  std::vector<Complex> rho(n2);
  // fine-grid values of the interpolant are 2 * inverse_2n
  for (std::size_t j = 0; j < n2; ++j) rho[j] = Complex(4.0 * std::norm(padded[j]), 0.0);
  fft.forward(rho);
  const Grid fine(1, n2, g.length());
  const auto kappa = fine.wavenumbers();
  Complex total(0.0, 0.0);
  for (std::size_t q = 0; q < n2; ++q) {
    if (q == 0) {
      total += rho[q] * (b - a);
    } else {
      const Complex ea = std::polar(1.0, kappa[q] * (a - g.origin()));
      const Complex eb = std::polar(1.0, kappa[q] * (b - g.origin()));
      total += rho[q] * (eb - ea) / Complex(0.0, kappa[q]);
    }
  }
  return std::real(total) / static_cast<double>(n2);
}

ContinuityResidual continuity_residual(const WaveFunction& wf, double a, double b, double h, std::size_t substeps) {
  if (wf.grid().dimension() != 1) throw ConfigError("continuity residual is implemented for 1D grids");
  if (!(h > 0.0) || substeps == 0) throw ConfigError("continuity residual needs h > 0 and substeps");
  const SplitStepPropagator prop(wf, h / static_cast<double>(substeps));
  ComplexField psi = wf.field();
  const double p0 = box_probability(psi, a, b);
  prop.steps(psi, substeps);
  const double outflow = current_at(psi, wf.units(), b) - current_at(psi, wf.units(), a);
  ComplexField later = psi;
  prop.steps(later, substeps);
  const double p2 = box_probability(later, a, b);
  ContinuityResidual r;
  r.time = h;
  r.rate = (p2 - p0) / (2.0 * h);
  r.net_outflow = outflow;
  r.residual = std::abs(r.rate + r.net_outflow);
  return r;
}

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

ExperimentReport equivariance_experiment(const EquivarianceParams& p, const RunContext& ctx) {
  if (p.checkpoints == 0 || p.samples == 0 || p.bins == 0) throw ConfigError("equivariance needs checkpoints, samples and bins");
  if (!(p.omega > 0.0)) throw ConfigError("omega must be positive");
  if (p.state != "superposition" && p.state != "ground") {
    throw ConfigError("equivariance state must be \"superposition\" or \"ground\"");
  }
  const Grid grid(1, p.points, p.length);
  const double duration = p.duration > 0.0 ? p.duration : 2.0 * std::numbers::pi / p.omega;

  ComplexField psi0 = harmonic_eigenstate(grid, 0, p.units.mass[0], p.omega, p.units.hbar);
  if (p.state == "superposition") {
    const ComplexField e1 = harmonic_eigenstate(grid, 1, p.units.mass[0], p.omega, p.units.hbar);
    for (std::size_t i = 0; i < psi0.size(); ++i) psi0[i] = (psi0[i] + e1[i]) / std::sqrt(2.0);
  }
  const WaveFunction wf(psi0, p.units, harmonic_potential(grid, p.units, p.omega));
  if (!(p.dt > 0.0) || p.frame_stride == 0) throw ConfigError("equivariance needs dt > 0 and a frame stride");
  // shrink dt so that every checkpoint falls on a stored frame
  const double spacing = duration / static_cast<double>(p.checkpoints);
  const auto frames_per_checkpoint = static_cast<std::size_t>(
      std::ceil(spacing / (p.dt * static_cast<double>(p.frame_stride)) - 1e-9));
  const double dt = spacing / static_cast<double>(frames_per_checkpoint * p.frame_stride);
  const PsiHistory history = PsiHistory::propagate(wf, dt, p.frame_stride, duration);

  std::vector<double> times(p.checkpoints + 1);
  std::vector<std::size_t> frame_of(times.size());
  for (std::size_t k = 0; k <= p.checkpoints; ++k) {
    frame_of[k] = k * frames_per_checkpoint;
    times[k] = static_cast<double>(frame_of[k]) * history.frame_interval();
  }

  const DensitySampler sampler(grid, wf.density());
  const Samples starts = sampler.draw_parallel(p.samples, ctx.seed, "equivariance-initial", ctx.workers);
  TrajectoryOptions topt;
  topt.dt = p.trajectory_dt;
  const EnsembleResult ens = advance_ensemble(history, starts, times, topt, ctx.workers);

  const BinEdges edges = BinEdges::uniform(p.bin_lo, p.bin_hi, p.bins);
  ExperimentReport report;
  DataTable table{"checkpoints", "L1 distance between the advected ensemble and |Psi_t|^2 (equivariance)",
                  {"t", "l1", "noise_band", "in_range", "norm_deviation"}};
  DataTable hist{"final_histogram", "ensemble histogram against |Psi_t|^2 at the last checkpoint",
                 {"bin_lo", "bin_hi", "empirical_density", "psi_density"}};
  double band = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const ComplexField& frame = history.frame(frame_of[k]);
    const BinnedMasses target = renormalized(bin_density(grid, frame.density(), edges));
    const auto xs = ens.positions[k].axis(0);
    const auto emp = EmpiricalDistribution::from_samples(edges, xs);
    const double l1 = l1_distance(emp, target);
    if (k == 0) {
      RngStream rng(ctx.seed, derive_stream("equivariance-noise", 0));
      band = l1_noise_quantile(target, p.samples, p.noise_quantile, p.noise_replicas, rng);
    }
    table.add_row({times[k], l1, band, static_cast<double>(emp.total()), std::abs(std::sqrt(frame.norm_squared()) - 1.0)});
    char label[48];
    std::snprintf(label, sizeof label, "l1_t=%.4f", times[k]);
    if (k == 0) {
      report.metrics.push_back(Metric::at_most(label, l1, band).with_note("t = 0 sampling noise quantile"));
    } else {
      report.metrics.push_back(Metric::less_than(label, l1, p.l1_tolerance));
      report.metrics.push_back(Metric::at_most(std::string(label) + "_within_noise_band", l1, p.noise_band_factor * band));
    }
    if (k + 1 == times.size()) {
      const auto m = emp.normalized();
      for (std::size_t b = 0; b < edges.bins(); ++b) {
        hist.add_row({edges.edges()[b], edges.edges()[b + 1], m.masses[b] / edges.width(b),
                      target.masses[b] / edges.width(b)});
      }
    }
  }
  const double rate = ens.quality.clamp_rate();
  report.metrics.push_back(Metric::less_than("node_clamp_rate", rate, p.clamp_rate_tolerance));
  report.metrics.push_back(Metric::info("trajectory_steps", static_cast<double>(ens.quality.steps)));
  report.metrics.push_back(Metric::info("step_halvings", static_cast<double>(ens.quality.halvings)));
  report.metrics.push_back(Metric::info("wraps", static_cast<double>(ens.quality.wraps)));
  if (rate > p.clamp_rate_tolerance) report.flags.push_back("unreliable: node-clamp rate above tolerance");
  if (ens.quality.wraps > 0) report.flags.push_back("trajectories wrapped across the periodic boundary");

  DataTable bundle{"trajectory_bundle", "Bohmian trajectories from evenly spaced quantiles of |Psi_0|^2", {"t"}};
  {
    const std::size_t count = std::min(p.bundle_size, starts.size());
    std::vector<double> out_times(101);
    for (std::size_t k = 0; k < out_times.size(); ++k) {
      out_times[k] = times.back() * static_cast<double>(k) / static_cast<double>(out_times.size() - 1);
    }
    std::vector<double> sorted = starts.axis(0);
    std::sort(sorted.begin(), sorted.end());
    std::vector<Trajectory> paths;
    for (std::size_t i = 0; i < count; ++i) {
      const double q = sorted[(2 * i + 1) * sorted.size() / (2 * count)];
      paths.push_back(advance_trajectory(history, std::span<const double>(&q, 1), out_times, topt));
      bundle.columns.push_back("q" + std::to_string(i));
    }
    for (std::size_t k = 0; k < out_times.size(); ++k) {
      std::vector<double> row{out_times[k]};
      for (const auto& tr : paths) row.push_back(tr.points[k]);
      bundle.add_row(std::move(row));
    }
  }
  std::vector<std::string> bundle_cols(bundle.columns.begin() + 1, bundle.columns.end());
  report.tables.push_back(std::move(table));
  report.tables.push_back(std::move(hist));
  report.tables.push_back(std::move(bundle));
  report.plots.push_back({"checkpoints", "L1 distance to |Psi_t|^2 at checkpoints", PlotKind::lines, "checkpoints", "t",
                          {"l1", "noise_band"}, "t", "L1"});
  report.plots.push_back({"final_histogram", "Ensemble vs |Psi_t|^2 at the last checkpoint", PlotKind::histogram,
                          "final_histogram", "bin_lo", {"empirical_density", "psi_density"}, "x", "density"});
  report.plots.push_back({"trajectory_bundle", "Bohmian trajectories", PlotKind::trajectories, "trajectory_bundle", "t",
                          bundle_cols, "t", "x"});
  return report;
}

}  // namespace typlab::bohmian
