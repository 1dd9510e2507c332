#include "typlab/classical/stone.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "typlab/classical/verlet.hpp"
#include "typlab/errors.hpp"
#include "typlab/numerics/parallel.hpp"

namespace typlab::classical {

namespace {

constexpr std::size_t kChunk = 4096;

std::array<double, 3> isotropic_direction(RngStream& rng) {
  for (;;) {
    std::array<double, 3> d{rng.normal(), rng.normal(), rng.normal()};
    const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (norm > 1e-12) {
      for (auto& c : d) c /= norm;
      return d;
    }
  }
}

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

void StoneThrowSpec::validate() const {
  if (!(mass > 0.0)) throw ConfigError("stone mass must be positive");
  if (!(horizon > 0.0)) throw ConfigError("stone flight horizon must be positive");
  if (!(dt > 0.0)) throw ConfigError("stone dt must be positive");
  if (!(delta_pert >= 0.0)) throw ConfigError("stone perturbation scale must be non-negative");
  if (!(epsilon > 0.0)) throw ConfigError("stone deviation threshold must be positive");
}

HamiltonianSystem stone_system(const StoneThrowSpec& spec, const ThirdBody* third_body) {
  spec.validate();
  std::vector<ExternalPotential> ext{UniformGravity{spec.gravity, 2}};
  if (third_body != nullptr) {
    ext.push_back(PointMass{third_body->gm, {third_body->position.begin(), third_body->position.end()}});
  }
  return HamiltonianSystem({spec.mass}, 3, NoInteraction{}, std::move(ext));
}

std::vector<std::array<double, 3>> stone_trajectory(const HamiltonianSystem& system, const StoneThrowSpec& spec,
                                                     const std::array<double, 3>& velocity) {
  const auto steps = static_cast<std::size_t>(std::ceil(spec.horizon / spec.dt - 1e-9));
  const double h = spec.horizon / static_cast<double>(steps);
  Microstate s(1, 3);
  for (int a = 0; a < 3; ++a) {
    s.q_at(0, a) = spec.x0[static_cast<std::size_t>(a)];
    s.p_at(0, a) = spec.mass * velocity[static_cast<std::size_t>(a)];
  }
  VerletIntegrator integrator(system, s);
  std::vector<std::array<double, 3>> path;
  path.reserve(steps + 1);
  path.push_back({s.q[0], s.q[1], s.q[2]});
  for (std::size_t k = 0; k < steps; ++k) {
    integrator.step(s, h);
    path.push_back({s.q[0], s.q[1], s.q[2]});
  }
  return path;
}

std::vector<double> stone_sup_deviations(const HamiltonianSystem& system, const StoneThrowSpec& spec, std::size_t n,
                                         std::uint64_t seed, std::uint64_t stream_base, int workers) {
  const auto reference = stone_trajectory(system, spec, spec.v0);
  std::vector<double> sup(n, 0.0);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    RngStream rng(seed, stream_base + c);
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto dir = isotropic_direction(rng);
      std::array<double, 3> v = spec.v0;
      for (std::size_t a = 0; a < 3; ++a) v[a] += spec.delta_pert * dir[a];
      const auto path = stone_trajectory(system, spec, v);
      double worst = 0.0;
      for (std::size_t k = 0; k < path.size(); ++k) worst = std::max(worst, distance(path[k], reference[k]));
      sup[i] = worst;
    }
  });
  return sup;
}

StoneParams default_stone_params() {
  StoneParams p;
  const auto& v = p.spec.v0;
  p.spec.delta_pert = 1e-3 * std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  p.spec.epsilon = 10.0 * p.spec.delta_pert * p.spec.horizon;
  return p;
}

ExperimentReport stone_robustness_experiment(const StoneParams& p, const RunContext& ctx) {
  p.spec.validate();
  if (p.perturbations == 0) throw ConfigError("stone-robustness needs perturbations");
  if (p.halving_levels < 2 || p.halving_samples == 0) {
    throw ConfigError("stone-robustness needs at least two halving levels with samples");
  }

  ExperimentReport report;
  report.flags.push_back("surrogate-measure: velocity jitter isotropic with fixed magnitude delta_pert");

  const HamiltonianSystem gravity_only = stone_system(p.spec);
  const std::uint64_t base = derive_stream("stone-robustness", 0);
  const auto sup = stone_sup_deviations(gravity_only, p.spec, p.perturbations, ctx.seed, base, ctx.workers);

  const double exact = p.spec.delta_pert * p.spec.horizon;
  double worst_error = 0.0;
  std::uint64_t hits = 0;
  for (const double d : sup) {
    worst_error = std::max(worst_error, std::abs(d - exact));
    hits += d > p.spec.epsilon ? 1 : 0;
  }
  report.metrics.push_back(Metric::at_most("analytic_sup_deviation_error", worst_error, p.analytic_tolerance)
                               .with_note("uniform gravity: sup_t |x~ - x| = delta * T"));
  const MeasureEstimate est = estimate_measure(hits, p.perturbations);
  const TypicalityVerdict verdict = classify_typicality(est, p.tau);
  report.metrics.push_back(Metric::less_than("deviation_measure", est.value, p.tau)
                               .with_ci(est.ci)
                               .with_note("verdict " + to_string(verdict.classification)));

  DataTable deviations{"sup_deviations", "sup over [0, T] of |x~(t) - x(t)| per perturbed throw",
                       {"index", "sup_deviation", "sup_deviation_third_body"}};
  std::vector<double> sup_body(sup.size(), 0.0);
  if (p.third_body) {
    const HamiltonianSystem with_body = stone_system(p.spec, &p.body);
    sup_body = stone_sup_deviations(with_body, p.spec, p.perturbations, ctx.seed, base, ctx.workers);
    std::uint64_t body_hits = 0;
    for (const double d : sup_body) body_hits += d > p.spec.epsilon ? 1 : 0;
    const MeasureEstimate body_est = estimate_measure(body_hits, p.perturbations);
    report.metrics.push_back(Metric::less_than("deviation_measure_third_body", body_est.value, p.tau)
                                 .with_ci(body_est.ci)
                                 .with_note("verdict " + to_string(classify_typicality(body_est, p.tau).classification)));
    // displacement of the unperturbed throw caused by the third body
    const auto free_path = stone_trajectory(gravity_only, p.spec, p.spec.v0);
    const auto body_path = stone_trajectory(with_body, p.spec, p.spec.v0);
    double shift = 0.0;
    for (std::size_t k = 0; k < free_path.size(); ++k) shift = std::max(shift, distance(free_path[k], body_path[k]));
    report.metrics.push_back(Metric::info("third_body_reference_shift", shift));
  }
  for (std::size_t i = 0; i < sup.size(); ++i) deviations.add_row({static_cast<double>(i), sup[i], sup_body[i]});

  DataTable halving{"halving_ladder", "mean sup deviation as delta_pert halves", {"delta_pert", "mean_sup_deviation",
                                                                                  "max_sup_deviation"}};
  StoneThrowSpec level = p.spec;
  std::vector<double> means;
  for (std::size_t l = 0; l < p.halving_levels; ++l) {
    const auto s = stone_sup_deviations(gravity_only, level, p.halving_samples, ctx.seed,
                                        derive_stream("stone-halving", l), ctx.workers);
    double sum = 0.0, mx = 0.0;
    for (const double d : s) {
      sum += d;
      mx = std::max(mx, d);
    }
    means.push_back(sum / static_cast<double>(s.size()));
    halving.add_row({level.delta_pert, means.back(), mx});
    level.delta_pert *= 0.5;
  }
  bool decreasing = true;
  for (std::size_t l = 1; l < means.size(); ++l) decreasing = decreasing && means[l] < means[l - 1];
  if (p.spec.delta_pert == 0.0) decreasing = means.back() == 0.0;
  report.metrics.push_back(Metric::holds("sup_deviation_decreases_with_delta", decreasing));

  DataTable paths{"trajectories", "reference throw and first perturbed throws, height against time",
                  {"t", "reference_z", "perturbed_z_0", "perturbed_z_1", "perturbed_z_2"}};
  {
    const auto ref = stone_trajectory(gravity_only, p.spec, p.spec.v0);
    RngStream rng(ctx.seed, derive_stream("stone-bundle", 0));
    std::vector<std::vector<std::array<double, 3>>> bundle;
    for (int k = 0; k < 3; ++k) {
      const auto dir = isotropic_direction(rng);
      std::array<double, 3> v = p.spec.v0;
      // exaggerated jitter so the bundle is visible
      for (std::size_t a = 0; a < 3; ++a) v[a] += 100.0 * p.spec.delta_pert * dir[a];
      bundle.push_back(stone_trajectory(gravity_only, p.spec, v));
    }
    const double h = p.spec.horizon / static_cast<double>(ref.size() - 1);
    const std::size_t stride = std::max<std::size_t>(1, ref.size() / 100);
    for (std::size_t k = 0; k < ref.size(); k += stride) {
      paths.add_row({static_cast<double>(k) * h, ref[k][2], bundle[0][k][2], bundle[1][k][2], bundle[2][k][2]});
    }
  }

  report.tables.push_back(std::move(deviations));
  report.tables.push_back(std::move(halving));
  report.tables.push_back(std::move(paths));
  report.plots.push_back({"halving_ladder", "Sup deviation against perturbation scale", PlotKind::lines,
                          "halving_ladder", "delta_pert", {"mean_sup_deviation", "max_sup_deviation"}, "delta_pert",
                          "sup deviation", true, true});
  report.plots.push_back({"trajectories", "Reference and jittered throws (jitter x100)", PlotKind::trajectories,
                          "trajectories", "t", {"reference_z", "perturbed_z_0", "perturbed_z_1", "perturbed_z_2"}, "t",
                          "z"});
  return report;
}

}  // namespace typlab::classical
