#include "typlab/classical/liouville.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <string>

#include "typlab/classical/verlet.hpp"
#include "typlab/errors.hpp"
#include "typlab/numerics/parallel.hpp"

namespace typlab::classical {

namespace {

constexpr std::size_t kChunk = 4096;

Microstate state_from_point(const HamiltonianSystem& system, std::span<const double> x) {
  Microstate s(system.particles(), system.dim());
  const std::size_t half = s.q.size();
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(half), s.q.begin());
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(half), x.end(), s.p.begin());
  return s;
}

void point_from_state(const Microstate& s, std::vector<double>& x) {
  x.assign(s.q.begin(), s.q.end());
  x.insert(x.end(), s.p.begin(), s.p.end());
}

}  // namespace

double PhaseBox::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool PhaseBox::contains(const Microstate& s) const {
  const std::size_t half = s.q.size();
  for (std::size_t i = 0; i < half; ++i) {
    if (s.q[i] < lo[i] || s.q[i] > hi[i]) return false;
    if (s.p[i] < lo[half + i] || s.p[i] > hi[half + i]) return false;
  }
  return true;
}

void PhaseBox::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw ConfigError("phase box needs matching lo/hi vectors");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw ConfigError("phase box intervals must be finite and nonempty");
    }
  }
}

LiouvilleReport liouville_volume_check(const HamiltonianSystem& system, const PhaseBox& region, double t,
                                       const LiouvilleOptions& options) {
  region.validate();
  const std::size_t dims = 2 * system.particles() * static_cast<std::size_t>(system.dim());
  if (region.dims() != dims) throw ConfigError("phase box dimension does not match the system's phase space");
  if (t < 0.0) throw ConfigError("Liouville check needs t >= 0");
  if (options.samples == 0) throw ConfigError("Liouville check needs samples");
  if (system.has_singular_interaction()) {
    throw ConfigError("Liouville check is not defined for inverse-distance interactions");
  }

  // Bound the forward image of A by probing its corners and random interior points.
  std::vector<double> img_lo(dims, std::numeric_limits<double>::infinity());
  std::vector<double> img_hi(dims, -std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> probes;
  if (dims <= 12) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << dims); ++mask) {
      std::vector<double> x(dims);
      for (std::size_t i = 0; i < dims; ++i) x[i] = (mask >> i) & 1 ? region.hi[i] : region.lo[i];
      probes.push_back(std::move(x));
    }
  }
  {
    RngStream rng(options.seed, derive_stream(options.stream_tag + "-probe", 0));
    for (std::size_t k = 0; k < options.probes; ++k) {
      std::vector<double> x(dims);
      for (std::size_t i = 0; i < dims; ++i) x[i] = rng.uniform(region.lo[i], region.hi[i]);
      probes.push_back(std::move(x));
    }
  }
  std::vector<std::vector<double>> images(probes.size());
  parallel_for(probes.size(), options.workers, [&](std::size_t k) {
    const Microstate s = integrate(system, state_from_point(system, probes[k]), t, options.dt);
    point_from_state(s, images[k]);
  });
  for (const auto& x : images) {
    for (std::size_t i = 0; i < dims; ++i) {
      img_lo[i] = std::min(img_lo[i], x[i]);
      img_hi[i] = std::max(img_hi[i], x[i]);
    }
  }

  PhaseBox ref{img_lo, img_hi};
  for (std::size_t i = 0; i < dims; ++i) {
    double extent = img_hi[i] - img_lo[i];
    if (!(extent > 0.0)) extent = region.hi[i] - region.lo[i];
    const double pad = 0.1 * extent;
    ref.lo[i] = img_lo[i] - pad;
    ref.hi[i] = img_hi[i] + pad;
  }
  const double vol_a = region.volume();
  const double target_ratio = std::clamp(options.reference_fraction, 1e-6, 1.0);
  if (vol_a / ref.volume() > target_ratio) {
    const double grow = std::pow(vol_a / (target_ratio * ref.volume()), 1.0 / static_cast<double>(dims));
    for (std::size_t i = 0; i < dims; ++i) {
      const double c = 0.5 * (ref.lo[i] + ref.hi[i]);
      const double h = 0.5 * (ref.hi[i] - ref.lo[i]) * grow;
      ref.lo[i] = c - h;
      ref.hi[i] = c + h;
    }
  }

  std::size_t violations = 0;
  for (const auto& x : images) {
    for (std::size_t i = 0; i < dims; ++i) {
      if (x[i] < ref.lo[i] || x[i] > ref.hi[i]) {
        ++violations;
        break;
      }
    }
  }

  std::size_t per_axis = 0;
  std::size_t strata = 0;
  if (options.stratified) {
    per_axis = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(options.samples), 1.0 / static_cast<double>(dims)) + 1e-9));
    strata = 1;
    for (std::size_t i = 0; i < dims; ++i) strata *= per_axis;
    if (per_axis < 2) strata = 0;
  }
  const std::size_t chunks = (options.samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, options.workers, [&](std::size_t c) {
    RngStream rng(options.seed, derive_stream(options.stream_tag, c));
    const std::size_t count = std::min(kChunk, options.samples - c * kChunk);
    std::vector<double> x(dims);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t index = c * kChunk + k;
      if (index < strata) {
        std::size_t rest = index;
        for (std::size_t i = 0; i < dims; ++i) {
          const double cell = static_cast<double>(rest % per_axis);
          rest /= per_axis;
          x[i] = ref.lo[i] + (ref.hi[i] - ref.lo[i]) * (cell + rng.uniform()) / static_cast<double>(per_axis);
        }
      } else {
        for (std::size_t i = 0; i < dims; ++i) x[i] = rng.uniform(ref.lo[i], ref.hi[i]);
      }
      const Microstate back = integrate_backward(system, state_from_point(system, x), t, options.dt);
      if (region.contains(back)) ++hits[c];
    }
  });
  std::uint64_t total_hits = 0;
  for (const auto h : hits) total_hits += h;

  LiouvilleReport r;
  r.time = t;
  r.hit_fraction = estimate_measure(total_hits, options.samples);
  const double scale = ref.volume() / vol_a;
  r.ratio = r.hit_fraction.value * scale;
  r.ratio_ci = {r.hit_fraction.ci.low * scale, r.hit_fraction.ci.high * scale};
  r.reference_box = std::move(ref);
  r.containment_violations = violations;
  return r;
}

ExperimentReport liouville_experiment(const LiouvilleParams& p, const RunContext& ctx) {
  if (!(p.mass > 0.0) || !(p.stiffness > 0.0)) throw ConfigError("liouville-check needs positive mass and stiffness");
  if (p.times.empty()) throw ConfigError("liouville-check needs at least one time");
  p.region.validate();
  if (p.region.dims() != 2) throw ConfigError("liouville-check region must be a (q, p) box");

  ExperimentReport report;
  DataTable table{"volume_ratios", "lambda(Phi_t A) / lambda(A) by backward-flow indicator sampling",
                  {"system", "t", "hits", "samples", "hit_fraction", "ratio", "ci_low", "ci_high",
                   "reference_volume", "containment_violations"}};
  struct Case {
    std::string name;
    double code;
    HamiltonianSystem system;
  };
  std::vector<Case> cases;
  cases.push_back({"harmonic", 0.0, HamiltonianSystem({p.mass}, 1, NoInteraction{}, {HarmonicTrap{p.stiffness}})});
  if (p.free_particle_control) cases.push_back({"free", 1.0, HamiltonianSystem::free_particles(1, 1, p.mass)});

  for (const auto& c : cases) {
    const std::vector<double> times = c.name == "free" ? std::vector<double>{p.times.back()} : p.times;
    for (std::size_t k = 0; k < times.size(); ++k) {
      LiouvilleOptions opt;
      opt.samples = p.samples;
      opt.dt = p.dt;
      opt.seed = ctx.seed;
      opt.workers = ctx.workers;
      opt.stream_tag = "liouville-" + c.name + "-" + std::to_string(k);
      const LiouvilleReport r = liouville_volume_check(c.system, p.region, times[k], opt);
      table.add_row({c.code, times[k], static_cast<double>(r.hit_fraction.hits), static_cast<double>(p.samples),
                     r.hit_fraction.value, r.ratio, r.ratio_ci.low, r.ratio_ci.high, r.reference_box.volume(),
                     static_cast<double>(r.containment_violations)});
      char label[64];
      std::snprintf(label, sizeof label, "volume_ratio_%s_t=%.4f", c.name.c_str(), times[k]);
      report.metrics.push_back(Metric::target_in_ci(label, r.ratio, r.ratio_ci, 1.0)
                                   .with_note("99% Wilson interval scaled by lambda(B) / lambda(A)"));
      report.metrics.push_back(
          Metric::at_most(std::string(label) + "_containment_violations", static_cast<double>(r.containment_violations), 0.0));
    }
  }
  report.tables.push_back(std::move(table));
  report.plots.push_back({"volume_ratios", "Estimated volume ratio against time", PlotKind::lines, "volume_ratios", "t",
                          {"ratio", "ci_low", "ci_high"}, "t", "ratio"});
  return report;
}

}  // namespace typlab::classical
