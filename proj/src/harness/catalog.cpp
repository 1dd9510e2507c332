#include "typlab/harness/catalog.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <type_traits>

#include "typlab/bohmian/equivariance.hpp"
#include "typlab/classical/coin.hpp"
#include "typlab/classical/liouville.hpp"
#include "typlab/classical/maxwell.hpp"
#include "typlab/classical/stone.hpp"
#include "typlab/errors.hpp"
#include "typlab/harness/report_io.hpp"
#include "typlab/harness/runner.hpp"
#include "typlab/subsystems/born.hpp"
#include "typlab/subsystems/effective.hpp"
#include "typlab/subsystems/uncertainty.hpp"

namespace typlab::harness {

using nlohmann::json;

namespace {

// Field lists. Each describe() names every configurable member once; the
// same list drives encoding, decoding and unknown-key rejection.

template <class V>
void describe(V& v, classical::VelocityWindow& w) {
  v("axis", w.axis);
  v("lo", w.lo);
  v("hi", w.hi);
}
template <class V>
void describe(V& v, classical::ThermalSpec& t) {
  v("kT", t.kT);
  v("mass", t.mass);
}
template <class V>
void describe(V& v, classical::MaxwellLlnParams& p) {
  v("ladder", p.ladder);
  v("window", p.window);
  v("thermal", p.thermal);
  v("epsilon", p.epsilon);
  v("seeds", p.seeds);
  v("box_length", p.box_length);
  v("dim", p.dim);
  v("tau", p.tau);
  v("final_measure_tolerance", p.final_measure_tolerance);
  v("quadrature_tolerance", p.quadrature_tolerance);
}
template <class V>
void describe(V& v, classical::PhaseBox& b) {
  v("lo", b.lo);
  v("hi", b.hi);
}
template <class V>
void describe(V& v, classical::LiouvilleParams& p) {
  v("mass", p.mass);
  v("stiffness", p.stiffness);
  v("region", p.region);
  v("times", p.times);
  v("samples", p.samples);
  v("dt", p.dt);
  v("free_particle_control", p.free_particle_control);
}
template <class V>
void describe(V& v, classical::CoinMachineSpec& s) {
  v("gravity", s.gravity);
  v("u_min", s.u_min);
  v("u_max", s.u_max);
  v("omega_min", s.omega_min);
  v("omega_max", s.omega_max);
  v("theta0", s.theta0);
}
template <class V>
void describe(V& v, classical::CoinLlnParams& p) {
  v("spec", p.spec);
  v("ladder", p.ladder);
  v("epsilon", p.epsilon);
  v("seeds", p.seeds);
  v("tau", p.tau);
  v("frequency_tolerance", p.frequency_tolerance);
  v("rms_scaling_bound", p.rms_scaling_bound);
  v("narrow_control", p.narrow_control);
  v("narrow_min_frequency", p.narrow_min_frequency);
}
template <class V>
void describe(V& v, classical::StoneThrowSpec& s) {
  v("x0", s.x0);
  v("v0", s.v0);
  v("mass", s.mass);
  v("gravity", s.gravity);
  v("horizon", s.horizon);
  v("dt", s.dt);
  v("delta_pert", s.delta_pert);
  v("epsilon", s.epsilon);
}
template <class V>
void describe(V& v, classical::ThirdBody& b) {
  v("gm", b.gm);
  v("position", b.position);
}
template <class V>
void describe(V& v, classical::StoneParams& p) {
  v("spec", p.spec);
  v("perturbations", p.perturbations);
  v("analytic_tolerance", p.analytic_tolerance);
  v("third_body", p.third_body);
  v("body", p.body);
  v("halving_levels", p.halving_levels);
  v("halving_samples", p.halving_samples);
  v("tau", p.tau);
}
template <class V>
void describe(V& v, bohmian::Units& u) {
  v("hbar", u.hbar);
  v("mass", u.mass);
}
template <class V>
void describe(V& v, bohmian::EquivarianceParams& p) {
  v("points", p.points);
  v("length", p.length);
  v("omega", p.omega);
  v("units", p.units);
  v("state", p.state);
  v("dt", p.dt);
  v("frame_stride", p.frame_stride);
  v("trajectory_dt", p.trajectory_dt);
  v("checkpoints", p.checkpoints);
  v("duration", p.duration);
  v("samples", p.samples);
  v("bins", p.bins);
  v("bin_lo", p.bin_lo);
  v("bin_hi", p.bin_hi);
  v("l1_tolerance", p.l1_tolerance);
  v("clamp_rate_tolerance", p.clamp_rate_tolerance);
  v("noise_band_factor", p.noise_band_factor);
  v("noise_quantile", p.noise_quantile);
  v("noise_replicas", p.noise_replicas);
  v("bundle_size", p.bundle_size);
}
template <class V>
void describe(V& v, subsystems::EffectiveOptions& o) {
  v("radius", o.radius);
  v("tol_eff", o.tol_eff);
  v("tol_res", o.tol_res);
  v("degenerate_threshold", o.degenerate_threshold);
}
template <class V>
void describe(V& v, subsystems::Branch& b) {
  v("x", b.x);
  v("y", b.y);
  v("sx", b.sx);
  v("sy", b.sy);
}
template <class V>
void describe(V& v, subsystems::EffectiveDetectParams& p) {
  v("points", p.points);
  v("length", p.length);
  v("options", p.options);
  v("product_sigma", p.product_sigma);
  v("branch1", p.branch1);
  v("branch2", p.branch2);
  v("big_s", p.big_s);
  v("s_ladder", p.s_ladder);
  v("y", p.y);
  v("score_threshold", p.score_threshold);
}
template <class V>
void describe(V& v, subsystems::ConditionalBornParams& p) {
  v("points", p.points);
  v("length", p.length);
  v("s", p.s);
  v("big_s", p.big_s);
  v("samples", p.samples);
  v("y_bins", p.y_bins);
  v("y_lo", p.y_lo);
  v("y_hi", p.y_hi);
  v("x_bins", p.x_bins);
  v("x_lo", p.x_lo);
  v("x_hi", p.x_hi);
  v("min_count", p.min_count);
  v("l1_tolerance", p.l1_tolerance);
  v("product_control", p.product_control);
  v("product_sigma", p.product_sigma);
  v("noise_quantile", p.noise_quantile);
  v("noise_replicas", p.noise_replicas);
}
template <class V>
void describe(V& v, subsystems::BornLlnParams& p) {
  v("points", p.points);
  v("length", p.length);
  v("sigma", p.sigma);
  v("center", p.center);
  v("region_lo", p.region_lo);
  v("region_hi", p.region_hi);
  v("ladder", p.ladder);
  v("epsilon", p.epsilon);
  v("seeds", p.seeds);
  v("tau", p.tau);
}
template <class V>
void describe(V& v, subsystems::AbsoluteUncertaintyParams& p) {
  v("sigma_ladder", p.sigma_ladder);
  v("samples", p.samples);
  v("units", p.units);
  v("points", p.points);
  v("length_over_sigma", p.length_over_sigma);
  v("t_final_over_tau", p.t_final_over_tau);
  v("frame_interval_over_tau", p.frame_interval_over_tau);
  v("trajectory_dt_over_tau", p.trajectory_dt_over_tau);
  v("product_tolerance", p.product_tolerance);
  v("ratio_target", p.ratio_target);
  v("ratio_tolerance", p.ratio_tolerance);
  v("spread_tolerance", p.spread_tolerance);
  v("min_spread_factor", p.min_spread_factor);
}

struct Probe {
  template <class T>
  void operator()(const char*, T&) {}
};
template <class T>
concept Described = requires(Probe& v, T& t) { describe(v, t); };

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};
template <class T>
struct is_array : std::false_type {};
template <class T, std::size_t N>
struct is_array<std::array<T, N>> : std::true_type {};

template <class T>
json encode(const T& value);

struct Encoder {
  json& out;
  template <class T>
  void operator()(const char* key, T& value) {
    out[key] = encode(value);
  }
};

template <class T>
json encode(const T& value) {
  if constexpr (Described<T>) {
    json out = json::object();
    T copy = value;
    Encoder e{out};
    describe(e, copy);
    return out;
  } else if constexpr (is_vector<T>::value || is_array<T>::value) {
    json out = json::array();
    for (const auto& x : value) out.push_back(encode(x));
    return out;
  } else if constexpr (std::is_same_v<T, double>) {
    return number_to_json(value);
  } else {
    return json(value);
  }
}

[[noreturn]] void type_error(const std::string& path, const char* expected, const json& got) {
  throw ConfigError("config key '" + path + "': expected " + expected + ", got " + got.dump());
}

template <class T>
void decode(const json& j, T& value, const std::string& path);

struct Decoder {
  const json& in;
  std::string path;
  std::set<std::string> known;
  template <class T>
  void operator()(const char* key, T& value) {
    known.insert(key);
    if (in.contains(key)) decode(in.at(key), value, path.empty() ? key : path + "." + key);
  }
};

template <class T>
void decode_integer(const json& j, T& value, const std::string& path) {
  double d = 0.0;
  if (j.is_number_integer()) {
    if constexpr (std::is_unsigned_v<T>) {
      if (j.is_number_unsigned()) {
        value = static_cast<T>(j.get<std::uint64_t>());
        return;
      }
      if (j.get<std::int64_t>() < 0) type_error(path, "a non-negative integer", j);
    }
    value = static_cast<T>(j.get<std::int64_t>());
    return;
  }
  // 1e5 parses as a float; accept it when it is integral
  if (j.is_number_float()) {
    d = j.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) {
      if (std::is_unsigned_v<T> && d < 0) type_error(path, "a non-negative integer", j);
      value = static_cast<T>(d);
      return;
    }
  }
  type_error(path, std::is_unsigned_v<T> ? "a non-negative integer" : "an integer", j);
}

template <class T>
void decode(const json& j, T& value, const std::string& path) {
  if constexpr (Described<T>) {
    if (!j.is_object()) type_error(path, "an object", j);
    Decoder d{j, path, {}};
    describe(d, value);
    for (const auto& [key, _] : j.items()) {
      if (!d.known.count(key)) throw ConfigError("unknown config key '" + (path.empty() ? key : path + "." + key) + "'");
    }
  } else if constexpr (is_vector<T>::value) {
    if (!j.is_array()) type_error(path, "an array", j);
    value.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      typename T::value_type x{};
      decode(j[i], x, path + "[" + std::to_string(i) + "]");
      value.push_back(x);
    }
  } else if constexpr (is_array<T>::value) {
    if (!j.is_array() || j.size() != value.size()) {
      type_error(path, ("an array of " + std::to_string(value.size())).c_str(), j);
    }
    for (std::size_t i = 0; i < value.size(); ++i) decode(j[i], value[i], path + "[" + std::to_string(i) + "]");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) type_error(path, "a boolean", j);
    value = j.get<bool>();
  } else if constexpr (std::is_same_v<T, double>) {
    try {
      value = number_from_json(j);
    } catch (const ConfigError&) {
      type_error(path, "a number (or \"inf\", \"-inf\")", j);
    }
  } else if constexpr (std::is_integral_v<T>) {
    decode_integer(j, value, path);
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) type_error(path, "a string", j);
    value = j.get<std::string>();
  } else {
    static_assert(sizeof(T) == 0, "no config codec for this type");
  }
}

template <class P>
P default_params() {
  return P{};
}
// Jitter and threshold scale with |v0|, so the stone defaults come from a factory.
template <>
classical::StoneParams default_params<classical::StoneParams>() {
  return classical::default_stone_params();
}

template <class P>
P params_from(const json& j) {
  P p = default_params<P>();
  decode(j, p, "");
  return p;
}

template <class P>
ExperimentEntry entry(std::string name, std::string summary, std::vector<std::string> anchors, std::string units,
                      ExperimentReport (*fn)(const P&, const RunContext&)) {
  ExperimentEntry e;
  e.name = std::move(name);
  e.summary = std::move(summary);
  e.anchors = std::move(anchors);
  e.units = std::move(units);
  e.defaults = [] { return encode(default_params<P>()); };
  e.resolve = [](const json& sparse) {
    if (!sparse.is_object()) throw ConfigError("config key 'params': expected an object, got " + sparse.dump());
    return encode(params_from<P>(sparse));
  };
  e.run = [fn](const json& resolved, const RunContext& ctx) { return fn(params_from<P>(resolved), ctx); };
  return e;
}

std::vector<ExperimentEntry> build_catalog() {
  std::vector<ExperimentEntry> c;
  c.push_back(entry<classical::MaxwellLlnParams>(
      "maxwell-lln", "Velocity LLN for a microcanonical ideal gas along an N ladder",
      {"law of large numbers for the empirical velocity distribution of typical microstates",
       "Maxwell density (m / 2 pi kT)^{1/2} exp(-m v^2 / 2 kT) as the typical one-component distribution"},
      "one (N, seed) pair per unit", &classical::maxwell_lln_experiment));
  c.push_back(entry<classical::LiouvilleParams>(
      "liouville-check", "Phase-space volume ratio under the harmonic and free flows",
      {"stationarity of Lebesgue measure: lambda(Phi_{t,0} A) = lambda(A)"}, "4096 reference-box samples per unit",
      &classical::liouville_experiment));
  c.push_back(entry<classical::CoinLlnParams>(
      "coin-lln", "Heads frequency of a deterministic tossing machine",
      {"law of large numbers for coin-toss frequencies, |frequency - 1/2| < eps for typical initial data",
       "special initial conditions: a narrow spin range gives atypical frequencies"},
      "one (N, seed) pair per unit", &classical::coin_lln_experiment));
  c.push_back(entry<classical::StoneParams>(
      "stone-robustness", "Sensitivity of a thrown stone to velocity jitter",
      {"robust macroscopic prediction: sup_t |x~(t) - x(t)| = delta T under uniform gravity"},
      "4096 jittered throws per unit", &classical::stone_robustness_experiment));
  c.push_back(entry<bohmian::EquivarianceParams>(
      "equivariance", "Bohmian ensemble transported against |Psi_t|^2",
      {"equivariance: |Psi_0|^2-distributed configurations stay |Psi_t|^2-distributed",
       "guiding equation dQ/dt = (hbar / m) Im(grad Psi / Psi)"},
      "256 trajectories per unit", &bohmian::equivariance_experiment));
  c.push_back(entry<subsystems::ConditionalBornParams>(
      "conditional-born", "Subsystem configurations conditioned on the environment",
      {"conditional Born measure: X given Y is distributed as |Psi(x, Y)|^2 normalized",
       "conditional wave function psi^Y(x) = Psi(x, Y)"},
      "4096 joint samples per unit, one y-bin per noise unit", &subsystems::conditional_born_experiment));
  c.push_back(entry<subsystems::EffectiveDetectParams>(
      "effective-detect", "Detection of effective wave functions",
      {"effective wave function: Psi = phi chi + Psi_perp with disjoint environment supports"},
      "serial; deterministic, no sampling", &subsystems::effective_detect_experiment));
  c.push_back(entry<subsystems::BornLlnParams>(
      "born-lln", "Born-rule frequencies over M identically prepared subsystems",
      {"law of large numbers for |phi|^2 frequencies under the universal |Psi|^2 measure",
       "quantum equilibrium: subsystem configurations are |phi|^2-distributed"},
      "one (M, seed) pair per unit", &subsystems::born_lln_experiment));
  c.push_back(entry<subsystems::AbsoluteUncertaintyParams>(
      "absolute-uncertainty", "Position knowledge against velocity spread for free Gaussian packets",
      {"absolute uncertainty: Delta x0 m Delta v = hbar / 2 for a minimal packet",
       "narrower preparation induces a larger asymptotic velocity spread"},
      "256 trajectories per unit", &subsystems::absolute_uncertainty_experiment));
  return c;
}

}  // namespace

const std::vector<ExperimentEntry>& catalog() {
  static const std::vector<ExperimentEntry> c = build_catalog();
  return c;
}

const ExperimentEntry& find_experiment(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : catalog()) known += (known.empty() ? "" : ", ") + e.name;
  throw ConfigError("unknown experiment '" + name + "' (known: " + known + ")");
}

json catalog_json() {
  json list = json::array();
  for (const auto& e : catalog()) {
    list.push_back(json{{"name", e.name},
                        {"summary", e.summary},
                        {"anchors", e.anchors},
                        {"units", e.units},
                        {"defaults", e.defaults()}});
  }
  return json{{"version", artifact_version()}, {"experiments", std::move(list)}};
}

}  // namespace typlab::harness
