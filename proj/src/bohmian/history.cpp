#include "typlab/bohmian/history.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "typlab/errors.hpp"

namespace typlab::bohmian {

namespace {

constexpr char kMagic[8] = {'T', 'Y', 'P', 'L', 'P', 'S', 'I', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ConfigError("truncated wave-function history file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

PsiHistory::PsiHistory(Units units, double dt, std::size_t frame_stride, std::vector<ComplexField> frames,
                       double node_threshold)
    : units_(units), dt_(dt), stride_(frame_stride), node_threshold_(node_threshold), frames_(std::move(frames)) {
  units_.validate();
  if (frames_.empty()) throw ConfigError("history needs at least one frame");
  if (!(dt_ > 0.0) || stride_ == 0) throw ConfigError("history needs dt > 0 and a positive frame stride");
  velocities_.reserve(frames_.size());
  for (const auto& f : frames_) {
    if (!(f.grid() == frames_.front().grid())) throw ConfigError("history frames must share one grid");
    velocities_.push_back(bohmian_velocity(f, units_, node_threshold_));
  }
}

PsiHistory PsiHistory::propagate(const WaveFunction& wf, double dt, std::size_t frame_stride, double duration,
                                 PropagatorOptions options, double node_threshold) {
  if (!(duration >= 0.0)) throw ConfigError("history duration must be non-negative");
  if (frame_stride == 0) throw ConfigError("frame stride must be positive");
  const SplitStepPropagator prop(wf, dt, options);
  const double interval = dt * static_cast<double>(frame_stride);
  const auto intervals = static_cast<std::size_t>(std::ceil(duration / interval - 1e-9));
  std::vector<ComplexField> frames;
  frames.reserve(intervals + 1);
  ComplexField psi = wf.field();
  prop.check_resolution(psi);
  frames.push_back(psi);
  for (std::size_t k = 0; k < intervals; ++k) {
    prop.steps(psi, frame_stride);
    prop.check_resolution(psi);
    frames.push_back(psi);
  }
  return PsiHistory(wf.units(), dt, frame_stride, std::move(frames), node_threshold);
}

void PsiHistory::bracket(double t, std::size_t& k0, std::size_t& k1, double& w) const {
  const double s = t / frame_interval();
  const std::size_t last = frames_.size() - 1;
  if (!(s > 0.0)) {
    k0 = k1 = 0;
    w = 0.0;
    return;
  }
  if (s >= static_cast<double>(last)) {
    k0 = k1 = last;
    w = 0.0;
    return;
  }
  const double f = std::floor(s);
  k0 = static_cast<std::size_t>(f);
  k1 = k0 + 1;
  w = s - f;
}

void PsiHistory::velocity_at(std::span<const double> q, double t, std::span<double> v, bool& all_valid) const {
  std::size_t k0, k1;
  double w;
  bracket(t, k0, k1, w);
  const int dim = grid().dimension();
  for (int a = 0; a < dim; ++a) {
    double value = velocities_[k0].interpolate(a, q, all_valid);
    if (w > 0.0) value = (1.0 - w) * value + w * velocities_[k1].interpolate(a, q, all_valid);
    v[static_cast<std::size_t>(a)] = value;
  }
}

void PsiHistory::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  const Grid& g = grid();
  out.write(kMagic, 8);
  put_u64(out, static_cast<std::uint64_t>(g.dimension()));
  put_u64(out, g.points());
  put_f64(out, g.length());
  put_f64(out, dt_);
  put_u64(out, stride_);
  put_u64(out, frames_.size());
  put_f64(out, units_.hbar);
  put_f64(out, units_.mass[0]);
  put_f64(out, units_.mass[1]);
  put_f64(out, node_threshold_);
  for (const auto& f : frames_) {
    for (const Complex& c : f.values()) {
      put_f64(out, c.real());
      put_f64(out, c.imag());
    }
  }
  if (!out) throw ConfigError("failed writing " + path.string());
}

PsiHistory PsiHistory::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not a wave-function history file");
  const auto dim = static_cast<int>(get_u64(in));
  const auto points = get_u64(in);
  const double length = get_f64(in);
  const double dt = get_f64(in);
  const auto stride = get_u64(in);
  const auto count = get_u64(in);
  Units units;
  units.hbar = get_f64(in);
  units.mass[0] = get_f64(in);
  units.mass[1] = get_f64(in);
  const double threshold = get_f64(in);
  const Grid g(dim, points, length);
  if (count == 0 || count > (std::uint64_t{1} << 32)) throw ConfigError("implausible frame count in history file");
  std::vector<ComplexField> frames;
  frames.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::vector<Complex> values(g.size());
    for (auto& c : values) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      c = Complex(re, im);
    }
    frames.emplace_back(g, std::move(values));
  }
  return PsiHistory(units, dt, stride, std::move(frames), threshold);
}

}  // namespace typlab::bohmian
