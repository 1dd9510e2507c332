#include "typlab/bohmian/propagator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "typlab/errors.hpp"

namespace typlab::bohmian {

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const Units& units, std::span<const double> potential,
                                         double dt, PropagatorOptions options)
    : grid_(grid), dt_(dt), options_(options), fft_(grid.points()) {
  units.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("propagator dt must be positive");
  if (!potential.empty() && potential.size() != grid.size()) throw ConfigError("potential size does not match the grid");
  const std::size_t size = grid.size();
  const std::size_t n = grid.points();
  half_kick_.assign(size, Complex(1.0, 0.0));
  full_kick_.assign(size, Complex(1.0, 0.0));
  for (std::size_t i = 0; i < potential.size(); ++i) {
    if (potential[i] != 0.0) has_potential_ = true;
    half_kick_[i] = std::polar(1.0, -potential[i] * dt / (2.0 * units.hbar));
    full_kick_[i] = std::polar(1.0, -potential[i] * dt / units.hbar);
  }
  const auto k = grid.wavenumbers();
  drift_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    double omega = units.hbar * k[i % n] * k[i % n] / (2.0 * units.mass[0]);
    if (grid.dimension() == 2) omega += units.hbar * k[i / n] * k[i / n] / (2.0 * units.mass[1]);
    drift_[i] = std::polar(1.0, -omega * dt);
  }
}

void SplitStepPropagator::transform(ComplexField& psi, bool inverse) const {
  if (grid_.dimension() == 1) {
    inverse ? fft_.inverse(psi.values()) : fft_.forward(psi.values());
  } else {
    inverse ? fft_.inverse_2d(psi.values()) : fft_.forward_2d(psi.values());
  }
}

void SplitStepPropagator::kinetic(ComplexField& psi) const {
  transform(psi, false);
  auto v = psi.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= drift_[i];
  transform(psi, true);
}

void SplitStepPropagator::step(ComplexField& psi) const { steps(psi, 1); }

void SplitStepPropagator::steps(ComplexField& psi, std::size_t count) const {
  if (!(psi.grid() == grid_)) throw ConfigError("field grid does not match the propagator");
  if (count == 0) return;
  auto v = psi.values();
  if (!has_potential_) {
    for (std::size_t s = 0; s < count; ++s) kinetic(psi);
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= half_kick_[i];
  for (std::size_t s = 0; s < count; ++s) {
    kinetic(psi);
    const auto& kick = s + 1 == count ? half_kick_ : full_kick_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kick[i];
  }
}

double SplitStepPropagator::spectral_tail(const ComplexField& psi) const {
  ComplexField spec = psi;
  transform(spec, false);
  const auto k = grid_.wavenumbers();
  const std::size_t n = grid_.points();
  const double cutoff = options_.tail_band * std::numbers::pi / grid_.spacing();
  double tail = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double a2 = std::norm(spec[i]);
    total += a2;
    bool outer = std::abs(k[i % n]) > cutoff;
    if (grid_.dimension() == 2) outer = outer || std::abs(k[i / n]) > cutoff;
    if (outer) tail += a2;
  }
  return total > 0.0 ? tail / total : 0.0;
}

void SplitStepPropagator::check_resolution(const ComplexField& psi) const {
  const double tail = spectral_tail(psi);
  if (tail > options_.tail_threshold) {
    std::ostringstream msg;
    msg << "wave function not resolved: spectral tail mass " << tail << " exceeds " << options_.tail_threshold;
    throw ResolutionError(msg.str());
  }
}

WaveFunction schrodinger_step(const WaveFunction& wf, double dt) {
  const SplitStepPropagator prop(wf, dt);
  prop.check_resolution(wf.field());
  WaveFunction out = wf;
  prop.step(out.field());
  return out;
}

}  // namespace typlab::bohmian
