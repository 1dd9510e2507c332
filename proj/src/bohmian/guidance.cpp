#include "typlab/bohmian/guidance.hpp"

#include <algorithm>
#include <cmath>

#include "typlab/errors.hpp"
#include "typlab/numerics/fft.hpp"

namespace typlab::bohmian {

ComplexField spectral_derivative(const ComplexField& psi, int axis) {
  const Grid& g = psi.grid();
  if (axis < 0 || axis >= g.dimension()) throw ConfigError("derivative axis out of range");
  ComplexField spec = dft_forward(psi);
  const auto k = g.wavenumbers();
  const std::size_t n = g.points();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::size_t mode = axis == 0 ? i % n : i / n;
    // the Nyquist mode has no signed wavenumber; its derivative is dropped
    const double kk = mode == n / 2 ? 0.0 : k[mode];
    spec[i] *= Complex(0.0, kk);
  }
  return dft_inverse(spec);
}

std::vector<double> probability_current(const ComplexField& psi, const Units& units, int axis) {
  const ComplexField d = spectral_derivative(psi, axis);
  std::vector<double> j(psi.size());
  const double scale = units.hbar / units.mass[static_cast<std::size_t>(axis)];
  for (std::size_t i = 0; i < j.size(); ++i) j[i] = scale * std::imag(std::conj(psi[i]) * d[i]);
  return j;
}

VelocityField bohmian_velocity(const ComplexField& psi, const Units& units, double node_threshold) {
  units.validate();
  const Grid& g = psi.grid();
  VelocityField field;
  field.grid = g;
  const auto rho = psi.density();
  const double peak = *std::max_element(rho.begin(), rho.end());
  if (!(peak > 0.0)) throw DomainError("wave function vanishes identically");
  const double floor = node_threshold * peak;
  field.valid.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) field.valid[i] = rho[i] >= floor ? 1 : 0;
  for (int a = 0; a < g.dimension(); ++a) {
    const auto j = probability_current(psi, units, a);
    auto& v = field.component[static_cast<std::size_t>(a)];
    v.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
      v[i] = rho[i] > 0.0 ? j[i] / rho[i] : 0.0;
      if (!std::isfinite(v[i])) v[i] = 0.0;
    }
  }
  return field;
}

double VelocityField::interpolate(int axis, std::span<const double> q, bool& all_valid) const {
  const auto& v = component[static_cast<std::size_t>(axis)];
  const std::size_t n = grid.points();
  const double dx = grid.spacing();
  auto locate = [&](double x, std::size_t& i0, std::size_t& i1, double& w) {
    const double s = (x - grid.origin()) / dx;
    const double f = std::floor(s);
    w = s - f;
    i0 = grid.wrap_index(static_cast<long long>(f));
    i1 = grid.wrap_index(static_cast<long long>(f) + 1);
  };
  std::size_t x0, x1;
  double wx;
  locate(q[0], x0, x1, wx);
  if (grid.dimension() == 1) {
    if (!valid[x0] || !valid[x1]) all_valid = false;
    return (1.0 - wx) * v[x0] + wx * v[x1];
  }
  std::size_t y0, y1;
  double wy;
  locate(q[1], y0, y1, wy);
  const std::size_t a = y0 * n + x0, b = y0 * n + x1, c = y1 * n + x0, d = y1 * n + x1;
  if (!valid[a] || !valid[b] || !valid[c] || !valid[d]) all_valid = false;
  return (1.0 - wy) * ((1.0 - wx) * v[a] + wx * v[b]) + wy * ((1.0 - wx) * v[c] + wx * v[d]);
}

}  // namespace typlab::bohmian
