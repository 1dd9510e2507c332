#include "typlab/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "typlab/errors.hpp"
#include "typlab/numerics/parallel.hpp"

namespace typlab {

namespace {
constexpr std::size_t kChunk = 4096;
}

std::vector<double> Samples::axis(int a) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, a);
  return out;
}

DensitySampler::DensitySampler(Grid grid, std::span<const double> density) : grid_(grid) {
  if (density.size() != grid_.size()) throw DomainError("density size does not match grid");
  cumulative_.resize(density.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (density[i] < 0.0 || !std::isfinite(density[i])) throw DomainError("density must be finite and non-negative");
    acc += density[i];
    cumulative_[i] = acc;
  }
  if (!(acc > 0.0)) throw DomainError("density has no positive cell");
}

void DensitySampler::draw(RngStream& rng, std::vector<double>& out) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  const auto cell = static_cast<std::size_t>(it - cumulative_.begin());
  const std::size_t n = grid_.points();
  const double dx = grid_.spacing();
  const std::size_t ix = cell % n;
  out.push_back(grid_.coordinate(ix) + (rng.uniform() - 0.5) * dx);
  if (grid_.dimension() == 2) {
    const std::size_t iy = cell / n;
    out.push_back(grid_.coordinate(iy) + (rng.uniform() - 0.5) * dx);
  }
}

Samples DensitySampler::draw(std::size_t n, RngStream& rng) const {
  Samples s{grid_.dimension(), {}};
  s.coords.reserve(n * static_cast<std::size_t>(grid_.dimension()));
  for (std::size_t i = 0; i < n; ++i) draw(rng, s.coords);
  return s;
}

Samples DensitySampler::draw_parallel(std::size_t n, std::uint64_t seed, std::string_view purpose, int workers) const {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> parts(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    RngStream rng(seed, derive_stream(purpose, c));
    const std::size_t count = std::min(kChunk, n - c * kChunk);
    parts[c].reserve(count * static_cast<std::size_t>(grid_.dimension()));
    for (std::size_t i = 0; i < count; ++i) draw(rng, parts[c]);
  });
  Samples s{grid_.dimension(), {}};
  s.coords.reserve(n * static_cast<std::size_t>(grid_.dimension()));
  for (const auto& p : parts) s.coords.insert(s.coords.end(), p.begin(), p.end());
  return s;
}

Samples sample_from_density(const Grid& grid, std::span<const double> density, std::size_t n, RngStream& rng) {
  return DensitySampler(grid, density).draw(n, rng);
}

}  // namespace typlab
