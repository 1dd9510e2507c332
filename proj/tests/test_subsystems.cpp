#include <cmath>
#include <limits>

#include "doctest.h"
#include "typlab/bohmian/guidance.hpp"
#include "typlab/errors.hpp"
#include "typlab/numerics/sampling.hpp"
#include "typlab/numerics/stats.hpp"
#include "typlab/subsystems/born.hpp"
#include "typlab/subsystems/conditional.hpp"
#include "typlab/subsystems/effective.hpp"
#include "typlab/subsystems/states.hpp"
#include "typlab/subsystems/uncertainty.hpp"

using namespace typlab;
using namespace typlab::subsystems;

namespace {

double column(const DataTable& t, std::size_t row, const std::string& name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == name) return t.rows.at(row).at(c);
  }
  FAIL("missing column " << name);
  return 0.0;
}

const DataTable& table(const ExperimentReport& r, const std::string& name) {
  for (const auto& t : r.tables) {
    if (t.name == name) return t;
  }
  FAIL("missing table " << name);
  return r.tables.front();
}

Samples draw(const ComplexField& psi, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const auto d = psi.density();
  return sample_from_density(psi.grid(), d, n, rng);
}

// Targets are conditional on X landing inside the x-binning, like the histograms.
BinnedMasses in_range(const ComplexField& phi, const BinEdges& edges) {
  BinnedMasses m = bin_density(phi.grid(), phi.density(), edges);
  double total = 0.0;
  for (const double v : m.masses) total += v;
  for (auto& v : m.masses) v /= total;
  return m;
}

const Branch kB1{-2.0, -4.0, 0.7, 0.5};
const Branch kB2{2.0, 4.0, 1.1, 0.5};

}  // namespace

TEST_SUITE("conditional wave function") {
  TEST_CASE("product state slices are Y-independent") {
    const Grid g(2, 128, 16.0);
    const ComplexField psi = product_state(g, {0.5, -0.3}, {1.0, 0.8});
    const ComplexField phi = gaussian_factor(g, 0.5, 1.0);
    const auto ref = conditional_wavefunction(psi, 0.0);
    for (const double y : {-2.0, -0.77, 0.1, 1.234, 2.5}) {
      const auto c = conditional_wavefunction(psi, y);
      CHECK(c.y == y);
      CHECK(std::abs(normalized_overlap(c.psi, ref.psi) - 1.0) < 1e-10);
      CHECK(std::abs(normalized_overlap(c.psi, phi) - 1.0) < 1e-10);
      CHECK(c.psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("two-branch state conditions onto the branch holding Y") {
    const Grid g(2, 128, 16.0);
    const ComplexField psi = two_branch_state(g, kB1, kB2);
    const auto c1 = conditional_wavefunction(psi, -4.0);
    const auto c2 = conditional_wavefunction(psi, 4.1);
    CHECK(normalized_overlap(c1.psi, gaussian_factor(g, kB1.x, kB1.sx)) > 1.0 - 1e-10);
    CHECK(normalized_overlap(c2.psi, gaussian_factor(g, kB2.x, kB2.sx)) > 1.0 - 1e-10);
  }

  TEST_CASE("stored norm reproduces the slice") {
    const Grid g(2, 64, 12.0);
    const ComplexField psi = correlated_gaussian(g, 0.5, 2.0);
    const std::size_t row = 37;
    const double y = g.coordinate(row);
    const auto c = conditional_wavefunction(psi, y, 0.25);
    CHECK(c.time == 0.25);
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(std::abs(c.psi[i] * std::sqrt(c.norm) - psi.at(i, row)) < 1e-14);
    }
  }

  TEST_CASE("off-grid Y converges at second order under refinement") {
    // y = 0.25 sits a third of a cell past a row at 64 points and two thirds at
    // 128, so linear interpolation carries the same w(1 - w) at both levels.
    const double y = 0.25, s = 0.5, big_s = 2.0;
    auto error = [&](std::size_t points) {
      const Grid g(2, points, 12.0);
      const ComplexField psi = correlated_gaussian(g, s, big_s);
      const ComplexField slice = slice_at(psi, y);
      const double amp = std::abs(psi.at(points / 2, points / 2));  // x = y = 0 holds the peak
      double worst = 0.0;
      for (std::size_t i = 0; i < points; ++i) {
        const double x = g.coordinate(i);
        const double exact = amp * std::exp(-(x - y) * (x - y) / (4 * s * s) - (x + y) * (x + y) / (4 * big_s * big_s));
        worst = std::max(worst, std::abs(slice[i] - exact));
      }
      return worst / amp;
    };
    const double coarse = error(64), fine = error(128);
    CHECK(coarse > 1e-4);
    const double order = std::log2(coarse / fine);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }

  TEST_CASE("marginal consistency: sum over rows of norm * |psi^Y|^2 is the x-marginal") {
    const Grid g(2, 64, 12.0);
    const ComplexField psi = two_branch_state(g, {-1.0, -1.0, 0.8, 0.9}, {1.5, 1.0, 0.6, 1.0});
    std::vector<double> marginal(64, 0.0), rebuilt(64, 0.0);
    for (std::size_t r = 0; r < 64; ++r) {
      for (std::size_t i = 0; i < 64; ++i) marginal[i] += std::norm(psi.at(i, r)) * g.spacing();
      const auto c = conditional_wavefunction(psi, g.coordinate(r), 0.0, 0.0);
      for (std::size_t i = 0; i < 64; ++i) rebuilt[i] += c.norm * std::norm(c.psi[i]) * g.spacing();
    }
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(marginal[i] - rebuilt[i]) < 1e-10);
  }

  TEST_CASE("degenerate slices raise") {
    const Grid g(2, 64, 12.0);
    const ComplexField psi = product_state(g, {0.0, 0.0}, {1.0, 0.3});
    CHECK_THROWS_AS(conditional_wavefunction(psi, 5.5), DegenerateSliceError);
    CHECK_NOTHROW(conditional_wavefunction(psi, 0.2));
    CHECK_THROWS_AS(conditional_target(psi, 7.0, 9.0, BinEdges::uniform(-4, 4, 8)), DegenerateSliceError);
    CHECK_THROWS_AS(conditional_wavefunction(ComplexField(Grid(1, 64, 12.0)), 0.0), ConfigError);
  }
}

TEST_SUITE("effective wave function") {
  TEST_CASE("product state is detected with score 1") {
    const Grid g(2, 128, 16.0);
    const ComplexField psi = product_state(g, {0.0, 0.0}, {1.0, 0.8});
    const auto d = detect_effective_wavefunction(psi, 0.0);
    REQUIRE(d.detected());
    CHECK(d.score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.residual_mass < 1e-12);
    CHECK(d.neighbors_used == 10);  // Y itself is not a neighbor
    REQUIRE(d.phi.has_value());
    CHECK(normalized_overlap(*d.phi, gaussian_factor(g, 0.0, 1.0)) > 1.0 - 1e-12);
    CHECK(d.chi.size() == 128);
  }

  TEST_CASE("two-branch state deep in branch 1 yields phi_1") {
    const Grid g(2, 128, 16.0);
    const auto d = detect_effective_wavefunction(two_branch_state(g, kB1, kB2), -4.0);
    REQUIRE(d.detected());
    CHECK(d.score > 0.999);
    CHECK(normalized_overlap(*d.phi, gaussian_factor(g, kB1.x, kB1.sx)) > 1.0 - 1e-10);
  }

  TEST_CASE("correlated Gaussian scores fall as s / S shrinks") {
    const Grid g(2, 256, 16.0);
    double previous = 2.0;
    for (const double s : {1.0, 0.5, 0.25}) {
      const auto d = detect_effective_wavefunction(correlated_gaussian(g, s, 2.0), 0.0);
      CHECK(d.score < previous);
      previous = d.score;
    }
    CHECK_FALSE(detect_effective_wavefunction(correlated_gaussian(g, 0.25, 2.0), 0.0).detected());
  }

  TEST_CASE("detection is monotone in tol_eff") {
    const Grid g(2, 128, 16.0);
    const ComplexField psi = correlated_gaussian(g, 1.5, 2.0);
    bool seen = false;
    for (const double tol : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5}) {
      EffectiveOptions opt;
      opt.tol_eff = tol;
      opt.tol_res = 1.0;  // isolate the overlap criterion
      const bool now = detect_effective_wavefunction(psi, 0.3, opt).detected();
      if (seen) CHECK(now);
      seen = seen || now;
    }
    CHECK(seen);
  }

  TEST_CASE("all-degenerate neighborhoods are undecidable") {
    const Grid g(2, 128, 16.0);
    // Y sits on the one live row; every neighbor carries essentially no weight.
    const ComplexField psi = product_state(g, {0.0, 0.0}, {1.0, 0.02});
    EffectiveOptions opt;
    opt.degenerate_threshold = 1e-3;
    const auto d = detect_effective_wavefunction(psi, 0.0, opt);
    CHECK(d.status == Detection::undecidable);
    CHECK(d.neighbors_used == 0);
    CHECK(d.neighbors_degenerate == 10);
  }

  TEST_CASE("guiding consistency: phi's velocity equals the x-velocity of Psi at (x, Y)") {
    const Grid g(2, 128, 16.0);
    ComplexField psi = two_branch_state(g, kB1, kB2);
    // Give branch 1 an x-momentum so the velocity is not trivially zero.
    for (std::size_t r = 0; r < 128; ++r) {
      for (std::size_t i = 0; i < 128; ++i) psi.at(i, r) *= std::exp(Complex(0.0, 0.7 * g.coordinate(i)));
    }
    const bohmian::Units units{1.0, {1.3, 0.9}};
    const std::size_t row = 32;  // y = -8 + 32 * 0.125 = -4
    const double y = g.coordinate(row);
    const auto d = detect_effective_wavefunction(psi, y);
    REQUIRE(d.detected());
    const auto full = bohmian::bohmian_velocity(psi, units);
    const auto sub = bohmian::bohmian_velocity(*d.phi, bohmian::Units{1.0, {1.3, 1.0}});
    std::size_t compared = 0;
    for (std::size_t i = 0; i < 128; ++i) {
      if (!sub.valid[i] || !full.valid[row * 128 + i]) continue;
      ++compared;
      CHECK(std::abs(sub.component[0][i] - full.component[0][row * 128 + i]) < 1e-8);
    }
    CHECK(compared > 40);
  }
}

TEST_SUITE("conditional Born statistics") {
  TEST_CASE("product state: every bin follows |phi|^2") {
    const Grid g(2, 128, 16.0);
    const ComplexField psi = product_state(g, {0.0, 0.0}, {1.0, 1.2});
    ConditionalBornOptions opt;
    opt.y_edges = BinEdges::uniform(-2.0, 2.0, 8);
    opt.x_edges = BinEdges::uniform(-4.0, 4.0, 16);
    opt.noise_replicas = 400;
    const auto bins = conditional_born_bins(psi, draw(psi, 50000, 11), opt, 11);
    const auto phi_masses = in_range(gaussian_factor(g, 0.0, 1.0), opt.x_edges);
    for (const auto& b : bins) {
      REQUIRE_FALSE(b.excluded);
      CHECK(b.l1 <= b.noise);
      for (std::size_t k = 0; k < b.target.size(); ++k) CHECK(std::abs(b.target[k] - phi_masses.masses[k]) < 1e-10);
    }
  }

  TEST_CASE("two-branch state: each branch's bins follow its own phi") {
    const Grid g(2, 128, 16.0);
    const ComplexField psi = two_branch_state(g, kB1, kB2);
    ConditionalBornOptions opt;
    opt.y_edges = BinEdges({-4.5, -3.5, -0.5, 0.5, 3.5, 4.5});
    opt.x_edges = BinEdges::uniform(-6.0, 6.0, 24);
    opt.noise_replicas = 400;
    const auto bins = conditional_born_bins(psi, draw(psi, 40000, 5), opt, 5);
    REQUIRE(bins.size() == 5);
    CHECK(bins[2].excluded);  // no weight between the branches
    const auto m1 = in_range(gaussian_factor(g, kB1.x, kB1.sx), opt.x_edges);
    const auto m2 = in_range(gaussian_factor(g, kB2.x, kB2.sx), opt.x_edges);
    for (std::size_t k = 0; k < 24; ++k) {
      CHECK(std::abs(bins[0].target[k] - m1.masses[k]) < 1e-10);
      CHECK(std::abs(bins[4].target[k] - m2.masses[k]) < 1e-10);
    }
    CHECK(bins[0].l1 <= bins[0].noise);
    CHECK(bins[4].l1 <= bins[4].noise);
  }

  TEST_CASE("bins are identical across worker counts") {
    const Grid g(2, 64, 12.0);
    const ComplexField psi = correlated_gaussian(g, 0.5, 2.0);
    const Samples s = draw(psi, 20000, 2);
    ConditionalBornOptions opt;
    opt.noise_replicas = 50;
    const auto a = conditional_born_bins(psi, s, opt, 2, 1);
    const auto b = conditional_born_bins(psi, s, opt, 2, 8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].l1 == b[i].l1);
      CHECK(a[i].noise == b[i].noise);
      CHECK(a[i].count == b[i].count);
    }
  }

  TEST_CASE("default experiment passes") {
    ConditionalBornParams p;
    p.samples = 50000;
    p.noise_replicas = 200;
    const auto r = conditional_born_experiment(p, {});
    CHECK(r.all_pass());
  }
}

TEST_SUITE("Born LLN") {
  TEST_CASE("M = 1 matches the binomial tail and frequencies are 0 or 1") {
    BornLlnParams p;
    p.ladder = {1};
    p.seeds = 4000;
    const auto r = born_lln_experiment(p, {});
    const auto& t = table(r, "ladder");
    const double oracle = column(t, 0, "binomial_oracle");
    CHECK(oracle == doctest::Approx(1.0));  // |f - 1/2| = 1/2 > eps always
    CHECK(column(t, 0, "estimate") == doctest::Approx(oracle));
    CHECK(r.metric("mean_frequency_M=1")->pass);
    p.epsilon = 0.6;  // no deviation is possible
    const auto wide = born_lln_experiment(p, {});
    CHECK(column(table(wide, "ladder"), 0, "estimate") == 0.0);
    CHECK(binomial_deviation_probability(1, 0.5, 0.6) == 0.0);
  }

  TEST_CASE("A = full domain gives frequency 1 and an empty deviation set") {
    BornLlnParams p;
    p.region_lo = -std::numeric_limits<double>::infinity();
    p.region_hi = std::numeric_limits<double>::infinity();
    p.ladder = {10, 100};
    p.seeds = 200;
    const auto r = born_lln_experiment(p, {});
    CHECK(r.metric("target_probability")->value == doctest::Approx(1.0).epsilon(1e-12));
    const auto& t = table(r, "ladder");
    for (std::size_t row = 0; row < 2; ++row) {
      CHECK(column(t, row, "hits") == 0.0);
      CHECK(column(t, row, "mean_frequency") == 1.0);
    }
  }

  TEST_CASE("frequency estimator is unbiased along the ladder") {
    BornLlnParams p;
    p.region_lo = -0.5;
    p.region_hi = 1.5;
    p.ladder = {10, 100, 1000};
    p.seeds = 1000;
    const auto r = born_lln_experiment(p, {});
    for (const auto& m : r.metrics) {
      if (m.name.rfind("mean_frequency_", 0) == 0) CHECK(m.pass);
      if (m.name.rfind("deviation_measure_M=", 0) == 0) CHECK(m.pass);
    }
    const double exact = 0.5 * (std::erf(1.5 / std::sqrt(2.0)) - std::erf(-0.5 / std::sqrt(2.0)));
    CHECK(r.metric("target_probability")->value == doctest::Approx(exact).epsilon(1e-5));  // O(dx^2) quadrature
  }

  TEST_CASE("region probability uses the cell-uniform law") {
    const Grid g(1, 16, 16.0);
    std::vector<double> d(16, 1.0);
    CHECK(region_probability(g, d, -8.5, 7.5) == doctest::Approx(1.0));  // cells centered on -8 + k
    CHECK(region_probability(g, d, -8.0, 8.0) == doctest::Approx(15.5 / 16.0));
    CHECK(region_probability(g, d, 0.0, 1.5) == doctest::Approx(1.5 / 16.0));
  }
}

TEST_SUITE("absolute uncertainty") {
  TEST_CASE("reduced ladder keeps the product at hbar / 2") {
    AbsoluteUncertaintyParams p;
    p.samples = 20000;
    p.points = 1024;
    p.product_tolerance = 0.03;
    const auto r = absolute_uncertainty_experiment(p, {});
    for (const auto& m : r.metrics) {
      if (m.name.rfind("uncertainty_product_", 0) == 0) {
        CHECK_MESSAGE(std::abs(m.value - 0.5) < 0.03, m.name);
      }
    }
    CHECK(r.metric("velocity_spread_ratio_0_1")->value == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("too short a run is flagged") {
    AbsoluteUncertaintyParams p;
    p.sigma_ladder = {1.0};
    p.samples = 2000;
    p.points = 512;
    p.t_final_over_tau = 2.0;
    const auto r = absolute_uncertainty_experiment(p, {});
    CHECK_FALSE(r.flags.empty());
  }
}
