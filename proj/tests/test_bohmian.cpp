#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "typlab/bohmian/equivariance.hpp"
#include "typlab/bohmian/guidance.hpp"
#include "typlab/bohmian/history.hpp"
#include "typlab/bohmian/propagator.hpp"
#include "typlab/bohmian/trajectory.hpp"
#include "typlab/bohmian/wavefunction.hpp"
#include "typlab/errors.hpp"

using namespace typlab;
using namespace typlab::bohmian;

namespace {

constexpr double kPi = std::numbers::pi;

WaveFunction harmonic_state(const Grid& g, int n, double omega = 1.0) {
  const Units u{};
  return WaveFunction(harmonic_eigenstate(g, n, 1.0, omega), u, harmonic_potential(g, u, omega));
}

WaveFunction superposition(const Grid& g) {
  const Units u{};
  ComplexField psi = harmonic_eigenstate(g, 0, 1.0, 1.0);
  const ComplexField one = harmonic_eigenstate(g, 1, 1.0, 1.0);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = (psi[i] + one[i]) / std::sqrt(2.0);
  return WaveFunction(psi, u, harmonic_potential(g, u, 1.0));
}

double position_std(const ComplexField& psi) {
  const Grid& g = psi.grid();
  double m0 = 0, m1 = 0, m2 = 0;
  const auto d = psi.density();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i);
    m0 += d[i];
    m1 += d[i] * x;
    m2 += d[i] * x * x;
  }
  return std::sqrt(m2 / m0 - (m1 / m0) * (m1 / m0));
}

double density_l1(const ComplexField& a, const ComplexField& b) {
  const auto da = a.density(), db = b.density();
  double s = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) s += std::abs(da[i] - db[i]);
  return s * a.grid().cell_volume();
}

}  // namespace

TEST_SUITE("wavefunction") {
  TEST_CASE("construction normalizes and validates") {
    const Grid g(1, 256, 20.0);
    ComplexField raw = gaussian_packet(g, 0.5, 1.0);
    for (auto& v : raw.values()) v *= 3.0;
    const WaveFunction wf(raw);
    CHECK(wf.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(WaveFunction(ComplexField(g)), DomainError);
    CHECK_THROWS_AS(WaveFunction(raw, Units{0.0, {1, 1}}), ConfigError);
    CHECK_THROWS_AS(WaveFunction(raw, Units{}, std::vector<double>(10)), ConfigError);
  }

  TEST_CASE("harmonic eigenstates are orthonormal with energy (n + 1/2) hbar omega") {
    const Grid g(1, 512, 24.0);
    for (int n = 0; n < 4; ++n) {
      const auto wf = harmonic_state(g, n, 1.3);
      CHECK(wf.energy() == doctest::Approx((n + 0.5) * 1.3).epsilon(1e-9));
    }
    const auto a = harmonic_eigenstate(g, 1, 1.0, 1.0), b = harmonic_eigenstate(g, 2, 1.0, 1.0);
    Complex dot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += std::conj(a[i]) * b[i];
    CHECK(std::abs(dot) * g.spacing() < 1e-12);
  }
}

TEST_SUITE("propagator") {
  TEST_CASE("plane wave gains the free phase and keeps |psi| constant") {
    const Grid g(1, 128, 10.0);
    const long long mode = 5;
    const WaveFunction wf(plane_wave(g, mode));
    const double dt = 0.013;
    const WaveFunction next = schrodinger_step(wf, dt);
    const double k = g.wavenumbers()[mode];
    const Complex phase = std::exp(Complex(0.0, -k * k * dt / 2.0));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(next.field()[i] - phase * wf.field()[i]) < 1e-12);
      CHECK(std::abs(next.field()[i]) == doctest::Approx(std::abs(wf.field()[i])).epsilon(1e-12));
    }
  }

  TEST_CASE("harmonic ground state is stationary over one period") {
    const Grid g(1, 1024, 20.0);
    const auto wf = harmonic_state(g, 0);
    ComplexField psi = wf.field();
    const std::size_t steps = 6283;
    SplitStepPropagator prop(wf, 2.0 * kPi / static_cast<double>(steps));
    prop.steps(psi, steps);
    CHECK(density_l1(psi, wf.field()) < 1e-6);
  }

  TEST_CASE("free Gaussian width follows sigma(t) to 0.1% at t = 2 m sigma0^2 / hbar") {
    const Grid g(1, 1024, 40.0);
    const double s0 = 1.0;
    const WaveFunction wf(gaussian_packet(g, 0.0, s0));
    CHECK(position_std(wf.field()) == doctest::Approx(s0).epsilon(1e-9));
    ComplexField psi = wf.field();
    const double t = 2.0 * s0 * s0;
    SplitStepPropagator(wf, t / 2000.0).steps(psi, 2000);
    CHECK(position_std(psi) == doctest::Approx(free_gaussian_width(s0, t)).epsilon(1e-3));
    CHECK(free_gaussian_width(s0, t) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("norm and energy are conserved") {
    const Grid g(1, 256, 20.0);
    const auto wf = superposition(g);
    ComplexField psi = wf.field();
    SplitStepPropagator prop(wf, 1e-3);
    prop.steps(psi, 20000);
    CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-12);
    const WaveFunction after(psi, wf.units(), std::vector<double>(wf.potential().begin(), wf.potential().end()));
    CHECK(after.energy() == doctest::Approx(wf.energy()).epsilon(1e-8));
  }

  TEST_CASE("under-resolved fields raise a resolution error") {
    const Grid g(1, 64, 20.0);
    const WaveFunction sharp(gaussian_packet(g, 0.0, 0.08, 9.0));
    SplitStepPropagator prop(sharp, 1e-3);
    CHECK(prop.spectral_tail(sharp.field()) > 1e-8);
    CHECK_THROWS_AS(prop.check_resolution(sharp.field()), ResolutionError);
    CHECK_THROWS_AS(PsiHistory::propagate(sharp, 1e-3, 1, 0.01), ResolutionError);
    const auto smooth = harmonic_state(Grid(1, 256, 20.0), 0);
    CHECK_NOTHROW(SplitStepPropagator(smooth, 1e-3).check_resolution(smooth.field()));
  }
}

TEST_SUITE("guidance") {
  TEST_CASE("real wave functions have zero velocity") {
    const auto wf = harmonic_state(Grid(1, 256, 20.0), 0);
    const auto v = bohmian_velocity(wf);
    for (std::size_t i = 0; i < v.component[0].size(); ++i) {
      if (v.valid[i]) CHECK(std::abs(v.component[0][i]) < 1e-9);
    }
  }

  TEST_CASE("plane wave moves at hbar k / m everywhere") {
    const Grid g(1, 128, 10.0);
    const Units u{0.7, {2.5, 1.0}};
    const WaveFunction wf(plane_wave(g, -4), u);
    const auto v = bohmian_velocity(wf);
    const double expected = u.hbar * g.wavenumbers()[g.wrap_index(-4)] / u.mass[0];
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(v.valid[i]);
      CHECK(v.component[0][i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("2D plane wave: each axis uses its own mass") {
    const Grid g(2, 32, 8.0);
    const Units u{1.0, {2.0, 0.5}};
    ComplexField psi(g);
    const auto k = g.wavenumbers();
    for (std::size_t iy = 0; iy < 32; ++iy) {
      for (std::size_t ix = 0; ix < 32; ++ix) {
        psi.at(ix, iy) = std::exp(Complex(0.0, k[3] * g.coordinate(ix) + k[2] * g.coordinate(iy)));
      }
    }
    const auto v = bohmian_velocity(psi, u);
    CHECK(v.component[0][77] == doctest::Approx(k[3] / 2.0).epsilon(1e-12));
    CHECK(v.component[1][77] == doctest::Approx(k[2] / 0.5).epsilon(1e-12));
  }

  TEST_CASE("free Gaussian velocity is linear in x with slope sigma'/sigma") {
    const Grid g(1, 1024, 40.0);
    const WaveFunction wf(gaussian_packet(g, 0.0, 1.0));
    ComplexField psi = wf.field();
    const double t = 1.5;
    SplitStepPropagator(wf, t / 1500.0).steps(psi, 1500);
    const auto v = bohmian_velocity(psi, Units{});
    const double a = 0.5;  // hbar / 2 m sigma0^2
    const double slope = a * a * t / (1.0 + a * a * t * t);
    const double sigma_t = free_gaussian_width(1.0, t);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(i);
      if (std::abs(x) > 2.0 * sigma_t || std::abs(x) < 0.1) continue;
      CHECK(v.component[0][i] == doctest::Approx(slope * x).epsilon(5e-3));
    }
  }

  TEST_CASE("nodes are masked") {
    const Grid g(1, 256, 20.0);
    const auto wf = harmonic_state(g, 1);
    const auto v = bohmian_velocity(wf);
    CHECK_FALSE(v.valid[128]);  // x = 0 is an exact node of the n = 1 state
    CHECK(v.valid[100]);
  }
}

TEST_SUITE("history") {
  TEST_CASE("bracket and save/load round trip") {
    const Grid g(1, 128, 20.0);
    const auto wf = superposition(g);
    const PsiHistory h = PsiHistory::propagate(wf, 1e-3, 10, 0.5);
    CHECK(h.frame_count() == 51);
    CHECK(h.final_time() == doctest::Approx(0.5));
    std::size_t k0 = 0, k1 = 0;
    double w = 0.0;
    h.bracket(0.125, k0, k1, w);
    CHECK(k0 == 12);
    CHECK(k1 == 13);
    CHECK(w == doctest::Approx(0.5));

    const auto path = std::filesystem::temp_directory_path() / "typlab_history_test.bin";
    h.save(path);
    const PsiHistory back = PsiHistory::load(path);
    REQUIRE(back.frame_count() == h.frame_count());
    CHECK(back.dt() == h.dt());
    CHECK(back.frame_stride() == h.frame_stride());
    for (std::size_t k = 0; k < h.frame_count(); ++k) {
      for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(back.frame(k)[i] == h.frame(k)[i]);
    }
    {
      std::ofstream bad(path, std::ios::binary);
      bad << "NOTAPSI!";
    }
    CHECK_THROWS_AS(PsiHistory::load(path), ConfigError);
    std::filesystem::remove(path);
  }
}

TEST_SUITE("trajectory") {
  TEST_CASE("ground state trajectories stand still") {
    const Grid g(1, 256, 20.0);
    // Strang splitting only approximates the eigenstate, leaving O(dt^2) residual motion.
    const PsiHistory h = PsiHistory::propagate(harmonic_state(g, 0), 1e-3, 10, 3.0);
    const std::vector<double> times{0.0, 1.0, 2.0, 3.0};
    for (const double q0 : {-1.3, 0.0, 0.4, 2.2}) {
      const auto tr = advance_trajectory(h, std::vector<double>{q0}, times);
      for (const double q : tr.points) CHECK(std::abs(q - q0) < 1e-6);
    }
  }

  TEST_CASE("free Gaussian trajectories scale as sigma(t) / sigma0") {
    const Grid g(1, 1024, 60.0);
    const PsiHistory h = PsiHistory::propagate(WaveFunction(gaussian_packet(g, 0.0, 1.0)), 2e-3, 10, 4.0);
    const std::vector<double> times{1.0, 2.0, 4.0};
    for (const double q0 : {-2.0, -1.0, -0.3, 0.5, 1.5, 2.0}) {
      const auto tr = advance_trajectory(h, std::vector<double>{q0}, times);
      for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(tr.points[k] == doctest::Approx(q0 * free_gaussian_width(1.0, times[k])).epsilon(5e-3));
      }
    }
  }

  TEST_CASE("1D trajectories never cross") {
    const Grid g(1, 512, 20.0);
    const PsiHistory h = PsiHistory::propagate(superposition(g), 1e-3, 10, 2.0 * kPi);
    Samples starts{1, {}};
    for (int i = 0; i < 100; ++i) starts.coords.push_back(-2.5 + 5.0 * i / 99.0);
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) times.push_back(2.0 * kPi * k / 40.0);
    const auto ens = advance_ensemble(h, starts, times, {}, 1);
    for (const auto& snap : ens.positions) {
      for (std::size_t i = 1; i < snap.size(); ++i) REQUIRE(snap(i, 0) > snap(i - 1, 0));
    }
  }

  TEST_CASE("trajectories are bit-identical across runs and worker counts") {
    const Grid g(1, 256, 20.0);
    const PsiHistory h = PsiHistory::propagate(superposition(g), 1e-3, 10, 2.0);
    Samples starts{1, {}};
    RngStream rng(3, 0);
    for (int i = 0; i < 700; ++i) starts.coords.push_back(rng.normal());
    const std::vector<double> times{0.5, 1.0, 2.0};
    const auto a = advance_ensemble(h, starts, times, {}, 1);
    const auto b = advance_ensemble(h, starts, times, {}, 8);
    for (std::size_t k = 0; k < times.size(); ++k) CHECK(a.positions[k].coords == b.positions[k].coords);
    CHECK(a.quality.steps == b.quality.steps);
    CHECK(a.quality.clamps == b.quality.clamps);
  }
}

TEST_SUITE("equivariance") {
  TEST_CASE("continuity residual stays below 1e-6 per unit time") {
    const Grid g(1, 1024, 20.0);
    const auto start = superposition(g);
    ComplexField psi = start.field();
    SplitStepPropagator(start, 1e-3).steps(psi, 1500);  // sin t != 0, so box weights move
    const WaveFunction wf(psi, start.units(), std::vector<double>(start.potential().begin(), start.potential().end()));
    for (const auto& [a, b] : {std::pair{-1.0, 0.5}, std::pair{0.2, 3.0}, std::pair{-4.0, -0.7}}) {
      const auto r = continuity_residual(wf, a, b, 1e-3);
      CHECK(r.residual < 1e-6);
      CHECK(std::abs(r.rate) > 1e-3);  // the box probability really changes
    }
  }

  TEST_CASE("box probability is exact for sub-cell boxes") {
    const Grid g(1, 256, 20.0);
    const auto wf = harmonic_state(g, 0);
    const double exact = 0.5 * (std::erf(1.0) - std::erf(-0.5));  // |psi_0|^2 is N(0, 1/2)
    CHECK(box_probability(wf.field(), -0.5, 1.0) == doctest::Approx(exact).epsilon(1e-10));
  }

  TEST_CASE("ground state stays within the sampling-noise band") {
    EquivarianceParams p;
    p.state = "ground";
    p.samples = 4000;
    p.checkpoints = 4;
    p.noise_replicas = 300;
    const auto r = equivariance_experiment(p, {});
    CHECK(r.metric("l1_t=0.0000")->pass);
    for (const auto& m : r.metrics) {
      if (m.name.find("within_noise_band") != std::string::npos) CHECK(m.pass);
    }
    CHECK(r.metric("node_clamp_rate")->value == 0.0);
  }
}
