#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "typlab/classical/coin.hpp"
#include "typlab/classical/hamiltonian.hpp"
#include "typlab/classical/liouville.hpp"
#include "typlab/classical/maxwell.hpp"
#include "typlab/classical/microcanonical.hpp"
#include "typlab/classical/stone.hpp"
#include "typlab/classical/verlet.hpp"
#include "typlab/errors.hpp"

using namespace typlab;
using namespace typlab::classical;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HamiltonianSystem oscillator(double m = 1.0, double k = 1.0) {
  return HamiltonianSystem({m}, 1, NoInteraction{}, {HarmonicTrap{k}});
}

Microstate point_1d(double q, double p) {
  Microstate s(1, 1);
  s.q[0] = q;
  s.p[0] = p;
  return s;
}

}  // namespace

TEST_SUITE("hamiltonian") {
  TEST_CASE("energy examples") {
    const auto free3 = HamiltonianSystem::free_particles(1, 3);
    Microstate s(1, 3);
    CHECK(hamiltonian_energy(free3, s) == 0.0);
    s.p = {2.0, 0.0, 0.0};
    CHECK(hamiltonian_energy(free3, s) == 2.0);

    const HamiltonianSystem pair({1.0, 1.0}, 3, HarmonicPair{1.0});
    Microstate two(2, 3);
    two.q = {0, 0, 0, 1, 0, 0};
    CHECK(hamiltonian_energy(pair, two) == doctest::Approx(0.5));
  }

  TEST_CASE("coincident particles under inverse distance are singular") {
    const HamiltonianSystem coulomb({1.0, 1.0}, 3, InverseDistance{1.0});
    Microstate two(2, 3);
    CHECK_THROWS_AS(hamiltonian_energy(coulomb, two), SingularityError);
  }

  TEST_CASE("forces are minus the gradient of the potential") {
    const HamiltonianSystem sys({1.0, 2.0}, 2, HarmonicPair{1.5},
                                {UniformGravity{9.8, 1}, PointMass{0.3, {4.0, -3.0}}});
    const std::vector<double> q{0.3, -0.2, 1.1, 0.7};
    std::vector<double> f(4);
    sys.forces(q, f);
    for (std::size_t i = 0; i < 4; ++i) {
      auto qp = q, qm = q;
      const double h = 1e-6;
      qp[i] += h;
      qm[i] -= h;
      const double grad = (sys.potential_energy(qp) - sys.potential_energy(qm)) / (2 * h);
      CHECK(f[i] == doctest::Approx(-grad).epsilon(1e-7));
    }
  }

  TEST_CASE("invalid systems are rejected") {
    CHECK_THROWS_AS(HamiltonianSystem({0.0}, 1), ConfigError);
    CHECK_THROWS_AS(HamiltonianSystem({}, 1), ConfigError);
    CHECK_THROWS_AS(HamiltonianSystem({1.0}, 2, NoInteraction{}, {HardWalls{{0.0}, {1.0}}}), ConfigError);
  }
}

TEST_SUITE("verlet") {
  TEST_CASE("free flight is exact") {
    const auto sys = HamiltonianSystem::free_particles(2, 3, 2.0);
    Microstate s(2, 3);
    s.q = {1, 2, 3, -1, 0, 4};
    s.p = {0.5, -1, 2, 3, 0.25, -0.5};
    const Microstate e = integrate(sys, s, 3.7, 0.013);
    for (std::size_t i = 0; i < 6; ++i) CHECK(e.q[i] == doctest::Approx(s.q[i] + s.p[i] * 3.7 / 2.0).epsilon(1e-13));
    CHECK(e.p == s.p);
  }

  TEST_CASE("harmonic oscillator returns after one period and keeps its energy") {
    const auto sys = oscillator();
    const Microstate e = integrate(sys, point_1d(1.0, 0.0), 2.0 * std::numbers::pi, 1e-3);
    CHECK(std::abs(e.q[0] - 1.0) < 1e-4);
    CHECK(std::abs(e.p[0]) < 1e-4);

    // Energy oscillation over 1e4 steps is bounded and shrinks as dt^2 (no drift).
    auto max_energy_error = [&](double dt, int steps) {
      Microstate s = point_1d(1.0, 0.0);
      VerletIntegrator vi(sys, s);
      const double h0 = sys.energy(s);
      double worst = 0.0;
      for (int i = 0; i < steps; ++i) {
        vi.step(s, dt);
        worst = std::max(worst, std::abs(sys.energy(s) - h0) / h0);
      }
      return worst;
    };
    const double coarse = max_energy_error(1e-3, 10000);
    const double fine = max_energy_error(5e-4, 20000);
    CHECK(coarse < 1e-6);
    CHECK(fine == doctest::Approx(coarse / 4.0).epsilon(0.05));
  }

  TEST_CASE("no secular energy drift over 1e5 steps") {
    const auto sys = oscillator();
    Microstate s = point_1d(1.0, 0.3);
    VerletIntegrator vi(sys, s);
    const double h0 = sys.energy(s);
    double early = 0.0, late = 0.0;
    for (int i = 0; i < 100000; ++i) {
      vi.step(s, 1e-2);
      const double err = std::abs(sys.energy(s) - h0) / h0;
      (i < 10000 ? early : late) = std::max(i < 10000 ? early : late, err);
    }
    CHECK(late < 1.01 * early);
    CHECK(late < 1e-4);
  }

  TEST_CASE("monodromy determinant is one per period") {
    const auto sys = oscillator(1.3, 0.7);
    const double period = 2.0 * std::numbers::pi / std::sqrt(0.7 / 1.3);
    const double h = 1e-3;
    const Microstate base = integrate(sys, point_1d(0.4, 0.2), period, 1e-3);
    const Microstate dq = integrate(sys, point_1d(0.4 + h, 0.2), period, 1e-3);
    const Microstate dp = integrate(sys, point_1d(0.4, 0.2 + h), period, 1e-3);
    const double a = (dq.q[0] - base.q[0]) / h, c = (dq.p[0] - base.p[0]) / h;
    const double b = (dp.q[0] - base.q[0]) / h, d = (dp.p[0] - base.p[0]) / h;
    CHECK(std::abs(a * d - b * c - 1.0) < 1e-8);
  }

  TEST_CASE("forward then backward returns the initial state") {
    const HamiltonianSystem sys({1.0, 1.5, 0.7}, 2, HarmonicPair{2.0}, {HarmonicTrap{0.5}});
    Microstate s(3, 2);
    s.q = {0.1, 0.2, -0.5, 0.4, 1.0, -0.3};
    s.p = {0.3, -0.1, 0.0, 0.5, -0.2, 0.1};
    const Microstate back = integrate_backward(sys, integrate(sys, s, 5.0, 1e-3), 5.0, 1e-3);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(std::abs(back.q[i] - s.q[i]) < 1e-10);
      CHECK(std::abs(back.p[i] - s.p[i]) < 1e-10);
    }
  }

  TEST_CASE("hard walls reflect elastically") {
    const HamiltonianSystem box({1.0}, 1, NoInteraction{}, {HardWalls{{0.0}, {1.0}}});
    const Microstate e = integrate(box, point_1d(0.5, 1.0), 1.0, 0.03);
    CHECK(e.q[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.p[0] == doctest::Approx(-1.0));
    const Microstate far = integrate(box, point_1d(0.2, 3.7), 10.0, 0.01);
    CHECK(far.q[0] >= 0.0);
    CHECK(far.q[0] <= 1.0);
    CHECK(std::abs(far.p[0]) == doctest::Approx(3.7));
  }

  TEST_CASE("an unstable step is an integration error") {
    const auto sys = oscillator();
    CHECK_THROWS_AS(integrate(sys, point_1d(1.0, 0.0), 30.0, 2.5), IntegrationError);
    CHECK_THROWS_AS(verlet_step(sys, point_1d(1.0, 0.0), 0.0), ConfigError);
  }
}

TEST_SUITE("microcanonical") {
  TEST_CASE("single particle sits on the momentum shell") {
    RngStream rng(1, 0);
    const Microstate s = sample_microcanonical_ideal_gas(1, {1, 1, 1}, 2.0, 3.0, rng);
    double p2 = 0.0;
    for (const double p : s.p) p2 += p * p;
    CHECK(std::sqrt(p2) == doctest::Approx(std::sqrt(2.0 * 2.0 * 3.0)).epsilon(1e-14));
  }

  TEST_CASE("every sample has energy E and positions inside the box") {
    const auto sys = HamiltonianSystem::free_particles(50, 3, 1.7);
    for (std::uint64_t k = 0; k < 20; ++k) {
      RngStream rng(2, k);
      const Microstate s = sample_microcanonical_ideal_gas(50, {1.0, 2.0, 3.0}, 1.7, 11.0, rng);
      CHECK(hamiltonian_energy(sys, s) == doctest::Approx(11.0).epsilon(1e-13));
      for (std::size_t i = 0; i < 50; ++i) {
        for (int a = 0; a < 3; ++a) {
          CHECK(s.q_at(i, a) >= 0.0);
          CHECK(s.q_at(i, a) < 1.0 + a);
        }
      }
    }
  }

  TEST_CASE("equipartition: mean v_x^2 within 1% of kT / m") {
    const std::size_t n = 10000;
    RngStream rng(3, 0);
    const Microstate s = sample_microcanonical_ideal_gas(n, {1, 1, 1}, 1.0, 1.5 * n, rng);
    double v2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) v2 += s.p_at(i, 0) * s.p_at(i, 0);
    CHECK(v2 / n == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_SUITE("liouville") {
  const PhaseBox square{{0.5, -0.5}, {1.5, 0.5}};

  TEST_CASE("free particle shear keeps volume") {
    LiouvilleOptions opt;
    opt.samples = 20000;
    const auto r = liouville_volume_check(HamiltonianSystem::free_particles(1, 1), square, 3.0, opt);
    CHECK(r.consistent_with_unity());
    CHECK(r.containment_violations == 0);
  }

  TEST_CASE("harmonic quarter period keeps volume; 1e5 samples give half-width below 0.01") {
    LiouvilleOptions opt;
    opt.samples = 100000;
    opt.dt = 1e-2;
    const auto r = liouville_volume_check(oscillator(), square, std::numbers::pi / 2, opt);
    CHECK(r.consistent_with_unity());
    CHECK(r.hit_fraction.value == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.hit_fraction.halfwidth() < 0.01);
  }

  TEST_CASE("results do not depend on the worker count") {
    LiouvilleOptions opt;
    opt.samples = 9000;
    opt.workers = 1;
    const auto a = liouville_volume_check(oscillator(), square, 1.0, opt);
    opt.workers = 8;
    const auto b = liouville_volume_check(oscillator(), square, 1.0, opt);
    CHECK(a.hit_fraction.hits == b.hit_fraction.hits);
  }

  TEST_CASE("inverse-distance systems and malformed boxes are rejected") {
    LiouvilleOptions opt;
    const HamiltonianSystem coulomb({1.0, 1.0}, 1, InverseDistance{1.0});
    CHECK_THROWS_AS(liouville_volume_check(coulomb, PhaseBox{{0, 1, 0, 0}, {1, 2, 1, 1}}, 1.0, opt), ConfigError);
    CHECK_THROWS_AS(liouville_volume_check(oscillator(), PhaseBox{{0.0}, {1.0}}, 1.0, opt), ConfigError);
    CHECK_THROWS_AS(liouville_volume_check(oscillator(), PhaseBox{{1.0, 0.0}, {0.0, 1.0}}, 1.0, opt), ConfigError);
  }
}

TEST_SUITE("maxwell") {
  const ThermalSpec unit{};

  TEST_CASE("target fraction examples") {
    CHECK(maxwell_target_fraction({0, -kInf, kInf}, unit) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(maxwell_target_fraction({0, 0.0, kInf}, unit) == doctest::Approx(0.5).epsilon(1e-15));
    const double a = std::sqrt(2.0);
    CHECK(std::abs(maxwell_target_fraction({0, -a, a}, unit) - std::erf(1.0)) < 1e-12);
  }

  TEST_CASE("closed form agrees with independent quadrature to 1e-10") {
    const ThermalSpec hot{2.5, 0.8};
    RngStream rng(4, 0);
    for (int i = 0; i < 200; ++i) {
      double lo = rng.uniform(-6, 6), hi = rng.uniform(-6, 6);
      if (lo > hi) std::swap(lo, hi);
      if (hi - lo < 1e-6) continue;
      const VelocityWindow w{0, lo, hi};
      CHECK(std::abs(maxwell_target_fraction(w, hot) - maxwell_target_fraction_quadrature(w, hot)) < 1e-10);
    }
    // A separate Gauss-Kronrod pass over the 1D density.
    const double direct = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi); }, -1.0, 1.0, 15, 1e-14);
    CHECK(std::abs(maxwell_target_fraction({0, -1.0, 1.0}, unit) - direct) < 1e-12);
  }

  TEST_CASE("monotone under inclusion and additive over disjoint windows") {
    RngStream rng(5, 0);
    for (int i = 0; i < 300; ++i) {
      double x[3] = {rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)};
      std::sort(x, x + 3);
      if (x[1] - x[0] < 1e-9 || x[2] - x[1] < 1e-9) continue;
      const double left = maxwell_target_fraction({0, x[0], x[1]}, unit);
      const double right = maxwell_target_fraction({0, x[1], x[2]}, unit);
      const double whole = maxwell_target_fraction({0, x[0], x[2]}, unit);
      CHECK(whole == doctest::Approx(left + right).epsilon(1e-12));
      CHECK(whole >= left);
      CHECK(whole >= right);
    }
  }

  TEST_CASE("window validation") {
    CHECK_THROWS_AS(VelocityWindow::around(0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(maxwell_target_fraction({0, 1.0, 1.0}, unit), ConfigError);
    const auto w = VelocityWindow::around(0.5, 0.25);
    CHECK(w.lo == 0.25);
    CHECK(w.hi == 0.75);
  }

  TEST_CASE("empirical fraction at rest and under relabeling") {
    Microstate rest(10, 3);
    CHECK(empirical_velocity_fraction(rest, {0, 0.5, 1.0}, 1.0) == 0.0);
    CHECK(empirical_velocity_fraction(rest, {0, -1.0, 1.0}, 1.0) == 1.0);

    RngStream rng(6, 0);
    Microstate s = sample_microcanonical_ideal_gas(500, {1, 1, 1}, 1.0, 750.0, rng);
    const double f = empirical_velocity_fraction(s, {0, -1, 1}, 1.0);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    Microstate shuffled = s;
    for (std::size_t i = 0; i < 500; ++i) {
      const std::size_t j = 499 - i;
      for (int a = 0; a < 3; ++a) {
        shuffled.p_at(j, a) = s.p_at(i, a);
        shuffled.q_at(j, a) = s.q_at(i, a);
      }
    }
    CHECK(empirical_velocity_fraction(shuffled, {0, -1, 1}, 1.0) == f);
  }

  TEST_CASE("N = 1e4 gas: fraction within 0.02 of the target in at least 99 of 100 seeds") {
    const double target = maxwell_target_fraction({0, -1, 1}, unit);
    int good = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      RngStream rng(7, k);
      const auto s = sample_microcanonical_ideal_gas(10000, {1, 1, 1}, 1.0, 15000.0, rng);
      good += std::abs(empirical_velocity_fraction(s, {0, -1, 1}, 1.0) - target) <= 0.02;
    }
    CHECK(good >= 99);
  }

  TEST_CASE("conditional estimator agrees with raw hit counting") {
    // Both estimate the same measure; the mean of the conditional probabilities
    // must lie within the binomial noise of the hit fraction.
    const std::size_t n = 100;
    const double target = maxwell_target_fraction({0, -1, 1}, unit);
    const int states = 4000;
    double cond = 0.0;
    int hits = 0;
    for (int k = 0; k < states; ++k) {
      RngStream rng(8, static_cast<std::uint64_t>(k));
      const auto s = sample_microcanonical_ideal_gas(n, {1, 1, 1}, 1.0, 1.5 * n, rng);
      hits += std::abs(empirical_velocity_fraction(s, {0, -1, 1}, 1.0) - target) > 0.05;
      const double c = conditional_deviation_probability(s, {0, -1, 1}, 1.0, target, 0.05);
      REQUIRE(c >= 0.0);
      REQUIRE(c <= 1.0);
      cond += c;
    }
    const double p = static_cast<double>(hits) / states;
    CHECK(std::abs(cond / states - p) < 4.0 * std::sqrt(p * (1 - p) / states));
  }

  TEST_CASE("gross deviations are atypical; the measure falls along the ladder") {
    MaxwellLlnParams p;
    p.ladder = {100, 1000};
    p.seeds = 20;
    p.epsilon = 0.5;
    const auto r = maxwell_lln_experiment(p, {});
    for (const auto& row : r.table("ladder")->rows) {
      CHECK(row[1] == 0.0);   // hits
      CHECK(row[5] < 1e-6);   // conditional estimate
      CHECK(row[9] == -1.0);  // verdict atypical
    }
    p.epsilon = 0.02;
    p.ladder = {100, 1000, 10000};
    const auto r2 = maxwell_lln_experiment(p, {});
    CHECK(r2.metric("deviation_measure_strictly_decreasing")->pass);
  }

  TEST_CASE("N = 1e5 at eps = 0.01 gives an atypical deviation set") {
    MaxwellLlnParams p;
    p.ladder = {100000};
    p.seeds = 10;
    p.epsilon = 0.01;
    const auto r = maxwell_lln_experiment(p, {});
    CHECK(r.table("ladder")->rows[0][9] == -1.0);
  }
}

TEST_SUITE("coin") {
  const CoinMachineSpec spec{};

  TEST_CASE("outcome examples") {
    CHECK(coin_outcome(spec, 5.0, 0.0) == CoinFace::heads);
    // T = 2u/g = 1 for u = 4.9, so omega = pi is exactly one half-turn.
    CHECK(coin_outcome(spec, 4.9, std::numbers::pi) == CoinFace::tails);
    const double theta = 2.0 * 5.0 * 20.0 * std::numbers::pi / 9.8;
    CHECK(coin_outcome(spec, 5.0, 20.0 * std::numbers::pi) == (std::cos(theta) >= 0 ? CoinFace::heads : CoinFace::tails));
    CHECK_THROWS_AS(coin_outcome(spec, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(coin_outcome(spec, 1.0, -1.0), DomainError);
  }

  TEST_CASE("outcome is a pure function") {
    RngStream rng(9, 0);
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform(4, 6), w = rng.uniform(50, 100);
      CHECK(coin_outcome(spec, u, w) == coin_outcome(spec, u, w));
    }
  }

  TEST_CASE("spin span of the wide spec exceeds ten turns; narrow spec does not") {
    CHECK(spin_turns_spanned(spec) > 10.0);
    CHECK(spin_turns_spanned({9.8, 4.0, 6.0, 0.0, 0.1, 0.0}) < 1.0);
  }

  TEST_CASE("frequencies: gross deviations atypical, narrow spins heads-biased, warning on short span") {
    CoinLlnParams p;
    p.ladder = {30, 300};
    p.seeds = 50;
    p.epsilon = 0.4;
    const auto r = coin_lln_experiment(p, {});
    CHECK(r.metric("deviation_measure_at_largest_N")->value == 0.0);
    CHECK(r.metric("narrow_control_frequency")->value > 0.9);

    CoinLlnParams narrow;
    narrow.spec = {9.8, 4.0, 6.0, 10.0, 12.0, 0.0};
    narrow.ladder = {100};
    narrow.seeds = 5;
    const auto w = coin_lln_experiment(narrow, {});
    bool warned = false;
    for (const auto& f : w.flags) warned = warned || f.find("turns") != std::string::npos;
    CHECK(warned);
  }
}

TEST_SUITE("stone") {
  TEST_CASE("zero jitter without a third body gives zero deviation") {
    StoneThrowSpec spec;
    spec.delta_pert = 0.0;
    const auto d = stone_sup_deviations(stone_system(spec), spec, 50, 1, 0, 1);
    for (const double x : d) CHECK(x == 0.0);
  }

  TEST_CASE("uniform gravity: sup deviation is delta T") {
    StoneThrowSpec spec;
    spec.delta_pert = 0.037;
    spec.horizon = 1.7;
    spec.dt = 1e-3;
    const auto d = stone_sup_deviations(stone_system(spec), spec, 200, 2, 0, 2);
    for (const double x : d) CHECK(std::abs(x - 0.037 * 1.7) < 1e-10);
  }

  TEST_CASE("deviation vanishes as the jitter is halved") {
    StoneThrowSpec spec;
    const ThirdBody body{};
    double prev = kInf;
    for (int level = 0; level < 5; ++level) {
      spec.delta_pert = 1e-2 / std::pow(2.0, level);
      const auto d = stone_sup_deviations(stone_system(spec, &body), spec, 50, 3, 0, 1);
      const double worst = *std::max_element(d.begin(), d.end());
      CHECK(worst < prev);
      prev = worst;
    }
    CHECK(prev < 1e-2 * spec.horizon);
  }

  TEST_CASE("default robustness run: deviation-set estimate is zero") {
    const auto r = stone_robustness_experiment(default_stone_params(), {});
    CHECK(r.metric("deviation_measure")->value == 0.0);
    CHECK(r.metric("analytic_sup_deviation_error")->pass);
    CHECK(r.all_pass());
  }
}
