#include <cmath>
#include <cstdint>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "gelfree/laplace.hpp"
#include "gelfree/massflow.hpp"

using gelfree::MeasureSpec;
using gelfree::Observer;
using gelfree::ParticleSystem;

namespace {

std::vector<Observer> laplace_observers(std::vector<double> s_values) {
  std::vector<Observer> obs;
  for (double s : s_values)
    obs.push_back({"laplace", [s](const ParticleSystem& sys) {
                     return gelfree::empirical_laplace_observation(sys, s);
                   }});
  return obs;
}

}  // namespace

TEST_CASE("initialization draws from the requested measure", "[massflow]") {
  SECTION("monodisperse: every particle carries mass 1") {
    const ParticleSystem sys =
        gelfree::init_from_measure(MeasureSpec::monodisperse(), 1000, 7);
    REQUIRE(sys.size() == 1000);
    for (std::size_t i = 0; i < sys.size(); ++i) CHECK(sys.mass(i) == 1.0);
    CHECK(std::abs(gelfree::empirical_laplace(sys, 1.0) - std::exp(-1.0)) <=
          1e-14);  // summation order rounding only
  }
  SECTION("atoms: counts split by weight with a randomized remainder") {
    const ParticleSystem sys = gelfree::init_from_measure(
        MeasureSpec::atomic({{0.5, 0.5}, {2.0, 0.5}}), 7, 11);
    REQUIRE(sys.size() == 7);
    int small = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK((sys.mass(i) == 0.5 || sys.mass(i) == 2.0));
      small += sys.mass(i) == 0.5;
    }
    CHECK(small >= 3);
    CHECK(small <= 4);
  }
  SECTION("exponential: transform matches to sampling accuracy") {
    const std::size_t n = 100000;
    const ParticleSystem sys =
        gelfree::init_from_measure(MeasureSpec::exponential(1.0), n, 3);
    // L0(1) = 1/2; the estimator's own std error is ~0.236/sqrt(n)
    CHECK(std::abs(gelfree::empirical_laplace(sys, 1.0) - 0.5) <= 0.005);
  }
  SECTION("families without a quantile are rejected") {
    CHECK_THROWS_AS(
        gelfree::init_from_measure(
            MeasureSpec::generic(
                {[](double x) { return x < 1.0 ? x : 2.0 - x; }, 0.0, 2.0}),
            100, 1),
        gelfree::MeasureError);
  }
}

TEST_CASE("a single particle coagulates with itself", "[massflow]") {
  ParticleSystem sys({1.0}, 0.0, 42);
  const gelfree::EventRecord ev = sys.step();
  CHECK(ev.kind == gelfree::JumpKind::Coagulation);
  CHECK(ev.partner == 0);
  CHECK(ev.new_mass == 2.0);
  CHECK(sys.mass(0) == 2.0);
  CHECK(sys.sim_time() > 0.0);
}

TEST_CASE("runs are reproducible from the seed", "[massflow]") {
  const auto run = [] {
    ParticleSystem sys =
        gelfree::init_from_measure(MeasureSpec::exponential(1.0), 500, 99);
    const std::vector<double> at = {0.1, 0.3, 0.7};
    return gelfree::run_until(sys, 1.0, laplace_observers({1.0}), at);
  };
  const gelfree::ObservationLog a = run();
  const gelfree::ObservationLog b = run();
  REQUIRE(a.times == b.times);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t o = 0; o < a.series.size(); ++o)
    for (std::size_t i = 0; i < a.series[o].size(); ++i) {
      CHECK(a.series[o][i].estimate == b.series[o][i].estimate);
      CHECK(a.series[o][i].std_error == b.series[o][i].std_error);
    }
  CHECK(a.event_count == b.event_count);
}

TEST_CASE("rate index stays consistent through many updates", "[massflow]") {
  ParticleSystem sys =
      gelfree::init_from_measure(MeasureSpec::exponential(1.0), 2000, 5);
  for (int i = 0; i < 20000; ++i) sys.step();
  double direct = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) direct += sys.mass(i);
  CHECK(std::abs(sys.total_mass_sum() - direct) <= 1e-12 * direct);
}

TEST_CASE("initial drift of the mean matches the generator", "[massflow]") {
  // d/dt E[mean mass] at t=0 for monodisperse data is 1 - k/2: coagulation
  // adds the partner's mean, fragmentation removes half the fragmenting
  // particle.  Short horizon, many replicates, 3-sigma band.
  const double k = 1.0;
  const double tau = 0.01;
  const int reps = 64;
  const std::size_t n = 2000;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    ParticleSystem sys = gelfree::init_from_measure(
        MeasureSpec::monodisperse(), n, gelfree::detail::derive_seed(123, r), k);
    gelfree::run_until(sys, tau, {}, {});
    const double inc = (sys.mean_mass() - 1.0) / tau;
    sum += inc;
    sumsq += inc * inc;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt((sumsq - reps * mean * mean) / (reps - 1));
  const double se = sd / std::sqrt(static_cast<double>(reps));
  CHECK(std::abs(mean - (1.0 - 0.5 * k)) <= 3.0 * se);
}

TEST_CASE("empirical transform tracks the analytic solution",
          "[massflow][slow]") {
  const std::size_t n = 100000;
  for (double k : {0.5, 2.0}) {
    CAPTURE(k);
    ParticleSystem sys =
        gelfree::init_from_measure(MeasureSpec::monodisperse(), n, 2024, k);
    gelfree::run_until(sys, 1.0, {}, {});
    const gelfree::LaplaceEvaluator ev(MeasureSpec::monodisperse(), k);
    for (double s : {0.5, 1.0, 3.0}) {
      const double emp = gelfree::empirical_laplace(sys, s);
      CHECK(std::abs(emp - ev.L(1.0, s)) <=
            5.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("mean mass decays toward the dust asymptote", "[massflow][slow]") {
  // t |dL/ds(t,0)| -> expm1(1/k); the empirical mean estimates |dL/ds(t,0)|.
  const double k = 1.0;
  const std::size_t n = 100000;
  ParticleSystem sys =
      gelfree::init_from_measure(MeasureSpec::monodisperse(), n, 31, k);
  gelfree::run_until(sys, 200.0, {}, {});
  const double expected = gelfree::moment_asymptote(k) / 200.0;
  CHECK(std::abs(sys.mean_mass() - expected) <= 0.1 * expected);
}

TEST_CASE("scaled empirical CDF behaves like one", "[massflow]") {
  ParticleSystem sys =
      gelfree::init_from_measure(MeasureSpec::exponential(1.0), 5000, 17);
  CHECK_THROWS_AS(
      gelfree::empirical_scaled_cdf(sys, std::vector<double>{1.0}),
      gelfree::DomainError);  // needs sim_time > 0
  gelfree::run_until(sys, 2.0, {}, {});
  const std::vector<double> grid = {1e-4, 0.1, 0.5, 1.0, 5.0, 1e4};
  const std::vector<double> cdf = gelfree::empirical_scaled_cdf(sys, grid);
  REQUIRE(cdf.size() == grid.size());
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    CHECK(cdf[i] >= 0.0);
    CHECK(cdf[i] <= 1.0);
    if (i > 0) CHECK(cdf[i] >= cdf[i - 1]);
  }
  CHECK(cdf.back() == 1.0);
}

TEST_CASE("explosion guard trips for the pure-coagulation system",
          "[massflow]") {
  ParticleSystem sys =
      gelfree::init_from_measure(MeasureSpec::monodisperse(), 2000, 8, 0.0);
  gelfree::RunCaps caps;
  caps.max_events = 10000000;
  caps.mean_mass_factor = 1000.0;
  bool thrown = false;
  try {
    gelfree::run_until(sys, 5.0, {}, {}, caps);
  } catch (const gelfree::ExplosionDetected& e) {
    thrown = true;
    CHECK(e.sim_time < 1.1);  // gel time is 1 for this data
    CHECK(e.mean_mass >= 1000.0);
  }
  CHECK(thrown);
}

TEST_CASE("a vanishing total rate is reported, not spun on", "[massflow]") {
  ParticleSystem sys({1e-305, 1e-305}, 1.0, 3);
  CHECK_THROWS_AS(gelfree::run_until(sys, 1.0, {}, {}),
                  gelfree::StalledError);
}

TEST_CASE("constructor and run_until guards", "[massflow][errors]") {
  CHECK_THROWS_AS(ParticleSystem({}, 1.0, 1), gelfree::MeasureError);
  CHECK_THROWS_AS(ParticleSystem({1.0, -1.0}, 1.0, 1), gelfree::MeasureError);
  CHECK_THROWS_AS(ParticleSystem({1.0}, -0.5, 1), gelfree::DomainError);
  ParticleSystem sys({1.0, 1.0}, 1.0, 1);
  gelfree::run_until(sys, 0.5, {}, {});
  CHECK(sys.sim_time() == 0.5);  // lands exactly on the horizon
  CHECK_THROWS_AS(gelfree::run_until(sys, 0.25, {}, {}),
                  gelfree::DomainError);
}
