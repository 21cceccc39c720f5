#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "gelfree/characteristics.hpp"

using gelfree::CharacteristicPath;
using gelfree::MeasureSpec;

namespace {

const MeasureSpec kMono = MeasureSpec::monodisperse();
const MeasureSpec kExp = MeasureSpec::exponential(1.0);

}  // namespace

TEST_CASE("frozen reference values for the monodisperse path",
          "[characteristics]") {
  // Pinned from two agreeing independent routes (closed forms and the RK4
  // oracle at dt = 1e-6): T(1) with k = 1, and ell at half that lifetime.
  const double T1 = gelfree::time_to_axis(1.0, 1.0, kMono);
  CHECK(std::abs(T1 - 0.74121366259890897) <= 1e-15);
  const double ell_half = gelfree::ell_closed(0.5, 1.0, 1.0, kMono);
  CHECK(std::abs(ell_half - 0.74776493421316481) <= 1e-15);
  const double sigma0 = gelfree::sigma_closed(0.0, 1.0, 1.0, kMono);
  CHECK(sigma0 == 1.0);
  const double ell0 = gelfree::ell_closed(0.0, 1.0, 1.0, kMono);
  CHECK(ell0 == std::exp(-1.0));
}

TEST_CASE("closed forms agree with the RK4 oracle", "[characteristics][oracle]") {
  struct Case {
    const MeasureSpec* m;
    double s, k;
  };
  const Case cases[] = {
      {&kMono, 1.0, 1.0},  {&kMono, 0.1, 0.5}, {&kMono, 8.0, 2.0},
      {&kExp, 1.0, 1.0},   {&kExp, 3.0, 0.5},
  };
  for (const Case& c : cases) {
    CAPTURE(c.s, c.k);
    const double T = gelfree::time_to_axis(c.s, c.k, *c.m);
    const CharacteristicPath path =
        gelfree::integrate_characteristics_oracle(c.s, c.k, *c.m, T / 2e4);
    REQUIRE(path.samples.size() > 100);
    CHECK(std::abs(path.T_hit - T) <= 1e-10 * T);
    for (const gelfree::PathSample& ps : path.samples) {
      if (!(ps.Sigma > 0.0)) continue;  // terminal sample: exact by fiat
      const double ell = gelfree::ell_closed(ps.t, c.s, c.k, *c.m);
      const double sig = gelfree::sigma_closed(ps.t, c.s, c.k, *c.m);
      CHECK(std::abs(ps.ell - ell) <= 1e-9 * std::max(1e-3, std::abs(ell)));
      CHECK(std::abs(ps.Sigma - sig) <= 1e-8 * std::max(1e-12, sig));
    }
  }
}

TEST_CASE("oracle conserves the path invariant", "[characteristics][oracle]") {
  // q = ln Sigma - ln(1 - ell) + ell/k is constant along exact paths.
  const double k = 1.0;
  const CharacteristicPath path =
      gelfree::integrate_characteristics_oracle(1.0, k, kMono, 1e-5);
  const auto q = [k](const gelfree::PathSample& ps) {
    return std::log(ps.Sigma) - std::log(1.0 - ps.ell) + ps.ell / k;
  };
  const double q0 = q(path.samples.front());
  for (const gelfree::PathSample& ps : path.samples) {
    if (!(ps.Sigma > 0.0) || !(ps.ell < 1.0)) continue;
    CHECK(std::abs(q(ps) - q0) <= 1e-9 * std::max(1.0, std::abs(q0)));
  }
}

TEST_CASE("axis-hitting time inverts cleanly", "[characteristics]") {
  for (double k : {0.5, 1.0, 2.0}) {
    for (double s : {1e-3, 0.3, 1.0, 5.0, 40.0}) {
      const double T = gelfree::time_to_axis(s, k, kMono);
      const double back = gelfree::T_inverse(T, k, kMono);
      CHECK(std::abs(back - s) <= 1e-10 * std::max(1.0, s));
    }
  }
}

TEST_CASE("zeta inverts the sigma map", "[characteristics]") {
  const double k = 1.0;
  for (double t : {0.1, 0.5, 2.0}) {
    for (double s : {0.5, 1.0, 3.0, 10.0}) {
      const double theta = gelfree::T_inverse(t, k, kMono);
      if (!(s > theta)) continue;
      const double target = gelfree::sigma_closed(t, s, k, kMono);
      const double back = gelfree::zeta(t, target, k, kMono);
      CHECK(std::abs(back - s) <= 1e-9 * std::max(1.0, s));
    }
    // target 0 must return the inverse axis-hitting time itself
    const double foot = gelfree::zeta(t, 0.0, k, kMono);
    CHECK(std::abs(foot - gelfree::T_inverse(t, k, kMono)) <= 1e-12);
  }
}

TEST_CASE("axis-time asymptotes", "[characteristics]") {
  // T(s) ~ s/k for small s; T(s) ~ (-expm1(-1/k)) s for large s.
  for (double k : {0.5, 1.0, 2.0}) {
    const double small = gelfree::time_to_axis(1e-7, k, kMono);
    CHECK(std::abs(small * k / 1e-7 - 1.0) <= 1e-4);
    const double large = gelfree::time_to_axis(1e7, k, kMono);
    CHECK(std::abs(large / (-std::expm1(-1.0 / k) * 1e7) - 1.0) <= 1e-4);
  }
}

TEST_CASE("analytic derivatives match finite differences",
          "[characteristics]") {
  const double k = 1.0;
  SECTION("dT/ds") {
    for (double s : {0.5, 1.0, 4.0}) {
      const double d = gelfree::time_to_axis_derivative(s, k, kMono);
      const double h = 1e-5 * s;
      const double fd = (gelfree::time_to_axis(s + h, k, kMono) -
                         gelfree::time_to_axis(s - h, k, kMono)) /
                        (2.0 * h);
      CHECK(std::abs(fd - d) <= 1e-7 * std::abs(d));
    }
  }
  SECTION("dSigma/ds") {
    const double t = 0.3, s = 2.0;
    const double d = gelfree::dsigma_ds(t, s, k, kMono);
    const double h = 1e-5;
    const double fd = (gelfree::sigma_closed(t, s + h, k, kMono) -
                       gelfree::sigma_closed(t, s - h, k, kMono)) /
                      (2.0 * h);
    CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
  }
  SECTION("dSigma/ds stays positive before the axis") {
    for (double s : {0.2, 1.0, 3.0, 10.0}) {
      const double T = gelfree::time_to_axis(s, k, kMono);
      for (double frac : {0.0, 0.25, 0.5, 0.9, 0.99})
        CHECK(gelfree::dsigma_ds(frac * T, s, k, kMono) > 0.0);
    }
  }
}

TEST_CASE("domain guards fire where the solution ends", "[characteristics]") {
  const double k = 1.0;
  const double T = gelfree::time_to_axis(1.0, k, kMono);

  SECTION("the axis values themselves are exact") {
    CHECK(gelfree::ell_closed(T, 1.0, k, kMono) == 1.0);
    CHECK(gelfree::sigma_closed(T, 1.0, k, kMono) == 0.0);
  }
  SECTION("past the axis is an error") {
    CHECK_THROWS_AS(gelfree::ell_closed(T * (1.0 + 1e-6), 1.0, k, kMono),
                    gelfree::PastSingularityError);
    CHECK_THROWS_AS(gelfree::sigma_closed(2.0 * T, 1.0, k, kMono),
                    gelfree::PastSingularityError);
  }
  SECTION("dsigma_ds rejects t at or beyond the axis") {
    CHECK_THROWS_AS(gelfree::dsigma_ds(T, 1.0, k, kMono),
                    gelfree::DomainError);
  }
  SECTION("negative time and nonpositive k are rejected") {
    CHECK_THROWS_AS(gelfree::ell_closed(-0.1, 1.0, k, kMono),
                    gelfree::DomainError);
    CHECK_THROWS_AS(gelfree::time_to_axis(1.0, 0.0, kMono),
                    gelfree::DomainError);
    CHECK_THROWS_AS(gelfree::time_to_axis(1.0, -1.0, kMono),
                    gelfree::DomainError);
  }
}
