#include <doctest.h>

#include <cmath>

#include "degen/geometry.hpp"

#include <nlohmann/json.hpp>

using degen::Geometry;
using degen::iterlog;
using degen::log_grid;
using degen::structural_check;
using degen::SuperradiusSpec;

TEST_CASE("iterlog values and domain errors") {
  CHECK(iterlog(1, std::exp(-4.0)) == doctest::Approx(4.0));
  CHECK(iterlog(2, std::exp(-std::exp(3.0))) == doctest::Approx(3.0));
  CHECK_THROWS_AS(iterlog(2, 0.9), degen::domain_error);
  CHECK_THROWS_AS(iterlog(1, -0.1), degen::domain_error);
  CHECK_THROWS_AS(iterlog(0, 0.5), degen::precondition_error);
  // offending level is named
  try {
    iterlog(3, 0.5);
    CHECK(false);
  } catch (const degen::domain_error& e) {
    CHECK(std::string(e.what()).find("level") != std::string::npos);
  }
}

TEST_CASE("geometry construction and r_max") {
  CHECK_THROWS_AS(Geometry(0, 0.5), degen::precondition_error);
  CHECK_THROWS_AS(Geometry(1, 0.0), degen::precondition_error);
  const Geometry g1(1, 0.5);
  CHECK(g1.r_max() == doctest::Approx(std::exp(-1.1)));
  const Geometry g2(2, 1.0);
  CHECK(g2.r_max() == doctest::Approx(std::exp(-std::exp(1.1))));
}

TEST_CASE("k=1 closed forms") {
  const Geometry g(1, 0.5);
  const auto d = g.derivatives(std::exp(-4.0));
  CHECK(d.F == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(d.f == doctest::Approx(std::exp(-8.0)).epsilon(1e-13));
  CHECK(d.dF == doctest::Approx(-3.0 * std::exp(4.0)).epsilon(1e-13));
  CHECK(d.d2F > 0.0);
}

TEST_CASE("analytic derivatives match finite differences") {
  for (auto [k, sigma] : {std::pair{1, 0.5}, {1, 1.0}, {2, 1.0}, {3, 0.7}}) {
    const Geometry g(k, sigma);
    for (double r : log_grid(g.r_max() * 1e-4, g.r_max() / 2.0, 12)) {
      const double h = 1e-6 * r;
      const auto d = g.derivatives(r);
      const double fd1 = (g.derivatives(r + h).F - g.derivatives(r - h).F) / (2.0 * h);
      const double fd2 =
          (g.derivatives(r + h).dF - g.derivatives(r - h).dF) / (2.0 * h);
      CHECK(d.dF == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(d.d2F == doctest::Approx(fd2).epsilon(1e-5));
    }
  }
}

TEST_CASE("k >= 2: -F' is comparable to F/(r ln(1/r))") {
  const Geometry g(2, 1.0);
  for (double r : log_grid(g.r_max() * 1e-6, g.r_max() / 2.0, 30)) {
    const auto d = g.derivatives(r);
    const double comp = d.F / (r * std::log(1.0 / r));
    CHECK(-d.dF >= comp / 2.0);
    CHECK(-d.dF <= comp * 2.0);
  }
}

TEST_CASE("structural conditions for the log-power family") {
  const auto grid = log_grid(1e-6, 0.1, 200);

  const auto rep_half = structural_check(Geometry(1, 0.5).profile(), grid);
  CHECK(rep_half.pass());
  CHECK(rep_half.monotone_ok);

  // sigma = 0 limit F = ln(1/r): condition (4) is borderline-constant with
  // -r F' == 1, reported as pass with epsilon = 1
  const auto rep_lim = structural_check(degen::log_power_profile(1.0), grid);
  CHECK(rep_lim.f_vanishes);
  CHECK(rep_lim.signs_ok);
  CHECK(rep_lim.monotone_ok);
  CHECK(rep_lim.epsilon == doctest::Approx(1.0).epsilon(1e-9));

  // F = (ln 1/r)^2: passes, -r F' = 2 ln(1/r) increasing
  const auto rep_sq = structural_check(Geometry(1, 1.0).profile(), grid);
  CHECK(rep_sq.pass());

  const auto grid2 = log_grid(1e-6, Geometry(2, 1.0).r_max() * 0.9, 200);
  CHECK(structural_check(Geometry(2, 1.0).profile(), grid2).pass());
}

TEST_CASE("superradius: values, exponent comparison, monotonicity") {
  const Geometry g(1, 0.5);
  SuperradiusSpec spec{3.0, 1.0, g.profile()};

  // |F'|^2/F'' is within a factor 2 of (ln 1/r)^sigma for sigma <= 1
  for (double r : log_grid(1e-8, g.r_max() / 2.0, 40)) {
    const auto d = g.derivatives(r);
    const double x = d.dF * d.dF / d.d2F;
    const double target = std::pow(std::log(1.0 / r), 0.5);
    CHECK(x >= target / 2.0);
    CHECK(x <= target * 2.0);
    CHECK(degen::superradius(spec, r) >= r);
  }

  // ln(phi(r)/r) comparable to C_m (ln^{(k)} 1/r)^{sigma(m-1)}
  double cmp_lo = 1e300, cmp_hi = 0.0;
  for (double r : log_grid(1e-8, g.r_max() / 4.0, 40)) {
    const double lhs = degen::log_superradius(spec, r) - std::log(r);
    const double rhs = std::pow(iterlog(1, r), 0.5 * 2.0);
    cmp_lo = std::min(cmp_lo, lhs / rhs);
    cmp_hi = std::max(cmp_hi, lhs / rhs);
  }
  CHECK(cmp_lo > 0.2);
  CHECK(cmp_hi < 12.0);

  // monotone on the validity range (0, beta_{m,sigma}]; with C_m = 1 the
  // range is small -- for (k=1, sigma=0.4, m=3) the derivative flips sign
  // once (ln 1/r)^{1 - sigma(m-1)} falls below the structural constant
  // with C_m = 1 the sign of d ln(phi)/d ln(r) flips near ln r = -23
  SuperradiusSpec ok1{3.0, 1.0, Geometry(1, 0.4).profile()};
  CHECK(degen::superradius_monotonicity_defect(ok1, log_grid(1e-14, 1e-11, 1000)) >= -1e-12);
  // and it genuinely fails beyond the validity radius
  CHECK(degen::superradius_monotonicity_defect(ok1, log_grid(1e-6, 0.2, 200)) < 0.0);

  SuperradiusSpec ok2{3.0, 1.0, Geometry(2, 1.0).profile()};
  CHECK(degen::superradius_monotonicity_defect(ok2, log_grid(1e-10, 1e-4, 1000)) >= -1e-12);

  // negative control: k = 1, sigma (m-1) > 1 fails as r -> 0, i.e. on every
  // small-r range rather than beyond some validity radius
  SuperradiusSpec bad{3.0, 1.0, Geometry(1, 1.5).profile()};
  CHECK(degen::superradius_monotonicity_defect(bad, log_grid(1e-8, 1e-5, 1000)) < -1e-6);
  CHECK(degen::superradius_monotonicity_defect(bad, log_grid(1e-8, 0.2, 1000)) < -1e-6);
}

TEST_CASE("ball volume comparator") {
  const Geometry g(1, 0.5);
  const double est = degen::ball_volume_estimate(g.profile(), std::exp(-4.0));
  CHECK(est == doctest::Approx(std::exp(-8.0) / (9.0 * std::exp(8.0))).epsilon(1e-12));
}

TEST_CASE("geometry json round-trip") {
  const Geometry g(2, 0.75);
  const auto j = g.to_json();
  const Geometry back = Geometry::from_json(j);
  CHECK(back.k() == 2);
  CHECK(back.sigma() == doctest::Approx(0.75));
}
