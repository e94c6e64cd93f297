#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lclab/measure.hpp"
#include "lclab/measure_io.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using lclab::HalfLineMeasure;
using lclab::Piece;

TEST_CASE("moment golden cases") {
  SUBCASE("atom formula") {
    auto mu = HalfLineMeasure::dirac(2.0);
    CHECK(mu.moment(1.0, 3) ==
          doctest::Approx((4.0 / 3.0) * std::exp(-2.0)).epsilon(1e-14));
  }
  SUBCASE("exponential closed form") {
    auto mu = HalfLineMeasure::exponential(1.0);
    CHECK(mu.moment(1.0, 2) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    for (int n = 0; n <= 25; ++n)
      CHECK(mu.moment(0.5, n) ==
            doctest::Approx(std::pow(1.5, -(n + 1.0))).epsilon(1e-13));
  }
  SUBCASE("uniform direct integral") {
    auto mu = HalfLineMeasure::uniform(1.0, 2.0);
    CHECK(mu.moment(1.0, 0) ==
          doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-14));
  }
  SUBCASE("t = 0 with compact support") {
    auto mu = HalfLineMeasure::uniform(0.0, 2.0);
    CHECK(mu.moment(0.0, 1) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("t = 0 on unbounded support diverges") {
    auto mu = HalfLineMeasure::exponential(1.0);
    CHECK_THROWS_AS(lclab::exponential_tilt(mu, -1.0), std::domain_error);
  }
  SUBCASE("zero measure") {
    CHECK(HalfLineMeasure::zero().moment(1.0, 4) == 0.0);
  }
}

TEST_CASE("scaled moments stay bounded for huge n") {
  auto mu = HalfLineMeasure::uniform(1.0, 2.0);
  double sum = 0.0;
  for (int n = 0; n <= 1400; ++n) {
    const double v = mu.scaled_moment(400.0, n);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));  // total Poisson mass
  // consistency with the plain moment in the small-n regime
  for (int n = 0; n <= 40; ++n)
    CHECK(mu.scaled_moment(2.0, n) ==
          doctest::Approx(std::pow(2.0, n) * mu.moment(2.0, n)).epsilon(1e-11));
}

TEST_CASE("monomial reweight") {
  auto mu = HalfLineMeasure::uniform(1.0, 2.0);
  CHECK(lclab::monomial_reweight(mu, 0).moment(1.0, 2) == mu.moment(1.0, 2));

  auto lifted = lclab::monomial_reweight(mu, 1);
  REQUIRE(lifted.pieces().size() == 1);
  CHECK(lifted.pieces()[0].coeffs == std::vector<double>{0.0, 1.0});
  CHECK(lifted.density_at(1.5) == doctest::Approx(1.5));

  auto atom = lclab::monomial_reweight(HalfLineMeasure::dirac(3.0), 2);
  REQUIRE(atom.atoms().size() == 1);
  CHECK(atom.atoms()[0].w == doctest::Approx(4.5));
}

TEST_CASE("exponential tilt") {
  auto mu = HalfLineMeasure::uniform(1.0, 2.0);
  SUBCASE("t = 0 is the identity") {
    CHECK(lclab::exponential_tilt(mu, 0.0).moment(1.0, 1) == mu.moment(1.0, 1));
  }
  SUBCASE("atom weight") {
    auto tilted = lclab::exponential_tilt(HalfLineMeasure::dirac(1.0), 2.0);
    CHECK(tilted.atoms()[0].w == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  }
  SUBCASE("semigroup law") {
    auto once = lclab::exponential_tilt(lclab::exponential_tilt(mu, 1.0), 1.0);
    auto twice = lclab::exponential_tilt(mu, 2.0);
    for (double t : {0.25, 1.0, 3.0})
      CHECK(once.moment(t, 0) == doctest::Approx(twice.moment(t, 0)).epsilon(1e-12));
    CHECK(once.interval_mass(0.0, 1.5) ==
          doctest::Approx(twice.interval_mass(0.0, 1.5)).epsilon(1e-12));
  }
  SUBCASE("negative tilt keeps bounded pieces finite") {
    auto tilted = lclab::exponential_tilt(mu, -0.5);
    const double direct = oracle::adaptive_simpson(
        [](double x) { return std::exp(0.5 * x); }, 1.0, 2.0);
    CHECK(tilted.moment(0.0, 0) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("convolution golden cases") {
  SUBCASE("two atoms") {
    auto c = convolve(HalfLineMeasure::dirac(1.5), HalfLineMeasure::dirac(2.0, 0.5));
    REQUIRE(c.atoms().size() == 1);
    CHECK(c.atoms()[0].x == doctest::Approx(3.5));
    CHECK(c.atoms()[0].w == doctest::Approx(0.5));
  }
  SUBCASE("uniform square gives the triangle density") {
    auto c = convolve(HalfLineMeasure::uniform(0.0, 1.0), HalfLineMeasure::uniform(0.0, 1.0));
    CHECK(c.density_at(0.25) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(c.density_at(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.density_at(1.75) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("ramp density squared, value frozen from the quadrature oracle") {
    HalfLineMeasure ramp({}, {Piece{1.0, 2.0, {0.0, 1.0}, 0.0}});
    auto c = convolve(ramp, ramp);
    const double direct = oracle::adaptive_simpson(
        [](double x) { return x * (3.0 - x); }, 1.0, 2.0);
    CHECK(direct == doctest::Approx(13.0 / 6.0).epsilon(1e-12));
    CHECK(c.density_at(3.0) == doctest::Approx(13.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("matching exponential rates convolve exactly") {
    auto c = convolve(HalfLineMeasure::exponential(1.0), HalfLineMeasure::exponential(1.0));
    // the result is the gamma(2,1) density x e^{-x}
    for (double x : {0.5, 1.0, 2.5})
      CHECK(c.density_at(x) == doctest::Approx(x * std::exp(-x)).epsilon(1e-13));
    CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("mixed rates are rejected") {
    CHECK_THROWS_AS(convolve(HalfLineMeasure::exponential(1.0),
                             HalfLineMeasure::exponential(2.0)),
                    std::invalid_argument);
  }
  SUBCASE("atom translate of a piece") {
    auto c = convolve(HalfLineMeasure::dirac(2.0), HalfLineMeasure::uniform(0.0, 1.0));
    CHECK(c.density_at(2.5) == doctest::Approx(1.0));
    CHECK(c.density_at(1.5) == 0.0);
  }
}

TEST_CASE("convolution matches adaptive quadrature on random pairs") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = gen::random_measure(rng, false);
    auto b = gen::random_measure(rng, false);
    auto c = convolve(a, b);
    // one random target point inside the support of the result
    const auto& ps = c.pieces();
    if (ps.empty()) continue;
    const double lo = ps.front().lo, hi = ps.back().hi;
    const double s = lo + (hi - lo) * (0.1 + 0.8 * unit(rng));
    std::vector<double> breaks;
    for (const auto& p : a.pieces()) {
      breaks.push_back(p.lo);
      breaks.push_back(p.hi);
    }
    for (const auto& p : b.pieces()) {
      breaks.push_back(s - p.lo);
      breaks.push_back(s - p.hi);
    }
    const double direct = oracle::quadrature_with_breaks(
        [&](double x) { return a.density_at(x) * b.density_at(s - x); }, 0.0, s,
        breaks, 1e-13);
    CAPTURE(trial);
    CAPTURE(s);
    REQUIRE(c.density_at(s) ==
            doctest::Approx(direct).epsilon(1e-8).scale(std::max(1.0, direct)));
  }
}

TEST_CASE("moment is linear in the measure") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> coef(0.1, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = gen::random_measure(rng);
    auto b = gen::random_measure(rng);
    const double ca = coef(rng), cb = coef(rng);
    auto mix = combine(a, b, ca, cb);
    for (double t : {0.5, 2.0})
      for (int n : {0, 1, 4}) {
        const double want = ca * a.moment(t, n) + cb * b.moment(t, n);
        CAPTURE(trial);
        REQUIRE(mix.moment(t, n) == doctest::Approx(want).epsilon(1e-12));
      }
  }
}

TEST_CASE("Laplace transform of a convolution factorizes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    auto a = gen::random_measure(rng);
    auto b = gen::random_measure(rng);
    auto c = convolve(a, b);
    for (double t : {0.5, 1.0, 2.0}) {
      CAPTURE(trial);
      REQUIRE(c.moment(t, 0) ==
              doctest::Approx(a.moment(t, 0) * b.moment(t, 0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("interval mass") {
  SUBCASE("half weight at the right endpoint") {
    auto mu = HalfLineMeasure::dirac(2.0);
    CHECK(mu.interval_mass(0.0, 2.0, true) == 0.5);
    CHECK(mu.interval_mass(0.0, 2.0, false) == 0.0);
  }
  SUBCASE("uniform") {
    auto mu = HalfLineMeasure::uniform(1.0, 2.0);
    CHECK(mu.interval_mass(0.0, 1.5) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("empty measure") {
    CHECK(HalfLineMeasure::zero().interval_mass(0.0, 10.0) == 0.0);
  }
}

TEST_CASE("log-concavity certification of measures") {
  CHECK(lclab::certify_log_concave_measure(HalfLineMeasure::dirac(5.0)).pass);
  CHECK(lclab::certify_log_concave_measure(HalfLineMeasure::uniform(1.0, 2.0)).pass);
  CHECK(lclab::certify_log_concave_measure(HalfLineMeasure::exponential(1.0)).pass);
  CHECK(lclab::certify_log_concave_measure(HalfLineMeasure::gamma_integer(2, 1.0)).pass);

  // density x on [0,1)
  HalfLineMeasure ramp({}, {Piece{0.0, 1.0, {0.0, 1.0}, 0.0}});
  CHECK(lclab::certify_log_concave_measure(ramp).pass);

  // mixed atom + density fails
  HalfLineMeasure mixed({lclab::Atom{0.0, 0.5}}, {Piece{0.0, 1.0, {0.0, 0.0, 1.0}, 0.0}});
  const auto mixed_report = lclab::certify_log_concave_measure(mixed);
  CHECK_FALSE(mixed_report.pass);
  CHECK(mixed_report.reason.find("mixture") != std::string::npos);

  // two atoms fail
  CHECK_FALSE(lclab::certify_log_concave_measure(
                  HalfLineMeasure({{1.0, 1.0}, {2.0, 1.0}}, {})).pass);

  // gap in the support fails
  HalfLineMeasure gap({}, {Piece{0.0, 1.0, {1.0}, 0.0}, Piece{2.0, 3.0, {1.0}, 0.0}});
  CHECK_FALSE(lclab::certify_log_concave_measure(gap).pass);

  // convex bump (density 1 + (x-1)^2) is not log-concave
  HalfLineMeasure bump({}, {Piece{0.0, 2.0, {2.0, -2.0, 1.0}, 0.0}});
  CHECK_FALSE(lclab::certify_log_concave_measure(bump).pass);

  // every library member certifies
  for (const auto& [name, mu] : gen::measure_library()) {
    CAPTURE(name);
    CHECK(lclab::certify_log_concave_measure(mu).pass);
  }
}

TEST_CASE("JSON round trip preserves moments") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 10; ++trial) {
    auto mu = gen::random_measure(rng);
    auto back = lclab::measure_from_json_text(lclab::measure_to_json_text(mu));
    for (double t : {0.5, 2.0})
      CHECK(back.moment(t, 1) == doctest::Approx(mu.moment(t, 1)).epsilon(1e-15));
  }
  // unbounded pieces survive the trip
  auto exp_back = lclab::measure_from_json_text(
      lclab::measure_to_json_text(HalfLineMeasure::exponential(2.0)));
  CHECK(exp_back.pieces()[0].unbounded());
  CHECK(exp_back.moment(1.0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("named measure grammar") {
  CHECK(lclab::parse_named_measure("dirac(2)").atoms().size() == 1);
  CHECK(lclab::parse_named_measure("uniform(1, 2)").pieces().size() == 1);
  CHECK(lclab::parse_named_measure("exponential(0.5)").pieces()[0].rate == 0.5);
  CHECK(lclab::parse_named_measure("gamma(2,1)").pieces()[0].coeffs.size() == 2);
  CHECK_THROWS_AS(lclab::parse_named_measure("gamma(1.5,1)"), std::invalid_argument);
  CHECK_THROWS_AS(lclab::parse_named_measure("cauchy(1)"), std::invalid_argument);
  CHECK_THROWS_AS(lclab::parse_named_measure("uniform(1,2"), std::invalid_argument);
  CHECK_THROWS_AS(lclab::parse_named_measure("uniform(1,x)"), std::invalid_argument);
}

TEST_CASE("total variation") {
  CHECK(lclab::total_variation(HalfLineMeasure::dirac(1.0, -0.5)) ==
        doctest::Approx(0.5));
  CHECK(lclab::total_variation(HalfLineMeasure::uniform(0.0, 2.0)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}
