#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lclab/discrete_pl.hpp"

using lclab::FourFunctions;
using lclab::IntensityPolicy;
using lclab::IntFn;
using lclab::PlanarNoise;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

IntFn constant_window(long long lo, long long hi, double value) {
  IntFn f;
  f.lo = lo;
  f.vals.assign(static_cast<size_t>(hi - lo + 1), value);
  return f;
}

FourFunctions log2_bump_instance() {
  // f = (0, log 2, 0) on {0,1,2}, g = 0 on {0,1}, h = k tight.
  FourFunctions q;
  q.f = IntFn{0, {0.0, std::log(2.0), 0.0}};
  q.g = IntFn{0, {0.0, 0.0}};
  auto [h, k] = lclab::tight_hk(q.f, q.g);
  q.h = h;
  q.k = k;
  return q;
}

IntFn random_window(std::mt19937_64& rng, int max_width, bool nonnegative_lo) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<int> width(1, max_width);
  std::uniform_int_distribution<long long> lo(nonnegative_lo ? 0 : -5, 5);
  IntFn f;
  f.lo = lo(rng);
  const int w = width(rng);
  for (int i = 0; i < w; ++i)
    f.vals.push_back((rng() & 7u) == 0 ? kNegInf : val(rng));
  if (std::all_of(f.vals.begin(), f.vals.end(),
                  [](double v) { return v == kNegInf; }))
    f.vals[0] = 0.0;
  return f;
}

}  // namespace

TEST_CASE("hypothesis golden cases") {
  SUBCASE("all-zero windows pass") {
    FourFunctions q;
    q.f = q.g = q.h = q.k = constant_window(0, 6, 0.0);
    CHECK(lclab::check_hypothesis(q).pass);
  }
  SUBCASE("concave quadratic passes") {
    FourFunctions q;
    IntFn quad;
    quad.lo = -6;
    for (long long x = -6; x <= 6; ++x)
      quad.vals.push_back(-static_cast<double>(x * x));
    q.f = q.g = q.h = q.k = quad;
    CHECK(lclab::check_hypothesis(q).pass);
  }
  SUBCASE("spike fails; (1,1) is a violating pair") {
    FourFunctions q;
    q.f = IntFn{0, {0.0, 1.0}};
    q.g = constant_window(0, 1, 0.0);
    q.h = constant_window(0, 1, 0.0);
    q.k = constant_window(0, 1, 0.0);
    const auto r = lclab::check_hypothesis(q);
    CHECK_FALSE(r.pass);
    // the scan reports the first witness; the reported pair really violates
    CHECK(q.f.at(r.x) + q.g.at(r.y) > r.rhs);
    CHECK(q.f.at(1) + q.g.at(1) > q.h.at(1) + q.k.at(1));
  }
}

TEST_CASE("tight majorants") {
  SUBCASE("log2 bump instance") {
    const auto q = log2_bump_instance();
    const double half_log2 = 0.5 * std::log(2.0);
    CHECK(q.h.at(0) == doctest::Approx(half_log2));
    CHECK(q.h.at(1) == doctest::Approx(half_log2));
    CHECK(q.h.at(2) == doctest::Approx(0.0));
  }
  SUBCASE("zero singleton") {
    auto [h, k] = lclab::tight_hk(IntFn{0, {0.0}}, IntFn{0, {0.0}});
    CHECK(h.at(0) == 0.0);
    CHECK(k.at(0) == 0.0);
  }
  SUBCASE("hypothesis holds by construction with equality at odd sums") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      FourFunctions q;
      q.f = random_window(rng, 8, false);
      q.g = random_window(rng, 8, false);
      auto [h, k] = lclab::tight_hk(q.f, q.g);
      q.h = h;
      q.k = k;
      CAPTURE(trial);
      REQUIRE(lclab::check_hypothesis(q).pass);
      // the construction is tight: equality at the global argmax of f + g
      double best = kNegInf;
      long long best_s = 0;
      for (long long x = q.f.lo; x <= q.f.hi(); ++x)
        for (long long y = q.g.lo; y <= q.g.hi(); ++y) {
          const double v = q.f.at(x) + q.g.at(y);
          if (v > best) {
            best = v;
            best_s = x + y;
          }
        }
      if (best > kNegInf) {
        const long long z = best_s >= 0 ? best_s / 2 : (best_s - 1) / 2;
        CHECK(q.h.at(z) + q.k.at(best_s - z) == doctest::Approx(best).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("counting conclusion") {
  SUBCASE("all-zero equality") {
    FourFunctions q;
    q.f = q.g = q.h = q.k = constant_window(0, 4, 0.0);
    REQUIRE(lclab::check_hypothesis(q).pass);
    const auto r = lclab::check_conclusion_counting(q);
    CHECK(r.lhs == doctest::Approx(25.0));
    CHECK(r.rhs == doctest::Approx(25.0));
    CHECK(r.pass);
  }
  SUBCASE("log2 bump instance evaluates to 8 vs 9 + 4 sqrt 2") {
    auto q = log2_bump_instance();
    REQUIRE(lclab::check_hypothesis(q).pass);
    const auto r = lclab::check_conclusion_counting(q);
    CHECK(r.lhs == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(r.rhs == doctest::Approx(9.0 + 4.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.pass);
  }
  SUBCASE("unchecked hypothesis is a precondition error") {
    FourFunctions q;
    q.f = q.g = q.h = q.k = constant_window(0, 2, 0.0);
    CHECK_THROWS_AS(lclab::check_conclusion_counting(q), std::logic_error);
  }
}

TEST_CASE("Poisson conclusion") {
  SUBCASE("constant windows give equality") {
    FourFunctions q;
    q.f = q.g = q.h = q.k = constant_window(0, 30, 0.7);
    REQUIRE(lclab::check_hypothesis(q).pass);
    const auto r = lclab::check_conclusion_poisson(q, 1.0);
    CHECK(r.pass);
    // windows wide enough that the truncated tail is negligible
    CHECK(r.lhs == doctest::Approx(std::exp(1.4)).epsilon(1e-9));
  }
  SUBCASE("log2 bump instance is strict") {
    auto q = log2_bump_instance();
    REQUIRE(lclab::check_hypothesis(q).pass);
    const auto r = lclab::check_conclusion_poisson(q, 1.0);
    CHECK(r.pass);
    CHECK(r.lhs < r.rhs);
  }
  SUBCASE("identical concave quadratics give equality") {
    FourFunctions q;
    IntFn quad;
    quad.lo = 0;
    for (long long x = 0; x <= 10; ++x)
      quad.vals.push_back(-0.25 * static_cast<double>((x - 5) * (x - 5)));
    q.f = q.g = q.h = q.k = quad;
    REQUIRE(lclab::check_hypothesis(q).pass);
    const auto r = lclab::check_conclusion_poisson(q, 1.0);
    CHECK(r.pass);
    CHECK(r.lhs == r.rhs);
  }
  SUBCASE("negative windows are rejected") {
    FourFunctions q;
    q.f = q.g = q.h = q.k = constant_window(-1, 1, 0.0);
    REQUIRE(lclab::check_hypothesis(q).pass);
    CHECK_THROWS_AS(lclab::check_conclusion_poisson(q, 1.0), std::invalid_argument);
  }
}

TEST_CASE("randomized tight instances never violate either conclusion") {
  std::mt19937_64 rng(60902);
  for (int trial = 0; trial < 200; ++trial) {
    FourFunctions q;
    q.f = random_window(rng, 15, true);
    q.g = random_window(rng, 15, true);
    auto [h, k] = lclab::tight_hk(q.f, q.g);
    q.h = h;
    q.k = k;
    CAPTURE(trial);
    REQUIRE(lclab::check_hypothesis(q).pass);
    REQUIRE(lclab::check_conclusion_counting(q).pass);
    for (double T : {0.5, 1.0, 2.0}) REQUIRE(lclab::check_conclusion_poisson(q, T).pass);
  }
}

TEST_CASE("floor and ceil coupling") {
  SUBCASE("identical policies collapse") {
    for (int i = 0; i < 50; ++i) {
      const auto noise = PlanarNoise::sample(1.0, 2.0, 77, static_cast<std::uint64_t>(i));
      const auto r = lclab::coupling_check(IntensityPolicy::constant(2.0),
                                           IntensityPolicy::constant(2.0), noise);
      REQUIRE(r.pass);
      REQUIRE(r.max_rate_swap_defect == 0.0);
    }
  }
  SUBCASE("constant pair over many noises") {
    long long mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto noise = PlanarNoise::sample(1.0, 2.0, 13, static_cast<std::uint64_t>(i));
      const auto r = lclab::coupling_check(IntensityPolicy::constant(2.0),
                                           IntensityPolicy::constant(1.0), noise);
      mismatches += r.mismatches;
    }
    CHECK(mismatches == 0);
  }
  SUBCASE("state-dependent pair") {
    auto alpha = IntensityPolicy::from_markov(2.0, [](double t, long long x) {
      return std::min(2.0, 0.5 + 0.3 * static_cast<double>(x) + 0.2 * t);
    });
    auto beta = IntensityPolicy::from_markov(1.5, [](double, long long x) {
      return x % 2 == 0 ? 1.5 : 0.25;
    });
    for (int i = 0; i < 500; ++i) {
      const auto noise = PlanarNoise::sample(1.5, 2.0, 99, static_cast<std::uint64_t>(i));
      const auto r = lclab::coupling_check(alpha, beta, noise);
      CAPTURE(i);
      REQUIRE(r.pass);
      REQUIRE(r.max_rate_swap_defect <= 1e-12);
    }
  }
  SUBCASE("vanishing first policy halves the second") {
    for (int i = 0; i < 200; ++i) {
      const auto noise = PlanarNoise::sample(1.0, 1.0, 3, static_cast<std::uint64_t>(i));
      const auto r = lclab::coupling_check(IntensityPolicy::constant(0.0),
                                           IntensityPolicy::constant(1.0), noise);
      CAPTURE(i);
      REQUIRE(r.pass);
    }
  }
}

TEST_CASE("shifted Poisson limit experiment") {
  SUBCASE("flat window approaches its width") {
    FourFunctions q;
    q.f = q.g = q.h = q.k = constant_window(-5, 5, 0.0);
    REQUIRE(lclab::check_hypothesis(q).pass);
    const long long ns[] = {200};
    const auto rows = lclab::stirling_limit_experiment(q, ns);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].target_f == doctest::Approx(11.0));
    // frozen from the exact shifted-Poisson sum at n = 200
    CHECK(rows[0].s_f == doctest::Approx(10.727489509649768).epsilon(1e-12));
    CHECK(std::abs(rows[0].s_f - 11.0) <= 0.05 * 11.0);
  }
  SUBCASE("shifted inequality holds along the sequence") {
    auto q = log2_bump_instance();
    REQUIRE(lclab::check_hypothesis(q).pass);
    const long long ns[] = {10, 50, 200};
    const auto rows = lclab::stirling_limit_experiment(q, ns);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
      CAPTURE(row.n);
      REQUIRE(row.shifted_inequality_pass);
    }
    // convergence trend recorded: gaps shrink with n
    CHECK(std::abs(rows[2].s_f - rows[2].target_f) <
          std::abs(rows[0].s_f - rows[0].target_f));
  }
}
