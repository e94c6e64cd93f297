#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lclab/berwald.hpp"
#include "support/generators.hpp"

using lclab::HalfLineMeasure;
using lclab::MeasureMomentSource;
using lclab::Quadruple;

namespace {

double figure_density(double s) {
  if (s < 2.0 || s > 4.0) return 0.0;
  return s <= 3.0 ? (s - 1.0) * (s - 2.0) / 2.0 : (s - 2.0) * (4.0 - s);
}

}  // namespace

TEST_CASE("transform of the uniform measure matches the closed form") {
  const auto bb = lclab::bb_transform(HalfLineMeasure::uniform(1.0, 2.0),
                                      Quadruple(0, 1, 1, 2));
  for (int i = 0; i <= 200; ++i) {
    const double s = 2.0 + 2.0 * i / 200.0;
    CAPTURE(s);
    REQUIRE(bb.nu.density_at(s) == doctest::Approx(figure_density(s)).epsilon(1e-10));
  }
  CHECK(bb.nu.density_at(3.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_FALSE(bb.nu.is_signed());
  CHECK(bb.nu_log_concave.has_value());  // recorded, not asserted
}

TEST_CASE("transform of an atom") {
  const auto bb = lclab::bb_transform(HalfLineMeasure::dirac(1.0), Quadruple(0, 1, 1, 2));
  REQUIRE(bb.nu.atoms().size() == 1);
  CHECK(bb.nu.atoms()[0].x == doctest::Approx(2.0));
  CHECK(bb.nu.atoms()[0].w == doctest::Approx(0.5));
  CHECK(bb.nu.pieces().empty());
}

TEST_CASE("transform of exponentials vanishes") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto bb = lclab::bb_transform(HalfLineMeasure::exponential(alpha),
                                        Quadruple(0, 1, 1, 2));
    CAPTURE(alpha);
    CHECK(lclab::total_variation(bb.nu) <= 1e-12);
  }
}

TEST_CASE("non-log-concave input is rejected") {
  HalfLineMeasure bump({}, {lclab::Piece{0.0, 2.0, {2.0, -2.0, 1.0}, 0.0}});
  CHECK_THROWS_AS(lclab::bb_transform(bump, Quadruple(0, 1, 1, 2)),
                  std::invalid_argument);
}

TEST_CASE("Laplace identity") {
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  SUBCASE("uniform instance") {
    const auto bb = lclab::bb_transform(HalfLineMeasure::uniform(1.0, 2.0),
                                        Quadruple(0, 1, 1, 2));
    const auto report = lclab::verify_laplace_identity(bb, grid);
    CHECK(report.pass);
  }
  SUBCASE("atom instance is exact") {
    const auto bb = lclab::bb_transform(HalfLineMeasure::dirac(1.0), Quadruple(0, 1, 1, 2));
    const auto report = lclab::verify_laplace_identity(bb, grid);
    CHECK(report.pass);
    CHECK(report.max_rel_err < 1e-14);
  }
  SUBCASE("vanishing instance") {
    const auto bb = lclab::bb_transform(HalfLineMeasure::exponential(1.0),
                                        Quadruple(1, 2, 2, 3));
    CHECK(lclab::verify_laplace_identity(bb, grid).pass);
  }
}

TEST_CASE("complete monotonicity certificates") {
  const auto grid = lclab::geometric_grid(0.25, 8.0, 17);
  SUBCASE("uniform") {
    MeasureMomentSource src(HalfLineMeasure::uniform(1.0, 2.0));
    const auto report =
        lclab::complete_monotonicity_certificate(src, Quadruple(0, 1, 1, 2), grid, 4);
    CHECK(report.pass);
  }
  SUBCASE("gamma closed form and its Laplace fit") {
    auto src = lclab::GammaMomentSource::normalized(2.0, 1.0);
    const Quadruple q(1, 2, 2, 3);
    const auto report = lclab::complete_monotonicity_certificate(src, q, grid, 4);
    CHECK(report.pass);
    // measurement(t) = C (t+1)^-(l+m+2p), C from the moment formula
    const double C = std::tgamma(q.l + 2.0) * std::tgamma(q.m + 2.0) /
                         (std::tgamma(q.l + 1.0) * std::tgamma(q.m + 1.0)) -
                     std::tgamma(q.k + 2.0) * std::tgamma(q.n + 2.0) /
                         (std::tgamma(q.k + 1.0) * std::tgamma(q.n + 1.0));
    for (double t : grid) {
      const double want = C * std::pow(t + 1.0, -(q.l + q.m + 4.0));
      CAPTURE(t);
      REQUIRE(lclab::measurement(src, q, t) == doctest::Approx(want).epsilon(1e-8));
    }
  }
  SUBCASE("exponential gives identical zeros") {
    MeasureMomentSource src(HalfLineMeasure::exponential(2.0));
    const auto report =
        lclab::complete_monotonicity_certificate(src, Quadruple(0, 2, 2, 4), grid, 4);
    CHECK(report.pass);
    CHECK(std::abs(report.min_rel_value) < 1e-12);
  }
}

TEST_CASE("library-wide transform certification") {
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  const auto cm_grid = lclab::geometric_grid(0.25, 8.0, 9);
  for (const auto& [name, mu] : gen::measure_library()) {
    MeasureMomentSource src(mu);
    for (const auto& q : lclab::enumerate_quadruples(6)) {
      CAPTURE(name);
      CAPTURE(lclab::to_string(q));
      const auto bb = lclab::bb_transform(mu, q);
      REQUIRE(lclab::verify_laplace_identity(bb, grid).pass);
      REQUIRE(lclab::complete_monotonicity_certificate(src, q, cm_grid, 3).pass);
    }
  }
}

TEST_CASE("tilt equivariance") {
  const auto mu = HalfLineMeasure::uniform(1.0, 2.0);
  const Quadruple q(0, 1, 1, 2);
  const auto bb = lclab::bb_transform(mu, q);
  for (double s : {0.5, 1.0}) {
    const auto tilted_nu = lclab::exponential_tilt(bb.nu, s);
    MeasureMomentSource tilted_src(lclab::exponential_tilt(mu, s));
    for (double t : {0.5, 1.0, 2.0}) {
      const double lhs = tilted_nu.moment(t, 0);
      const double rhs = lclab::measurement(tilted_src, q, t);
      CAPTURE(s);
      CAPTURE(t);
      REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("rational replay of the closed-form density") {
  CHECK(lclab::figure1_exact_check());
}
