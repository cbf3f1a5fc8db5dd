#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "span_shrink/specfun.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace ss = span_shrink;

// Reference values below were computed with 30-digit arithmetic.

TEST_CASE("erf and erfc at reference points") {
  CHECK_THAT(ss::erf(0.5), WithinAbs(0.520499877813046537682746653892, 1e-15));
  CHECK_THAT(ss::erfc(5.0), WithinRel(1.53745979442803485018834348538e-12, 1e-12));
  CHECK(ss::erf(0.0) == 0.0);
  CHECK(ss::erfc(0.0) == 1.0);
}

TEST_CASE("erf identities") {
  for (double x = -6.0; x <= 6.0; x += 0.0625) {
    CHECK_THAT(ss::erf(x) + ss::erfc(x), WithinAbs(1.0, 1e-12));
    CHECK_THAT(ss::erf(-x), WithinAbs(-ss::erf(x), 1e-12));
    CHECK_THAT(ss::erfc(-x), WithinAbs(2.0 - ss::erfc(x), 1e-12));
  }
}

TEST_CASE("erf agrees with the integral of its density") {
  for (double x : {0.1, 0.7, 1.3, 2.5}) {
    const double q = oracle::integrate(
        [](double t) { return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-t * t); }, 0.0,
        x);
    CHECK_THAT(ss::erf(x), WithinAbs(q, 1e-12));
  }
}

TEST_CASE("erf_chu closed form and accuracy") {
  CHECK_THAT(ss::erf_chu(1.0), WithinAbs(0.848573316100977496753472263405, 1e-14));
  CHECK(ss::erf_chu(0.0) == 0.0);
  for (double x = 0.0; x <= 4.0; x += 0.05) {
    CHECK(std::abs(ss::erf_chu(x) - ss::erf(x)) < 6.5e-3);
  }
  CHECK_THROWS_AS(ss::erf_chu(-0.1), ss::DomainError);
}

TEST_CASE("normal density and distribution") {
  CHECK_THAT(ss::std_normal_cdf(1.0), WithinAbs(0.841344746068542948585232545632, 1e-15));
  CHECK_THAT(ss::std_normal_cdf(0.0), WithinAbs(0.5, 1e-16));
  CHECK_THAT(ss::std_normal_pdf(0.0), WithinAbs(1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16));
  CHECK_THAT(ss::std_normal_cdf(2.0, 2.0), WithinAbs(ss::std_normal_cdf(1.0), 1e-15));
  const double mass = oracle::integrate_panels(
      [](double x) { return ss::std_normal_pdf(x, 3.0); }, -40.0, 40.0, 16);
  CHECK_THAT(mass, WithinAbs(1.0, 1e-10));
  CHECK_THROWS_AS(ss::std_normal_pdf(0.0, 0.0), ss::DomainError);
  CHECK_THROWS_AS(ss::std_normal_cdf(0.0, -1.0), ss::DomainError);
}

TEST_CASE("harmonic numbers") {
  CHECK(ss::harmonic(0) == 0.0);
  CHECK(ss::harmonic(1) == 1.0);
  CHECK_THAT(ss::harmonic(4), WithinAbs(25.0 / 12.0, 1e-15));
  CHECK_THAT(ss::harmonic(100), WithinAbs(5.18737751763962, 1e-13));
  CHECK(std::abs(ss::harmonic(100) - (std::log(100.0) + ss::kEulerGamma)) < 0.006);
}
