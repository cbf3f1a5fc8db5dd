#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "span_shrink/order_stats.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace ss = span_shrink;

namespace {

// Beta(k, n-k+1) density scaled to [0, L].
double uniform_order_density(std::size_t n, std::size_t k, double L, double x) {
  const double t = x / L;
  const double log_c = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k)) -
                       std::lgamma(static_cast<double>(n - k) + 1.0);
  return std::exp(log_c) * std::pow(t, k - 1.0) * std::pow(1.0 - t, static_cast<double>(n - k)) / L;
}

double gaussian_order_mean(std::size_t n, std::size_t k) {
  return oracle::integrate_panels(
      [&](double x) { return x * ss::gaussian_order_stat_pdf(n, k, 1.0, x); }, -12.0, 12.0,
      48, 1e-13);
}

}  // namespace

TEST_CASE("uniform order statistic moments match quadrature") {
  for (std::size_t n : {2u, 5u, 17u, 40u}) {
    for (std::size_t k = 1; k <= n; k += 3) {
      const double L = 3.5;
      const double mean = oracle::integrate_panels(
          [&](double x) { return x * uniform_order_density(n, k, L, x); }, 0.0, L, 8);
      CHECK_THAT(ss::uniform_expected_order_stat(n, k, L), WithinAbs(mean, 1e-9));
      const double m2 = oracle::integrate_panels(
          [&](double x) { return x * x * uniform_order_density(n, k, L, x); }, 0.0, L, 8);
      CHECK_THAT(ss::uniform_order_stat_moment(n, k, L, 2), WithinAbs(m2, 1e-8));
      CHECK_THAT(ss::uniform_order_stat_moment(n, k, L, 1),
                 WithinRel(ss::uniform_expected_order_stat(n, k, L), 1e-14));
    }
  }
}

TEST_CASE("uniform trimmed diameter and exact p=1 ratio") {
  for (std::size_t n : {5u, 10u, 100u}) {
    for (std::size_t p = 0; 2 * p < n; ++p) {
      const double expected = ss::uniform_expected_order_stat(n, n - p, 2.0) -
                              ss::uniform_expected_order_stat(n, p + 1, 2.0);
      CHECK_THAT(ss::uniform_expected_trimmed_diameter(n, p, 2.0), WithinAbs(expected, 1e-14));
    }
  }
  CHECK_THROWS_AS(ss::uniform_expected_trimmed_diameter(10, 5, 1.0), ss::DomainError);
  CHECK(ss::uniform_exact_shrink_ratio_p1(3) == 0.5);
  CHECK_THAT(ss::uniform_exact_shrink_ratio_p1(100), WithinAbs(98.0 / 99.0, 1e-15));
  CHECK_THROWS_AS(ss::uniform_exact_shrink_ratio_p1(2), ss::DomainError);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(ss::uniform_expected_order_stat(10, 0, 1.0), ss::DomainError);
  CHECK_THROWS_AS(ss::uniform_expected_order_stat(10, 11, 1.0), ss::DomainError);
  CHECK_THROWS_AS(ss::uniform_expected_order_stat(10, 1, 0.0), ss::DomainError);
  CHECK_THROWS_AS(ss::uniform_order_stat_moment(10, 1, 1.0, 0), ss::DomainError);
  CHECK_THROWS_AS(ss::gaussian_expected_max_abs(1, 1.0), ss::DomainError);
  CHECK_THROWS_AS(ss::gaussian_expected_max_abs(10, -1.0), ss::DomainError);
  CHECK_THROWS_AS(ss::gaussian_order_stat_pdf(10, 11, 1.0, 0.0), ss::DomainError);
  CHECK_THROWS_AS(ss::gaussian_expected_order_stat_sum(100, 60, 1.0), ss::DomainError);
  CHECK_NOTHROW(ss::gaussian_expected_order_stat_sum(100, 70, 1.0));
}

TEST_CASE("extreme value estimates") {
  CHECK_THAT(ss::gaussian_expected_max_abs(100, 1.0), WithinAbs(2.68956955894720537, 1e-14));
  CHECK_THAT(ss::gaussian_expected_max_abs(100, 2.5),
             WithinRel(2.5 * ss::gaussian_expected_max_abs(100, 1.0), 1e-15));
  CHECK_THAT(ss::gaussian_expected_max_abs_refined(100, 1.0),
             WithinAbs(3.45184697590901434, 1e-14));
  CHECK_THAT(ss::gaussian_mean_shift_remove_max(100, 1.0), WithinAbs(0.027167369282295, 1e-14));
  CHECK_THAT(ss::uniform_mean_shift_remove_max(9, 4.0), WithinAbs(0.2, 1e-15));
}

TEST_CASE("gaussian order statistic densities integrate to one") {
  for (std::size_t n = 1; n <= 50; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const double mass = oracle::integrate_panels(
          [&](double x) { return ss::gaussian_order_stat_pdf(n, k, 1.0, x); }, -12.0, 12.0,
          24, 1e-12);
      CHECK_THAT(mass, WithinAbs(1.0, 1e-8));
    }
  }
}

TEST_CASE("gaussian order statistic densities sum to n times the parent") {
  for (std::size_t n : {1u, 2u, 7u, 30u}) {
    for (double x : {-3.0, -0.4, 0.0, 1.1, 2.7}) {
      double total = 0.0;
      for (std::size_t k = 1; k <= n; ++k) total += ss::gaussian_order_stat_pdf(n, k, 1.0, x);
      CHECK_THAT(total, WithinRel(n * ss::std_normal_pdf(x), 1e-11));
    }
  }
  CHECK_THAT(ss::gaussian_order_stat_pdf(1, 1, 2.0, 0.3), WithinRel(ss::std_normal_pdf(0.3, 2.0), 1e-13));
}

TEST_CASE("gaussian order statistic means are antisymmetric") {
  const std::size_t n = 9;
  for (std::size_t k = 1; k <= n; ++k) {
    CHECK_THAT(gaussian_order_mean(n, k), WithinAbs(-gaussian_order_mean(n, n + 1 - k), 1e-10));
  }
  // E[max of 2 standard normals] = 1/sqrt(pi).
  CHECK_THAT(gaussian_order_mean(2, 2), WithinAbs(1.0 / std::sqrt(std::numbers::pi), 1e-10));
}

TEST_CASE("harmonic and alternating-sum tail approximations") {
  SECTION("top rank coincides with the extreme value estimate") {
    for (std::size_t n : {10u, 100u, 499u}) {
      CHECK_THAT(ss::gaussian_expected_order_stat_harmonic(n, n, 1.0),
                 WithinRel(ss::gaussian_expected_max_abs(n, 1.0), 1e-14));
      CHECK_THAT(ss::gaussian_expected_order_stat_sum(n, n, 1.0),
                 WithinRel(ss::gaussian_expected_max_abs(n, 1.0), 1e-14));
    }
  }
  SECTION("reference values, n = 100") {
    const double u[] = {2.68957, 2.39755, 2.25155, 2.15421, 2.08120};
    const double v[] = {2.68957, 2.39592, 2.23220, 2.11527, 2.02275};
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK_THAT(ss::gaussian_expected_order_stat_harmonic(100, 100 - j, 1.0), WithinAbs(u[j], 6e-6));
      CHECK_THAT(ss::gaussian_expected_order_stat_sum(100, 100 - j, 1.0), WithinAbs(v[j], 6e-6));
    }
  }
  SECTION("reference values, n = 499") {
    const double u[] = {3.12389802, 2.87248195, 2.74677391, 2.66296856, 2.60011454};
    const double v[] = {3.12389802, 2.87220937, 2.73608587, 2.64103420, 2.56727496};
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK_THAT(ss::gaussian_expected_order_stat_harmonic(499, 499 - j, 1.0), WithinAbs(u[j], 6e-9));
      CHECK_THAT(ss::gaussian_expected_order_stat_sum(499, 499 - j, 1.0), WithinAbs(v[j], 6e-9));
    }
  }
  SECTION("lower tail mirrors the upper tail") {
    CHECK_THAT(ss::gaussian_expected_order_stat_harmonic(100, 2, 1.5, 3.0),
               WithinAbs(3.0 - ss::gaussian_expected_order_stat_harmonic(100, 99, 1.5), 1e-14));
  }
}

TEST_CASE("alternating partial-fraction identities against exact rationals") {
  const ss::SumWeight weights[] = {ss::SumWeight::One, ss::SumWeight::Index,
                                   ss::SumWeight::IndexSquared};
  std::vector<unsigned> sizes{11, 12, 13, 16, 25, 50, 99, 100, 101, 257, 500, 999, 1000};
  for (unsigned K = 0; K <= 10; ++K) {
    for (unsigned extra = 1; extra <= 3; ++extra) sizes.push_back(K + extra);
  }
  for (unsigned K = 0; K <= 10; ++K) {
    for (unsigned n : sizes) {
      if (K >= n) continue;
      for (int w = 0; w < 3; ++w) {
        const double exact = oracle::alternating_sum_exact(K, n, w).convert_to<double>();
        INFO("K=" << K << " n=" << n << " weight=" << w);
        CHECK_THAT(ss::alternating_sum_literal(K, n, weights[w]), WithinRel(exact, 1e-15));
        if (exact == 0.0) {
          CHECK(ss::alternating_sum_identity(K, n, weights[w]) == 0.0);
        } else {
          CHECK_THAT(ss::alternating_sum_identity(K, n, weights[w]), WithinRel(exact, 1e-13));
        }
      }
    }
  }
  CHECK_THROWS_AS(ss::alternating_sum_identity(5, 5, ss::SumWeight::One), ss::DomainError);
}

TEST_CASE("gaussian order densities scale with sigma") {
  for (double x : {-1.0, 0.5, 2.0}) {
    CHECK_THAT(ss::gaussian_order_stat_pdf(20, 17, 3.0, 3.0 * x),
               WithinRel(ss::gaussian_order_stat_pdf(20, 17, 1.0, x) / 3.0, 1e-12));
  }
}
