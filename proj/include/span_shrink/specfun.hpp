#pragma once

// Scalar special functions shared by the statistical modules.

#include <cmath>
#include <cstddef>
#include <numbers>

#include "span_shrink/errors.hpp"

namespace span_shrink {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Error function. Backed by the C library implementation (sub-ulp accuracy
/// on glibc), which already switches to a scaled complementary expansion for
/// large arguments.
inline double erf(double x) { return std::erf(x); }

/// Complementary error function, accurate in relative terms deep into the
/// upper tail (no 1 - erf cancellation).
inline double erfc(double x) { return std::erfc(x); }

/// Chu's closed-form fit erf(x) ~ sqrt(1 - exp(-4 x^2 / pi)), x >= 0.
/// Absolute error stays below 0.01 on [0, inf).
inline double erf_chu(double x) {
  if (!(x >= 0.0)) throw DomainError("erf_chu: argument must be >= 0");
  return std::sqrt(-std::expm1(-4.0 * x * x / std::numbers::pi));
}

inline double std_normal_pdf(double x, double sigma = 1.0) {
  if (!(sigma > 0.0)) throw DomainError("std_normal_pdf: sigma must be > 0");
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// F(x) = erfc(-x / (sigma sqrt 2)) / 2.
inline double std_normal_cdf(double x, double sigma = 1.0) {
  if (!(sigma > 0.0)) throw DomainError("std_normal_cdf: sigma must be > 0");
  return 0.5 * erfc(-x / (sigma * std::numbers::sqrt2));
}

/// H_m = 1 + 1/2 + ... + 1/m, summed in increasing i; H_0 = 0.
inline double harmonic(std::size_t m) {
  double h = 0.0;
  for (std::size_t i = 1; i <= m; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

}  // namespace span_shrink
