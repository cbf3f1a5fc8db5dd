#pragma once

// Diameter-shrinkage statistic and the geometric uniform-vs-Gaussian
// classifier.
//
// With D_i = X_(n-i) - X_(i+1) the span left after trimming i points from
// each end, the shrinkage profile is T^(i) = D_i / D_{i-1}, i = 1..p. A sample
// is assigned to whichever model's expected profile is closer in Euclidean
// distance.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "span_shrink/errors.hpp"
#include "span_shrink/sample.hpp"
#include "span_shrink/specfun.hpp"
#include "span_shrink/verdict.hpp"

namespace span_shrink {

/// Trimming depth used when none is given.
inline constexpr std::size_t kDefaultDepth = 6;
/// Empirical offset between the Gaussian closed-form curve and simulation.
inline constexpr double kDefaultAlpha = 0.03;

struct ShrinkageProfile {
  std::vector<double> diameters;  // D_0 .. D_p
  std::vector<double> ratios;     // T^(1) .. T^(p)

  std::size_t depth() const { return ratios.size(); }
};

struct ModelCurve {
  Model model = Model::Uniform;
  std::size_t n = 0;
  double alpha = 0.0;
  std::vector<double> expected_ratios;  // entries for i = 1..p

  std::size_t depth() const { return expected_ratios.size(); }
};

namespace detail {
inline void check_depth(std::size_t n, std::size_t depth, const char* op) {
  if (depth < 1) throw DomainError(std::string(op) + ": depth must be >= 1");
  if (n < 2 * depth + 2) {
    throw InsufficientSample(std::string(op) + ": n=" + std::to_string(n) +
                             " < 2p+2 for p=" + std::to_string(depth));
  }
}
}  // namespace detail

inline ShrinkageProfile empirical_profile(const SortedSample& sample,
                                          std::size_t depth) {
  const std::size_t n = sample.size();
  detail::check_depth(n, depth, "empirical_profile");
  ShrinkageProfile profile;
  profile.diameters.reserve(depth + 1);
  profile.ratios.reserve(depth);
  profile.diameters.push_back(sample.order_stat(n) - sample.order_stat(1));
  for (std::size_t i = 1; i <= depth; ++i) {
    const double previous = profile.diameters.back();
    if (!(previous > 0.0)) {
      throw DegenerateSpan("empirical_profile: D_" + std::to_string(i - 1) +
                           " is zero (tied extreme values)");
    }
    const double current = sample.order_stat(n - i) - sample.order_stat(i + 1);
    profile.diameters.push_back(current);
    profile.ratios.push_back(current / previous);
  }
  return profile;
}

/// Expected profile under U[a, b]: (n - 2i - 1) / (n - 2i + 1). Free of a, b.
inline ModelCurve uniform_curve(std::size_t n, std::size_t depth) {
  detail::check_depth(n, depth, "uniform_curve");
  ModelCurve curve{Model::Uniform, n, 0.0, {}};
  curve.expected_ratios.reserve(depth);
  for (std::size_t i = 1; i <= depth; ++i) {
    curve.expected_ratios.push_back(static_cast<double>(n - 2 * i - 1) /
                                    static_cast<double>(n - 2 * i + 1));
  }
  return curve;
}

/// Expected profile under N(mu, sigma^2), free of both parameters:
///   (1 - H_i / (2 ln n)) / (1 - H_{i-1} / (2 ln n)) - alpha.
/// alpha = 0 gives the uncorrected closed form.
inline ModelCurve gaussian_curve(std::size_t n, std::size_t depth,
                                 double alpha = kDefaultAlpha) {
  if (n < 3) throw InsufficientSample("gaussian_curve: requires n >= 3");
  if (depth < 1) throw DomainError("gaussian_curve: depth must be >= 1");
  const double two_log_n = 2.0 * std::log(static_cast<double>(n));
  if (harmonic(depth) >= two_log_n) {
    throw ValidityRange("gaussian_curve: H_p >= 2 ln n",
                        harmonic(depth) / two_log_n);
  }
  ModelCurve curve{Model::Gaussian, n, alpha, {}};
  curve.expected_ratios.reserve(depth);
  double previous = 1.0;  // 1 - H_0 / (2 ln n)
  for (std::size_t i = 1; i <= depth; ++i) {
    const double current = 1.0 - harmonic(i) / two_log_n;
    curve.expected_ratios.push_back(current / previous - alpha);
    previous = current;
  }
  return curve;
}

inline double euclidean_distance(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Nearest-curve decision. Gaussian iff d_G < d_U; a tie goes to Uniform.
/// Confidence of the winner is 1 - d_win / (d_U + d_G).
inline Verdict classify_shrinkage(const SortedSample& sample,
                                  std::size_t depth = kDefaultDepth,
                                  double alpha = kDefaultAlpha) {
  const std::size_t n = sample.size();
  ShrinkageProfile profile = empirical_profile(sample, depth);
  const ModelCurve uniform = uniform_curve(n, depth);
  const ModelCurve gaussian = gaussian_curve(n, depth, alpha);

  const double d_uniform = euclidean_distance(profile.ratios, uniform.expected_ratios);
  const double d_gaussian = euclidean_distance(profile.ratios, gaussian.expected_ratios);
  const double total = d_uniform + d_gaussian;

  Verdict verdict;
  verdict.method = Method::Shrinkage;
  verdict.label = d_gaussian < d_uniform ? Model::Gaussian : Model::Uniform;
  const double d_win = verdict.label == Model::Gaussian ? d_gaussian : d_uniform;
  verdict.confidence = total > 0.0 ? 1.0 - d_win / total : 0.5;
  verdict.diagnostics.distance_uniform = d_uniform;
  verdict.diagnostics.distance_gaussian = d_gaussian;
  verdict.diagnostics.empirical_ratios = std::move(profile.ratios);
  verdict.diagnostics.diameters = std::move(profile.diameters);
  return verdict;
}

}  // namespace span_shrink
