#pragma once

// Maximum-likelihood fits of the two reference models, the likelihood-ratio
// classifier, and the sample-size-dispatched hybrid rule.

#include <cmath>
#include <cstddef>
#include <numbers>

#include "span_shrink/errors.hpp"
#include "span_shrink/sample.hpp"
#include "span_shrink/shrinkage.hpp"
#include "span_shrink/verdict.hpp"

namespace span_shrink {

struct UniformFit {
  double lower = 0.0;  // X_(1)
  double upper = 0.0;  // X_(n)
  double loglik = 0.0;
};

struct GaussianFit {
  double mean = 0.0;
  double variance = 0.0;  // biased (1/n) MLE
  double loglik = 0.0;
};

/// Sample sizes in (kHybridLowerN, kHybridUpperN] go to the shrinkage test.
inline constexpr std::size_t kHybridLowerN = 20;
inline constexpr std::size_t kHybridUpperN = 60;

inline UniformFit fit_uniform(const SortedSample& sample) {
  if (sample.size() < 2) throw InsufficientSample("fit_uniform: requires n >= 2");
  const double range = sample.range();
  if (!(range > 0.0)) throw DegenerateSpan("fit_uniform: all values are equal");
  const auto n = static_cast<double>(sample.size());
  return {sample.min(), sample.max(), -n * std::log(range)};
}

inline GaussianFit fit_gaussian(const SortedSample& sample) {
  if (sample.size() < 2) throw InsufficientSample("fit_gaussian: requires n >= 2");
  const auto n = static_cast<double>(sample.size());
  double sum = 0.0;
  for (double v : sample.values()) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (double v : sample.values()) squares += (v - mean) * (v - mean);
  const double variance = squares / n;
  if (!(variance > 0.0)) throw DegenerateSpan("fit_gaussian: zero variance");
  const double loglik =
      -0.5 * n * std::log(2.0 * std::numbers::pi * variance) - 0.5 * n;
  return {mean, variance, loglik};
}

/// Uniform iff ln L_U > ln L_G (equality goes to Gaussian). The confidence is
/// the posterior of the winner under equal priors, 1 / (1 + e^(lnL_lose -
/// lnL_win)).
inline Verdict classify_lrt(const SortedSample& sample) {
  const UniformFit uniform = fit_uniform(sample);
  const GaussianFit gaussian = fit_gaussian(sample);
  Verdict verdict;
  verdict.method = Method::LRT;
  verdict.label = uniform.loglik > gaussian.loglik ? Model::Uniform : Model::Gaussian;
  const double gap = std::abs(uniform.loglik - gaussian.loglik);
  verdict.confidence = 1.0 / (1.0 + std::exp(-gap));
  verdict.diagnostics.loglik_uniform = uniform.loglik;
  verdict.diagnostics.loglik_gaussian = gaussian.loglik;
  return verdict;
}

inline bool in_shrinkage_regime(std::size_t n) {
  return n > kHybridLowerN && n <= kHybridUpperN;
}

/// Shrinkage test for 20 < n <= 60, likelihood-ratio test otherwise. When
/// the shrinkage test cannot run (ties at the extremes, depth too large) the
/// LRT answers instead and the fallback is flagged.
inline Verdict classify_hybrid(const SortedSample& sample,
                               std::size_t depth = kDefaultDepth,
                               double alpha = kDefaultAlpha) {
  Verdict verdict;
  bool fallback = false;
  if (in_shrinkage_regime(sample.size())) {
    try {
      verdict = classify_shrinkage(sample, depth, alpha);
    } catch (const StatisticalError&) {
      fallback = true;
    } catch (const ValidityRange&) {
      fallback = true;
    }
  }
  if (!in_shrinkage_regime(sample.size()) || fallback) {
    verdict = classify_lrt(sample);
  }
  verdict.diagnostics.delegate = verdict.method;
  verdict.diagnostics.fallback = fallback;
  if (sample.size() <= kHybridLowerN) {
    verdict.diagnostics.warnings.emplace_back(
        "small sample (n <= 20): neither test is reliable");
  }
  if (fallback) {
    verdict.diagnostics.warnings.emplace_back(
        "shrinkage test not applicable; used likelihood-ratio test");
  }
  verdict.method = Method::Hybrid;
  return verdict;
}

}  // namespace span_shrink
