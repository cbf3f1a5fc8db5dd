#pragma once

// Expectations of order statistics, trimmed diameters, extreme values and
// trimmed-mean shifts under the uniform and Gaussian reference models.
//
// Ranks are 1-based: X_(1) <= ... <= X_(n). The tail depth of rank k is
// K = n - k.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "span_shrink/errors.hpp"
#include "span_shrink/specfun.hpp"

namespace span_shrink {

struct UniformModel {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
};

struct GaussianModel {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Largest tail depth accepted by gaussian_expected_order_stat_sum.
inline constexpr std::size_t kMaxAlternatingDepth = 30;

namespace detail {

// The alternating sums below lose roughly log10(n^K 2^K / K!) digits to
// cancellation; 300 decimal digits keep K <= 30 exact to double precision
// for n up to ~1e9.
using WideFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<300>,
    boost::multiprecision::et_off>;

inline void check_rank(std::size_t n, std::size_t k, const char* op) {
  if (n == 0 || k < 1 || k > n) {
    throw DomainError(std::string(op) + ": rank k=" + std::to_string(k) +
                      " outside [1, n=" + std::to_string(n) + "]");
  }
}

inline void check_positive(double v, const char* op, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(op) + ": " + name + " must be > 0");
  }
}

inline void check_min_n(std::size_t n, std::size_t min_n, const char* op) {
  if (n < min_n) {
    throw DomainError(std::string(op) + ": requires n >= " +
                      std::to_string(min_n));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Uniform model
// ---------------------------------------------------------------------------

/// E[X_(k)] = k L / (n + 1) for n draws from U[0, L].
inline double uniform_expected_order_stat(std::size_t n, std::size_t k,
                                          double L) {
  detail::check_rank(n, k, "uniform_expected_order_stat");
  detail::check_positive(L, "uniform_expected_order_stat", "L");
  return static_cast<double>(k) * L / static_cast<double>(n + 1);
}

/// E[X_(k)^p] = L^p k(k+1)...(k+p-1) / ((n+1)...(n+p)).
inline double uniform_order_stat_moment(std::size_t n, std::size_t k, double L,
                                        unsigned power) {
  detail::check_rank(n, k, "uniform_order_stat_moment");
  detail::check_positive(L, "uniform_order_stat_moment", "L");
  if (power < 1) throw DomainError("uniform_order_stat_moment: power must be >= 1");
  double m = 1.0;
  for (unsigned j = 0; j < power; ++j) {
    m *= L * static_cast<double>(k + j) / static_cast<double>(n + 1 + j);
  }
  return m;
}

/// E[D_p] = L (n - 2p - 1) / (n + 1), where D_p = X_(n-p) - X_(p+1).
inline double uniform_expected_trimmed_diameter(std::size_t n, std::size_t p,
                                                double L) {
  detail::check_positive(L, "uniform_expected_trimmed_diameter", "L");
  if (2 * p >= n) {
    throw DomainError("uniform_expected_trimmed_diameter: requires p < n/2");
  }
  return L * static_cast<double>(n - 2 * p - 1) / static_cast<double>(n + 1);
}

/// E[(X_(n-1) - X_(1)) / (X_(n) - X_(1))] = (n - 2) / (n - 1).
///
/// This is exact, and coincides with the ratio of the expected spans: the one
/// case where the expectation-of-ratio / ratio-of-expectations swap used by
/// the shrinkage curves holds with equality.
inline double uniform_exact_shrink_ratio_p1(std::size_t n) {
  detail::check_min_n(n, 3, "uniform_exact_shrink_ratio_p1");
  return static_cast<double>(n - 2) / static_cast<double>(n - 1);
}

/// E[mean - mean without the maximum] = L / (2 (n + 1)).
inline double uniform_mean_shift_remove_max(std::size_t n, double L) {
  detail::check_min_n(n, 2, "uniform_mean_shift_remove_max");
  detail::check_positive(L, "uniform_mean_shift_remove_max", "L");
  return L / (2.0 * static_cast<double>(n + 1));
}

// ---------------------------------------------------------------------------
// Gaussian model
// ---------------------------------------------------------------------------

/// E[max |X_i|] ~ sigma sqrt(pi ln n / 2), from the Chu erf fit. Closer to
/// simulation than the classical sqrt(2 ln n) asymptotic for moderate n.
inline double gaussian_expected_max_abs(std::size_t n, double sigma) {
  detail::check_min_n(n, 2, "gaussian_expected_max_abs");
  detail::check_positive(sigma, "gaussian_expected_max_abs", "sigma");
  return sigma * std::sqrt(std::numbers::pi * std::log(static_cast<double>(n)) / 2.0);
}

/// Large-n asymptotic sigma sqrt(2 ln n) + sigma ln(4 pi) / (2 sqrt(2 ln n)).
inline double gaussian_expected_max_abs_refined(std::size_t n, double sigma) {
  detail::check_min_n(n, 3, "gaussian_expected_max_abs_refined");
  detail::check_positive(sigma, "gaussian_expected_max_abs_refined", "sigma");
  const double root = std::sqrt(2.0 * std::log(static_cast<double>(n)));
  return sigma * root + sigma * std::log(4.0 * std::numbers::pi) / (2.0 * root);
}

/// Density of X_(k) among n i.i.d. N(0, sigma^2):
///   n!/((k-1)!(n-k)!) erfc(-z)^(k-1) erfc(z)^(n-k) e^{-x^2/2s^2}
///   / (2^(n-1) sigma sqrt(2 pi)),  z = x / (sigma sqrt 2).
/// Evaluated in log space.
inline double gaussian_order_stat_pdf(std::size_t n, std::size_t k,
                                      double sigma, double x) {
  detail::check_rank(n, k, "gaussian_order_stat_pdf");
  detail::check_positive(sigma, "gaussian_order_stat_pdf", "sigma");
  const double z = x / (sigma * std::numbers::sqrt2);
  const double lower = erfc(-z);
  const double upper = erfc(z);
  const auto below = static_cast<double>(k - 1);
  const auto above = static_cast<double>(n - k);
  if ((below > 0 && lower == 0.0) || (above > 0 && upper == 0.0)) return 0.0;

  double log_f = std::lgamma(static_cast<double>(n) + 1.0) -
                 std::lgamma(below + 1.0) - std::lgamma(above + 1.0);
  if (below > 0) log_f += below * std::log(lower);
  if (above > 0) log_f += above * std::log(upper);
  log_f -= z * z;
  log_f -= static_cast<double>(n - 1) * std::numbers::ln2;
  log_f -= std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
  return std::exp(log_f);
}

/// Alternating-sum approximation ("v_k") of E[X_(k)] for upper-tail ranks:
///   sigma sqrt(2 pi)/2 * n(n-1)...(n-K)
///   * sum_{i=0..K} (-1)^(K-i) sqrt(ln(n-i)) / (i! (K-i)! (n-i)),  K = n-k.
/// Only meaningful when K << n. Throws for K > kMaxAlternatingDepth.
inline double gaussian_expected_order_stat_sum(std::size_t n, std::size_t k,
                                               double sigma) {
  detail::check_min_n(n, 2, "gaussian_expected_order_stat_sum");
  detail::check_rank(n, k, "gaussian_expected_order_stat_sum");
  detail::check_positive(sigma, "gaussian_expected_order_stat_sum", "sigma");
  const std::size_t depth = n - k;
  if (depth > kMaxAlternatingDepth) {
    throw DomainError("gaussian_expected_order_stat_sum: tail depth n-k=" +
                      std::to_string(depth) + " exceeds " +
                      std::to_string(kMaxAlternatingDepth));
  }
  using detail::WideFloat;
  // prefactor / (i! (K-i)!) == C(K, i) * falling(n, K+1) / K!; the binomial
  // and the product are formed exactly in WideFloat.
  WideFloat falling = 1;
  for (std::size_t j = 0; j <= depth; ++j) falling *= WideFloat(n - j);
  WideFloat k_factorial = 1;
  for (std::size_t j = 2; j <= depth; ++j) k_factorial *= WideFloat(j);

  WideFloat sum = 0;
  WideFloat binom = 1;  // C(K, i)
  for (std::size_t i = 0; i <= depth; ++i) {
    const WideFloat m(n - i);
    WideFloat term = binom * sqrt(log(m)) / m;
    if ((depth - i) % 2 == 1) term = -term;
    sum += term;
    binom = binom * WideFloat(depth - i) / WideFloat(i + 1);
  }
  const WideFloat result = falling / k_factorial * sum;
  return sigma * std::sqrt(2.0 * std::numbers::pi) / 2.0 *
         static_cast<double>(result);
}

/// Harmonic-corrected approximation ("u_k") of E[X_(k)] for N(mu, sigma^2):
///   mu + sigma sqrt(2 pi ln n)/2 * (1 - H_{n-k} / (2 ln n))   for k > n/2,
/// and the mirror image mu - u_{n-k+1} for lower-tail ranks k <= n/2.
inline double gaussian_expected_order_stat_harmonic(std::size_t n,
                                                    std::size_t k,
                                                    double sigma,
                                                    double mu = 0.0) {
  detail::check_min_n(n, 3, "gaussian_expected_order_stat_harmonic");
  detail::check_rank(n, k, "gaussian_expected_order_stat_harmonic");
  detail::check_positive(sigma, "gaussian_expected_order_stat_harmonic", "sigma");
  const bool lower_tail = 2 * k <= n;
  const std::size_t upper_rank = lower_tail ? n - k + 1 : k;
  const double log_n = std::log(static_cast<double>(n));
  const double ratio = harmonic(n - upper_rank) / (2.0 * log_n);
  if (ratio >= 1.0) {
    throw ValidityRange(
        "gaussian_expected_order_stat_harmonic: H_{n-k}/(2 ln n) = " +
            std::to_string(ratio) + " >= 1",
        ratio);
  }
  const double tail = sigma * std::sqrt(2.0 * std::numbers::pi * log_n) / 2.0 *
                      (1.0 - ratio);
  return lower_tail ? mu - tail : mu + tail;
}

/// Which right-hand side of the partial-fraction identities to evaluate.
enum class SumWeight { One, Index, IndexSquared };

namespace detail {
inline void check_identity_args(std::size_t depth, std::size_t n,
                                const char* op) {
  if (depth >= n) {
    throw DomainError(std::string(op) + ": requires K < n");
  }
}
}  // namespace detail

/// Closed forms of S_w = sum_{i=0..K} (-1)^(K-i) w(i) / (i! (K-i)! (n-i)):
///   w = 1   : 1 / (n (n-1) ... (n-K))
///   w = i   : 1 / ((n-1) ... (n-K))            (0 when K = 0)
///   w = i^2 : n / ((n-1) ... (n-K))            (K >= 2)
/// At K = 0 the weighted sums vanish, and at K = 1 the i^2 sum reduces to
/// the i sum, 1 / (n-1), since i^2 = i(i-1) + i and the i(i-1) part is empty.
inline double alternating_sum_identity(std::size_t depth, std::size_t n,
                                       SumWeight weight) {
  detail::check_identity_args(depth, n, "alternating_sum_identity");
  if (weight != SumWeight::One && depth == 0) return 0.0;
  double denom = 1.0;
  for (std::size_t j = 1; j <= depth; ++j) denom *= static_cast<double>(n - j);
  switch (weight) {
    case SumWeight::One:
      return 1.0 / (static_cast<double>(n) * denom);
    case SumWeight::Index:
      return 1.0 / denom;
    case SumWeight::IndexSquared:
      return depth == 1 ? 1.0 / denom : static_cast<double>(n) / denom;
  }
  return 0.0;
}

/// Literal evaluation of the same alternating sum, in extended precision so
/// the result is correctly rounded despite cancellation. Cross-check for
/// alternating_sum_identity.
inline double alternating_sum_literal(std::size_t depth, std::size_t n,
                                      SumWeight weight) {
  detail::check_identity_args(depth, n, "alternating_sum_literal");
  using detail::WideFloat;
  WideFloat k_factorial = 1;
  for (std::size_t j = 2; j <= depth; ++j) k_factorial *= WideFloat(j);
  WideFloat sum = 0;
  WideFloat binom = 1;
  for (std::size_t i = 0; i <= depth; ++i) {
    WideFloat w = 1;
    if (weight == SumWeight::Index) w = WideFloat(i);
    if (weight == SumWeight::IndexSquared) w = WideFloat(i) * WideFloat(i);
    WideFloat term = binom * w / WideFloat(n - i);
    if ((depth - i) % 2 == 1) term = -term;
    sum += term;
    binom = binom * WideFloat(depth - i) / WideFloat(i + 1);
  }
  return static_cast<double>(sum / k_factorial);
}

/// E[mean - mean without the maximum] ~ sigma sqrt(2 pi ln n) / (2 (n - 1)).
inline double gaussian_mean_shift_remove_max(std::size_t n, double sigma) {
  detail::check_min_n(n, 3, "gaussian_mean_shift_remove_max");
  detail::check_positive(sigma, "gaussian_mean_shift_remove_max", "sigma");
  return sigma *
         std::sqrt(2.0 * std::numbers::pi * std::log(static_cast<double>(n))) /
         (2.0 * static_cast<double>(n - 1));
}

}  // namespace span_shrink
