#pragma once

// Reproducible Monte Carlo experiments: shrinkage-curve validation, extreme
// value statistics, trimming-depth calibration and the LRT-vs-shrinkage
// comparison over sample sizes.
//
// Each experiment is a grid of cells times `runs` replicates. A replicate
// draws from make_engine(seed, cell, replicate), results land in a
// preallocated slot and are reduced in grid order, so reports are
// bit-identical for any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "span_shrink/errors.hpp"
#include "span_shrink/likelihood.hpp"
#include "span_shrink/order_stats.hpp"
#include "span_shrink/parallel.hpp"
#include "span_shrink/rng.hpp"
#include "span_shrink/shrinkage.hpp"

namespace span_shrink {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t runs = 1000;  // replicates per model per cell
  std::vector<std::size_t> n_grid{100};
  std::vector<std::size_t> p_grid{kDefaultDepth};
  double param_lo = 0.0;  // L and sigma are drawn from U[lo, hi]
  double param_hi = 20.0;
  double alpha = kDefaultAlpha;
  unsigned threads = 1;  // 0 = all cores

  void validate() const {
    if (runs < 1) throw DomainError("config: runs must be >= 1");
    if (n_grid.empty()) throw DomainError("config: n grid is empty");
    if (p_grid.empty()) throw DomainError("config: p grid is empty");
    if (!(param_lo < param_hi)) throw DomainError("config: requires lo < hi");
    if (param_lo < 0.0) throw DomainError("config: lo must be >= 0");
    for (std::size_t n : n_grid) {
      if (n < 2) throw DomainError("config: sample sizes must be >= 2");
    }
    for (std::size_t p : p_grid) {
      if (p < 1) throw DomainError("config: depths must be >= 1");
    }
  }

  std::size_t max_depth() const {
    return *std::max_element(p_grid.begin(), p_grid.end());
  }
};

// ---------------------------------------------------------------------------
// ROC analysis
// ---------------------------------------------------------------------------

/// Area under the ROC curve via the Mann-Whitney U statistic, with midranks
/// for tied scores. labels: nonzero = positive. NaN if a class is empty.
inline double auc_mann_whitney(std::span<const double> scores,
                               std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw DomainError("auc_mann_whitney: size mismatch");
  }
  const std::size_t count = scores.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(count);
  for (std::size_t i = 0; i < count;) {
    std::size_t j = i + 1;
    while (j < count && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) rank[order[t]] = midrank;
    i = j;
  }
  double positives = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (labels[i] != 0) {
      positives += 1.0;
      rank_sum += rank[i];
    }
  }
  const double negatives = static_cast<double>(count) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double u = rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CurveRow {
  Model model = Model::Uniform;
  std::size_t n = 0;
  std::size_t step = 0;  // i in T^(i)
  double mc_mean = 0.0;
  double mc_std = 0.0;
  double expected = 0.0;            // closed-form curve (alpha applied)
  double expected_unshifted = 0.0;  // alpha = 0
};

struct MaxRow {
  std::size_t n = 0;
  double mean_abs_max = 0.0;
  double std_abs_max = 0.0;
  double mean_max = 0.0;
  double std_max = 0.0;
  double estimate = 0.0;          // sigma sqrt(pi ln n / 2)
  double estimate_refined = 0.0;  // NaN for n < 3
};

/// One classifier decision on one simulated sample.
struct Trial {
  int truth = 0;  // 1 = Gaussian
  int predicted = 0;
  double score = 0.0;  // Verdict::gaussian_score
  bool error = false;
};

struct AccuracyRow {
  Method method = Method::Shrinkage;
  std::size_t n = 0;
  std::size_t depth = 0;
  std::size_t trials = 0;  // scored trials, errors excluded
  std::size_t correct = 0;
  std::size_t errors = 0;
  double accuracy = 0.0;
  double auc = 0.0;             // from hard decisions
  double auc_confidence = 0.0;  // from gaussian_score
};

struct AccuracyReport {
  std::vector<AccuracyRow> cells;
  /// Per method: accuracy is the mean of the cell accuracies; AUCs are pooled
  /// over every scored trial.
  std::vector<AccuracyRow> aggregate;

  const AccuracyRow* find_aggregate(Method m) const {
    for (const auto& row : aggregate) {
      if (row.method == m) return &row;
    }
    return nullptr;
  }
};

inline AccuracyRow summarize_trials(Method method, std::size_t n,
                                    std::size_t depth,
                                    std::span<const Trial> trials) {
  AccuracyRow row{method, n, depth, 0, 0, 0, 0.0, 0.0, 0.0};
  std::vector<double> hard;
  std::vector<double> soft;
  std::vector<int> truth;
  for (const Trial& t : trials) {
    if (t.error) {
      ++row.errors;
      continue;
    }
    ++row.trials;
    if (t.predicted == t.truth) ++row.correct;
    hard.push_back(static_cast<double>(t.predicted));
    soft.push_back(t.score);
    truth.push_back(t.truth);
  }
  row.accuracy = row.trials > 0 ? static_cast<double>(row.correct) /
                                      static_cast<double>(row.trials)
                                : std::numeric_limits<double>::quiet_NaN();
  row.auc = auc_mann_whitney(hard, truth);
  row.auc_confidence = auc_mann_whitney(soft, truth);
  return row;
}

namespace detail {

template <class Classify>
Trial run_trial(int truth, const SortedSample& sample, Classify&& classify) {
  Trial trial;
  trial.truth = truth;
  try {
    const Verdict v = classify(sample);
    trial.predicted = v.label == Model::Gaussian ? 1 : 0;
    trial.score = v.gaussian_score();
  } catch (const StatisticalError&) {
    trial.error = true;
  } catch (const DomainError&) {
    trial.error = true;
  }
  return trial;
}

inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double std_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Monte Carlo mean and spread of T^(i), i = 1..max(p_grid), for U[0,1] and
/// N(0,1) samples at every n, beside the closed-form curves.
inline std::vector<CurveRow> run_shrinkage_curves(const ExperimentConfig& config) {
  config.validate();
  const std::size_t depth = config.max_depth();
  const std::size_t runs = config.runs;
  std::vector<CurveRow> rows;
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const std::size_t n = config.n_grid[ni];
    if (n < 2 * depth + 2) {
      throw DomainError("run_shrinkage_curves: n=" + std::to_string(n) +
                        " too small for depth " + std::to_string(depth));
    }
    for (Model model : {Model::Uniform, Model::Gaussian}) {
      const std::uint64_t cell = 2 * ni + (model == Model::Gaussian ? 1 : 0);
      std::vector<double> ratios(runs * depth);
      parallel_for(runs, config.threads, [&](std::size_t r) {
        Engine rng = make_engine(config.seed, cell, r);
        const SortedSample sample = model == Model::Uniform
                                        ? sample_uniform(n, 0.0, 1.0, rng)
                                        : sample_gaussian(n, 0.0, 1.0, rng);
        const ShrinkageProfile profile = empirical_profile(sample, depth);
        std::copy(profile.ratios.begin(), profile.ratios.end(),
                  ratios.begin() + static_cast<std::ptrdiff_t>(r * depth));
      });
      const ModelCurve shifted = model == Model::Uniform
                                     ? uniform_curve(n, depth)
                                     : gaussian_curve(n, depth, config.alpha);
      const ModelCurve plain = model == Model::Uniform
                                   ? shifted
                                   : gaussian_curve(n, depth, 0.0);
      for (std::size_t i = 0; i < depth; ++i) {
        std::vector<double> column(runs);
        for (std::size_t r = 0; r < runs; ++r) column[r] = ratios[r * depth + i];
        const double mean = detail::mean_of(column);
        rows.push_back({model, n, i + 1, mean, detail::std_of(column, mean),
                        shifted.expected_ratios[i], plain.expected_ratios[i]});
      }
    }
  }
  return rows;
}

/// Monte Carlo mean of max |X_i| and max X_i for N(0,1) samples at every n,
/// beside both closed-form estimates of E[max |X_i|].
inline std::vector<MaxRow> run_max_statistics(const ExperimentConfig& config) {
  config.validate();
  std::vector<MaxRow> rows;
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const std::size_t n = config.n_grid[ni];
    std::vector<double> abs_max(config.runs);
    std::vector<double> max(config.runs);
    parallel_for(config.runs, config.threads, [&](std::size_t r) {
      Engine rng = make_engine(config.seed, ni, r);
      std::normal_distribution<double> dist(0.0, 1.0);
      double hi = -std::numeric_limits<double>::infinity();
      double hi_abs = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = dist(rng);
        hi = std::max(hi, x);
        hi_abs = std::max(hi_abs, std::abs(x));
      }
      abs_max[r] = hi_abs;
      max[r] = hi;
    });
    MaxRow row;
    row.n = n;
    row.mean_abs_max = detail::mean_of(abs_max);
    row.std_abs_max = detail::std_of(abs_max, row.mean_abs_max);
    row.mean_max = detail::mean_of(max);
    row.std_max = detail::std_of(max, row.mean_max);
    row.estimate = gaussian_expected_max_abs(n, 1.0);
    row.estimate_refined = n >= 3 ? gaussian_expected_max_abs_refined(n, 1.0)
                                  : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

/// Accuracy of the shrinkage classifier at each depth in p_grid, on `runs`
/// U[0,1] and `runs` N(0,1) samples of size n_grid.front().
inline AccuracyReport calibrate_p(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.n_grid.front();
  const std::size_t runs = config.runs;
  AccuracyReport report;
  std::vector<Trial> pooled;
  double accuracy_sum = 0.0;
  for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
    const std::size_t depth = config.p_grid[pi];
    std::vector<Trial> trials(2 * runs);
    parallel_for(2 * runs, config.threads, [&](std::size_t r) {
      Engine rng = make_engine(config.seed, pi, r);
      const int truth = r < runs ? 0 : 1;
      const SortedSample sample = truth == 0 ? sample_uniform(n, 0.0, 1.0, rng)
                                             : sample_gaussian(n, 0.0, 1.0, rng);
      trials[r] = detail::run_trial(truth, sample, [&](const SortedSample& s) {
        return classify_shrinkage(s, depth, config.alpha);
      });
    });
    report.cells.push_back(summarize_trials(Method::Shrinkage, n, depth, trials));
    accuracy_sum += report.cells.back().accuracy;
    pooled.insert(pooled.end(), trials.begin(), trials.end());
  }
  AccuracyRow total = summarize_trials(Method::Shrinkage, n, 0, pooled);
  total.accuracy = accuracy_sum / static_cast<double>(report.cells.size());
  report.aggregate.push_back(total);
  return report;
}

/// LRT, shrinkage (depth p_grid.front()) and hybrid accuracy at every n, on
/// `runs` U(0, L) and `runs` N(0, sigma^2) samples with L, sigma drawn from
/// U[lo, hi]. All three methods see the same samples. Shrinkage or LRT
/// failures are counted as error trials and excluded from the scores.
inline AccuracyReport compare_methods(const ExperimentConfig& config) {
  config.validate();
  const std::size_t depth = config.p_grid.front();
  const std::size_t runs = config.runs;
  constexpr Method kMethods[] = {Method::LRT, Method::Shrinkage, Method::Hybrid};
  constexpr std::size_t kMethodCount = std::size(kMethods);

  AccuracyReport report;
  std::vector<std::vector<Trial>> pooled(kMethodCount);
  std::vector<double> accuracy_sum(kMethodCount, 0.0);
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const std::size_t n = config.n_grid[ni];
    // slot layout: [replicate][method]
    std::vector<Trial> trials(2 * runs * kMethodCount);
    parallel_for(2 * runs, config.threads, [&](std::size_t r) {
      Engine rng = make_engine(config.seed, ni, r);
      const int truth = r < runs ? 0 : 1;
      std::uniform_real_distribution<double> scale(config.param_lo, config.param_hi);
      const double s = scale(rng);
      SortedSample sample;
      bool sampled = true;
      try {
        sample = truth == 0 ? sample_uniform(n, 0.0, s, rng)
                            : sample_gaussian(n, 0.0, s, rng);
      } catch (const DomainError&) {
        sampled = false;  // scale drawn as exactly 0
      }
      for (std::size_t m = 0; m < kMethodCount; ++m) {
        Trial& slot = trials[r * kMethodCount + m];
        if (!sampled) {
          slot = Trial{truth, 0, 0.0, true};
          continue;
        }
        slot = detail::run_trial(truth, sample, [&](const SortedSample& x) {
          switch (kMethods[m]) {
            case Method::LRT: return classify_lrt(x);
            case Method::Shrinkage: return classify_shrinkage(x, depth, config.alpha);
            case Method::Hybrid: break;
          }
          return classify_hybrid(x, depth, config.alpha);
        });
      }
    });
    for (std::size_t m = 0; m < kMethodCount; ++m) {
      std::vector<Trial> column(2 * runs);
      for (std::size_t r = 0; r < 2 * runs; ++r) column[r] = trials[r * kMethodCount + m];
      report.cells.push_back(summarize_trials(kMethods[m], n, depth, column));
      accuracy_sum[m] += report.cells.back().accuracy;
      pooled[m].insert(pooled[m].end(), column.begin(), column.end());
    }
  }
  for (std::size_t m = 0; m < kMethodCount; ++m) {
    AccuracyRow total = summarize_trials(kMethods[m], 0, depth, pooled[m]);
    total.accuracy = accuracy_sum[m] / static_cast<double>(config.n_grid.size());
    report.aggregate.push_back(total);
  }
  return report;
}

struct ApproximationRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double harmonic = 0.0;         // u_k
  double alternating_sum = 0.0;  // v_k
  double abs_difference = 0.0;
};

/// u_k and v_k side by side for k = n, n-1, ..., n-depth+1.
inline std::vector<ApproximationRow> compare_tail_approximations(
    std::size_t n, std::size_t depth, double sigma = 1.0) {
  std::vector<ApproximationRow> rows;
  for (std::size_t j = 0; j < depth && j < n; ++j) {
    const std::size_t k = n - j;
    const double u = gaussian_expected_order_stat_harmonic(n, k, sigma);
    const double v = gaussian_expected_order_stat_sum(n, k, sigma);
    rows.push_back({n, k, u, v, std::abs(u - v)});
  }
  return rows;
}

}  // namespace span_shrink
