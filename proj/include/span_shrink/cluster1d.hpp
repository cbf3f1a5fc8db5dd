#pragma once

// One-dimensional DBSCAN, the anchored synthetic generator, and validation
// of the resulting clusters against the uniform-vs-Gaussian classifiers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "span_shrink/errors.hpp"
#include "span_shrink/likelihood.hpp"
#include "span_shrink/parallel.hpp"
#include "span_shrink/rng.hpp"
#include "span_shrink/sample.hpp"
#include "span_shrink/shrinkage.hpp"
#include "span_shrink/verdict.hpp"

namespace span_shrink {

enum class Origin : std::uint8_t { AnchorGaussian, BackgroundUniform };

struct DatasetParams {
  double width = 10'000.0;
  std::size_t anchors = 10;
  std::size_t points = 1000;
  double sigma = 20.0;
  double gaussian_fraction = 0.5;

  void validate() const {
    if (!(width > 0.0)) throw DomainError("dataset: width must be > 0");
    if (anchors < 1) throw DomainError("dataset: need at least one anchor");
    if (points < 2) throw DomainError("dataset: need at least two points");
    if (!(sigma > 0.0)) throw DomainError("dataset: sigma must be > 0");
    if (!(gaussian_fraction >= 0.0 && gaussian_fraction <= 1.0)) {
      throw DomainError("dataset: gaussian fraction must lie in [0, 1]");
    }
  }

  std::size_t gaussian_count() const {
    return static_cast<std::size_t>(
        std::llround(gaussian_fraction * static_cast<double>(points)));
  }
};

struct SyntheticDataset {
  std::vector<double> points;
  std::vector<Origin> origin;  // parallel to points
  std::vector<double> anchors;
  DatasetParams params;
};

/// Anchors uniform on [0, W]; the first round(fraction * n_B) points are
/// N(anchor, sigma^2) around a uniformly chosen anchor, the rest U[0, W].
/// Gaussian draws outside [0, W] are kept as drawn.
template <class URBG>
SyntheticDataset generate_dataset(const DatasetParams& params, URBG& rng) {
  params.validate();
  SyntheticDataset data;
  data.params = params;
  std::uniform_real_distribution<double> across(0.0, params.width);
  data.anchors.resize(params.anchors);
  for (double& a : data.anchors) a = across(rng);

  const std::size_t gaussian = params.gaussian_count();
  std::uniform_int_distribution<std::size_t> pick(0, params.anchors - 1);
  std::normal_distribution<double> spread(0.0, params.sigma);
  data.points.reserve(params.points);
  data.origin.reserve(params.points);
  for (std::size_t i = 0; i < gaussian; ++i) {
    const double center = data.anchors[pick(rng)];
    data.points.push_back(center + spread(rng));
    data.origin.push_back(Origin::AnchorGaussian);
  }
  for (std::size_t i = gaussian; i < params.points; ++i) {
    data.points.push_back(across(rng));
    data.origin.push_back(Origin::BackgroundUniform);
  }
  return data;
}

inline constexpr int kNoise = -1;

struct ClusterRun {
  std::vector<int> labels;                      // per input point; kNoise or id
  std::vector<std::vector<std::size_t>> clusters;  // member indices, ascending
  double epsilon = 0.0;
  std::size_t min_samples = 0;
};

/// DBSCAN on the real line. A point is core when at least min_samples points
/// (itself included) lie within distance epsilon. Two cores share a cluster
/// iff consecutive cores between them are never more than epsilon apart. A
/// border point joins the cluster of the lowest core within epsilon of it.
/// Cluster ids follow ascending coordinate order.
inline ClusterRun dbscan_1d(std::span<const double> points, double epsilon,
                            std::size_t min_samples) {
  if (!(epsilon > 0.0)) throw DomainError("dbscan_1d: epsilon must be > 0");
  if (min_samples < 1) throw DomainError("dbscan_1d: min_samples must be >= 1");
  ClusterRun run;
  run.epsilon = epsilon;
  run.min_samples = min_samples;
  const std::size_t count = points.size();
  run.labels.assign(count, kNoise);
  if (count == 0) return run;

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a] < points[b];
  });
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = points[order[i]];

  // Neighbour counts over the window [x - eps, x + eps].
  std::vector<bool> core(count, false);
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < count; ++i) {
    while (x[i] - x[lo] > epsilon) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < count && x[hi + 1] - x[i] <= epsilon) ++hi;
    core[i] = hi - lo + 1 >= min_samples;
  }

  // Chain cores into clusters.
  std::vector<int> sorted_label(count, kNoise);
  int next_id = -1;
  std::optional<std::size_t> last_core;
  for (std::size_t i = 0; i < count; ++i) {
    if (!core[i]) continue;
    if (!last_core || x[i] - x[*last_core] > epsilon) ++next_id;
    sorted_label[i] = next_id;
    last_core = i;
  }

  // Borders. Cores within epsilon on one side of a point are within epsilon
  // of each other, so the lowest core in reach belongs to the cluster of the
  // nearest core on the left when that one is in reach, else to the cluster
  // of the nearest core on the right.
  std::vector<std::optional<std::size_t>> prev_core(count);
  std::vector<std::optional<std::size_t>> next_core(count);
  for (std::size_t i = 0, seen = count; i < count; ++i) {
    if (core[i]) seen = i;
    if (seen != count) prev_core[i] = seen;
  }
  for (std::size_t i = count, seen = count; i-- > 0;) {
    if (core[i]) seen = i;
    if (seen != count) next_core[i] = seen;
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (core[i]) continue;
    std::optional<std::size_t> claim;
    if (prev_core[i] && x[i] - x[*prev_core[i]] <= epsilon) {
      claim = prev_core[i];
    } else if (next_core[i] && x[*next_core[i]] - x[i] <= epsilon) {
      claim = next_core[i];
    }
    if (claim) sorted_label[i] = sorted_label[*claim];
  }

  run.clusters.resize(static_cast<std::size_t>(next_id + 1));
  for (std::size_t i = 0; i < count; ++i) {
    run.labels[order[i]] = sorted_label[i];
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (run.labels[i] != kNoise) {
      run.clusters[static_cast<std::size_t>(run.labels[i])].push_back(i);
    }
  }
  return run;
}

/// Ground truth per cluster: true iff strictly more than half of its members
/// came from the Gaussian component.
inline std::vector<bool> label_significant(const ClusterRun& run,
                                           const SyntheticDataset& dataset) {
  if (run.labels.size() != dataset.points.size()) {
    throw DomainError("label_significant: run and dataset sizes differ");
  }
  std::vector<bool> significant;
  significant.reserve(run.clusters.size());
  for (const auto& members : run.clusters) {
    std::size_t gaussian = 0;
    for (std::size_t idx : members) {
      if (dataset.origin.at(idx) == Origin::AnchorGaussian) ++gaussian;
    }
    significant.push_back(2 * gaussian > members.size());
  }
  return significant;
}

struct Confusion {
  std::size_t true_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;
  std::size_t false_positive = 0;

  void add(bool truth, bool predicted) {
    if (truth) {
      predicted ? ++true_positive : ++false_negative;
    } else {
      predicted ? ++false_positive : ++true_negative;
    }
  }

  Confusion& operator+=(const Confusion& o) {
    true_positive += o.true_positive;
    false_negative += o.false_negative;
    true_negative += o.true_negative;
    false_positive += o.false_positive;
    return *this;
  }

  std::size_t total() const {
    return true_positive + false_negative + true_negative + false_positive;
  }

  /// (sensitivity + specificity) / 2; NaN when a class is absent.
  double balanced_accuracy() const {
    const double pos = static_cast<double>(true_positive + false_negative);
    const double neg = static_cast<double>(true_negative + false_positive);
    if (pos == 0.0 || neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 0.5 * (static_cast<double>(true_positive) / pos +
                  static_cast<double>(true_negative) / neg);
  }
};

struct ClusterVerdict {
  std::size_t cluster_id = 0;
  std::size_t size = 0;
  Verdict verdict;
  std::optional<bool> ground_truth;
};

struct ClusterValidation {
  std::vector<ClusterVerdict> records;
  Confusion confusion;
  std::size_t skipped = 0;  // clusters with fewer than two distinct values
};

/// Classifies each cluster's member coordinates. Only Hybrid and LRT are
/// meaningful here; Shrinkage is accepted for completeness.
inline Verdict classify_with(Method method, const SortedSample& sample,
                             std::size_t depth, double alpha) {
  switch (method) {
    case Method::LRT: return classify_lrt(sample);
    case Method::Shrinkage: return classify_shrinkage(sample, depth, alpha);
    case Method::Hybrid: break;
  }
  return classify_hybrid(sample, depth, alpha);
}

/// Classifies every cluster of a run. With ground_truth given (one flag per
/// cluster), a Gaussian verdict counts as a "significant" prediction and is
/// scored against it.
inline ClusterValidation validate_run(std::span<const double> points,
                                      const ClusterRun& run, Method method,
                                      const std::vector<bool>* ground_truth,
                                      std::size_t depth = kDefaultDepth,
                                      double alpha = kDefaultAlpha) {
  if (run.labels.size() != points.size()) {
    throw DomainError("validate_run: run and point set sizes differ");
  }
  if (ground_truth && ground_truth->size() != run.clusters.size()) {
    throw DomainError("validate_run: ground truth size differs from clusters");
  }
  ClusterValidation out;
  for (std::size_t c = 0; c < run.clusters.size(); ++c) {
    std::vector<double> coords;
    coords.reserve(run.clusters[c].size());
    for (std::size_t idx : run.clusters[c]) coords.push_back(points[idx]);
    const SortedSample sample(std::move(coords));
    if (sample.distinct_count() < 2) {
      ++out.skipped;
      continue;
    }
    ClusterVerdict record;
    record.cluster_id = c;
    record.size = sample.size();
    record.verdict = classify_with(method, sample, depth, alpha);
    if (ground_truth) {
      const bool truth = (*ground_truth)[c];
      record.ground_truth = truth;
      out.confusion.add(truth, record.verdict.label == Model::Gaussian);
    }
    out.records.push_back(std::move(record));
  }
  return out;
}

inline ClusterValidation validate_clusters(const SyntheticDataset& dataset,
                                           const ClusterRun& run, Method method,
                                           std::size_t depth = kDefaultDepth,
                                           double alpha = kDefaultAlpha) {
  const std::vector<bool> truth = label_significant(run, dataset);
  return validate_run(dataset.points, run, method, &truth, depth, alpha);
}

struct ClusterExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t datasets = 100;
  DatasetParams params;
  double epsilon = 20.0;
  std::size_t min_samples = 7;
  std::size_t depth = kDefaultDepth;
  double alpha = kDefaultAlpha;
  unsigned threads = 1;
};

struct DatasetOutcome {
  std::size_t clusters = 0;
  std::size_t significant = 0;
  std::size_t noise_points = 0;
  ClusterValidation hybrid;
  ClusterValidation lrt;
};

struct ClusterExperimentReport {
  std::vector<DatasetOutcome> datasets;
  Confusion hybrid;
  Confusion lrt;
  std::size_t skipped = 0;

  double balanced_accuracy_hybrid() const { return hybrid.balanced_accuracy(); }
  double balanced_accuracy_lrt() const { return lrt.balanced_accuracy(); }
};

/// Generates `datasets` synthetic sets (dataset i seeded from (seed, 0, i)),
/// clusters each, and scores hybrid and LRT verdicts over all clusters.
inline ClusterExperimentReport run_cluster_experiment(
    const ClusterExperimentConfig& config) {
  config.params.validate();
  if (config.datasets < 1) throw DomainError("cluster experiment: datasets must be >= 1");
  ClusterExperimentReport report;
  report.datasets.resize(config.datasets);
  parallel_for(config.datasets, config.threads, [&](std::size_t d) {
    Engine rng = make_engine(config.seed, 0, d);
    const SyntheticDataset data = generate_dataset(config.params, rng);
    const ClusterRun run = dbscan_1d(data.points, config.epsilon, config.min_samples);
    DatasetOutcome& out = report.datasets[d];
    out.clusters = run.clusters.size();
    const std::vector<bool> truth = label_significant(run, data);
    out.significant = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
    out.noise_points = static_cast<std::size_t>(
        std::count(run.labels.begin(), run.labels.end(), kNoise));
    out.hybrid = validate_run(data.points, run, Method::Hybrid, &truth,
                              config.depth, config.alpha);
    out.lrt = validate_run(data.points, run, Method::LRT, &truth, config.depth,
                           config.alpha);
  });
  for (const auto& d : report.datasets) {
    report.hybrid += d.hybrid.confusion;
    report.lrt += d.lrt.confusion;
    report.skipped += d.hybrid.skipped;
  }
  return report;
}

}  // namespace span_shrink
