#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "span_shrink/errors.hpp"

namespace span_shrink {

/// Ascending, finite observations. Sorting happens once on construction so
/// every downstream statistic depends only on the multiset of values.
class SortedSample {
 public:
  SortedSample() = default;

  explicit SortedSample(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!std::isfinite(v)) throw DomainError("SortedSample: non-finite value");
    }
    std::sort(values_.begin(), values_.end());
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// 1-based order statistic X_(k).
  double order_stat(std::size_t k) const { return values_.at(k - 1); }

  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double range() const { return values_.back() - values_.front(); }

  std::span<const double> values() const noexcept { return values_; }

  std::size_t distinct_count() const {
    if (values_.empty()) return 0;
    std::size_t count = 1;
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (values_[i] != values_[i - 1]) ++count;
    }
    return count;
  }

 private:
  std::vector<double> values_;
};

}  // namespace span_shrink
