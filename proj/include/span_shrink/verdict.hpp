#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace span_shrink {

enum class Model { Uniform, Gaussian };
enum class Method { Shrinkage, LRT, Hybrid };

inline std::string_view to_string(Model m) {
  return m == Model::Uniform ? "uniform" : "gaussian";
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Shrinkage: return "shrinkage";
    case Method::LRT: return "lrt";
    case Method::Hybrid: return "hybrid";
  }
  return "unknown";
}

/// Raw numbers behind a decision. Fields a classifier does not compute stay
/// empty.
struct Diagnostics {
  std::optional<double> distance_uniform;
  std::optional<double> distance_gaussian;
  std::optional<double> loglik_uniform;
  std::optional<double> loglik_gaussian;
  std::vector<double> empirical_ratios;
  std::vector<double> diameters;
  std::optional<Method> delegate;  // hybrid only
  bool fallback = false;           // hybrid fell back from shrinkage to LRT
  std::vector<std::string> warnings;
};

struct Verdict {
  Model label = Model::Uniform;
  double confidence = 0.5;  // of the winning label, in [0, 1]
  Method method = Method::Shrinkage;
  Diagnostics diagnostics;

  /// Score for "Gaussian" on a common [0, 1] scale, for ROC analysis.
  double gaussian_score() const {
    return label == Model::Gaussian ? confidence : 1.0 - confidence;
  }
};

}  // namespace span_shrink
