#pragma once

// Command-line front end. Kept as a header so tests can drive it in-process.
//
// Exit codes: 0 success, 1 usage / configuration / I/O problem, 2 input the
// statistics cannot handle (too few points, zero span).

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "span_shrink/cluster1d.hpp"
#include "span_shrink/io.hpp"
#include "span_shrink/simlab.hpp"
#include "span_shrink/version.hpp"

namespace span_shrink::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr const char* kSeedEnv = "SPAN_SHRINK_SEED";

/// Parameters after defaults, config file, environment and flags are merged.
struct Resolved {
  std::string subcommand;
  std::string experiment;
  std::string method = "hybrid";
  std::string input;
  std::uint64_t seed = kDefaultSeed;
  std::size_t runs = 0;
  std::vector<std::size_t> n_grid;
  std::size_t p = kDefaultDepth;
  double alpha = kDefaultAlpha;
  double epsilon = 20.0;
  std::size_t min_samples = 7;
  double param_lo = 0.0;
  double param_hi = 20.0;
  unsigned threads = 0;
  std::string out_dir = ".";
  bool dump_points = false;
};

namespace detail {

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) {
      throw DomainError("--n: '" + item + "' is not a positive integer");
    }
    grid.push_back(static_cast<std::size_t>(value));
  }
  if (grid.empty()) throw DomainError("--n: empty list");
  return grid;
}

/// Flat "key = value" lines; '#' starts a comment. Keys use the long flag
/// names with '_' or '-'.
inline std::vector<std::string> config_to_args(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string_view text = span_shrink::detail::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key(span_shrink::detail::trim(text.substr(0, eq)));
    const std::string value(span_shrink::detail::trim(text.substr(eq + 1)));
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    if (key == "dump-points") {
      if (value == "true" || value == "1") args.push_back("--dump-points");
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

inline std::string number_arg(double v) { return format_number(v); }

/// The complete flag list that reproduces a run.
inline std::vector<std::string> canonical_args(const Resolved& r) {
  std::vector<std::string> a{r.subcommand};
  auto add = [&](const std::string& flag, const std::string& value) {
    a.push_back(flag);
    a.push_back(value);
  };
  if (r.subcommand == "simulate") add("--experiment", r.experiment);
  if (!r.input.empty()) add("--input", r.input);
  add("--seed", std::to_string(r.seed));
  add("--runs", std::to_string(r.runs));
  if (!r.n_grid.empty()) add("--n", join(r.n_grid));
  add("--p", std::to_string(r.p));
  add("--alpha", number_arg(r.alpha));
  add("--param-lo", number_arg(r.param_lo));
  add("--param-hi", number_arg(r.param_hi));
  if (r.subcommand == "cluster-validate") {
    add("--method", r.method);
    add("--epsilon", number_arg(r.epsilon));
    add("--min-samples", std::to_string(r.min_samples));
    if (r.dump_points) a.push_back("--dump-points");
  }
  add("--threads", std::to_string(r.threads));
  return a;
}

inline void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline std::string num(double v) { return format_number(v); }
inline std::string num(std::size_t v) { return std::to_string(v); }

inline json accuracy_json(const AccuracyRow& row) {
  return {{"method", std::string(to_string(row.method))},
          {"n", row.n},
          {"p", row.depth},
          {"trials", row.trials},
          {"correct", row.correct},
          {"errors", row.errors},
          {"accuracy", number_json(row.accuracy)},
          {"auc", number_json(row.auc)},
          {"auc_confidence", number_json(row.auc_confidence)}};
}

inline ExperimentConfig experiment_config(const Resolved& r) {
  ExperimentConfig c;
  c.seed = r.seed;
  c.runs = r.runs;
  c.n_grid = r.n_grid;
  c.p_grid = {r.p};
  c.alpha = r.alpha;
  c.param_lo = r.param_lo;
  c.param_hi = r.param_hi;
  c.threads = r.threads;
  return c;
}

inline std::vector<std::size_t> depth_range(std::size_t max_depth) {
  std::vector<std::size_t> grid;
  for (std::size_t p = 1; p <= max_depth; ++p) grid.push_back(p);
  return grid;
}

/// Writes the tables for one experiment; returns the output file names and a
/// JSON summary.
inline std::pair<std::vector<std::string>, json> run_experiment(const Resolved& r,
                                                                const fs::path& out) {
  std::vector<std::string> files;
  json summary;
  const std::string& e = r.experiment;
  if (e == "fig1") {
    const auto rows = run_max_statistics(experiment_config(r));
    CsvTable t({"n", "mean_abs_max", "std_abs_max", "mean_max", "std_max",
                "estimate", "estimate_refined"});
    summary["rows"] = json::array();
    for (const auto& row : rows) {
      t.row({num(row.n), num(row.mean_abs_max), num(row.std_abs_max), num(row.mean_max),
             num(row.std_max), num(row.estimate), num(row.estimate_refined)});
      summary["rows"].push_back({{"n", row.n},
                                 {"mean_abs_max", row.mean_abs_max},
                                 {"estimate", row.estimate},
                                 {"estimate_refined", number_json(row.estimate_refined)}});
    }
    t.write(out / "fig1_max_statistics.csv");
    files.push_back("fig1_max_statistics.csv");
  } else if (e == "fig2") {
    const auto rows = run_shrinkage_curves(experiment_config(r));
    CsvTable t({"model", "n", "step", "mc_mean", "mc_std", "expected", "expected_unshifted"});
    double worst_uniform = 0.0;
    double worst_gaussian = 0.0;
    for (const auto& row : rows) {
      t.row({std::string(to_string(row.model)), num(row.n), num(row.step), num(row.mc_mean),
             num(row.mc_std), num(row.expected), num(row.expected_unshifted)});
      double& worst = row.model == Model::Uniform ? worst_uniform : worst_gaussian;
      worst = std::max(worst, std::abs(row.mc_mean - row.expected));
    }
    summary["max_abs_deviation_uniform"] = worst_uniform;
    summary["max_abs_deviation_gaussian"] = worst_gaussian;
    t.write(out / "fig2_shrinkage_curves.csv");
    files.push_back("fig2_shrinkage_curves.csv");
  } else if (e == "fig3c") {
    ExperimentConfig c = experiment_config(r);
    c.n_grid = {r.n_grid.front()};
    c.p_grid = depth_range(r.p);
    const AccuracyReport report = calibrate_p(c);
    CsvTable t({"p", "n", "trials", "correct", "errors", "accuracy", "auc", "auc_confidence"});
    summary["cells"] = json::array();
    for (const auto& row : report.cells) {
      t.row({num(row.depth), num(row.n), num(row.trials), num(row.correct), num(row.errors),
             num(row.accuracy), num(row.auc), num(row.auc_confidence)});
      summary["cells"].push_back(accuracy_json(row));
    }
    t.write(out / "calibration.csv");
    files.push_back("calibration.csv");
  } else if (e == "fig3d" || e == "table2") {
    const AccuracyReport report = compare_methods(experiment_config(r));
    if (e == "fig3d") {
      CsvTable t({"method", "n", "p", "trials", "correct", "errors", "accuracy", "auc",
                  "auc_confidence"});
      for (const auto& row : report.cells) {
        t.row({std::string(to_string(row.method)), num(row.n), num(row.depth),
               num(row.trials), num(row.correct), num(row.errors), num(row.accuracy),
               num(row.auc), num(row.auc_confidence)});
      }
      t.write(out / "method_comparison.csv");
      files.push_back("method_comparison.csv");
    } else {
      CsvTable t({"method", "p", "mean_accuracy", "auc", "auc_confidence", "trials", "errors"});
      for (const auto& row : report.aggregate) {
        t.row({std::string(to_string(row.method)), num(row.depth), num(row.accuracy),
               num(row.auc), num(row.auc_confidence), num(row.trials), num(row.errors)});
      }
      t.write(out / "method_summary.csv");
      files.push_back("method_summary.csv");
    }
    summary["aggregate"] = json::array();
    for (const auto& row : report.aggregate) summary["aggregate"].push_back(accuracy_json(row));
  } else if (e == "table1") {
    const auto rows = compare_tail_approximations(r.n_grid.front(), r.p);
    CsvTable t({"n", "k", "u_harmonic", "v_alternating_sum", "abs_difference"});
    double worst = 0.0;
    for (const auto& row : rows) {
      t.row({num(row.n), num(row.k), num(row.harmonic), num(row.alternating_sum),
             num(row.abs_difference)});
      worst = std::max(worst, row.abs_difference);
    }
    summary["max_abs_difference"] = worst;
    t.write(out / "tail_approximations.csv");
    files.push_back("tail_approximations.csv");
  } else {
    throw DomainError("--experiment: unknown experiment '" + e + "'");
  }
  summary["experiment"] = e;
  return {files, summary};
}

inline std::pair<std::vector<std::string>, json> run_cluster_validate(const Resolved& r,
                                                                      const fs::path& out) {
  std::vector<std::string> files;
  json summary;
  Method method = Method::Hybrid;
  if (r.method == "lrt") method = Method::LRT;
  else if (r.method == "shrinkage") method = Method::Shrinkage;
  else if (r.method != "hybrid") throw DomainError("--method: unknown method '" + r.method + "'");

  if (!r.input.empty()) {
    const std::vector<double> points = read_points_csv(r.input);
    const ClusterRun run = dbscan_1d(points, r.epsilon, r.min_samples);
    const ClusterValidation v = validate_run(points, run, method, nullptr, r.p, r.alpha);
    json records = json::array();
    for (const auto& rec : v.records) records.push_back(to_json(rec));
    write_json(out / "cluster_verdicts.json", records);
    CsvTable labels({"x", "cluster"});
    for (std::size_t i = 0; i < points.size(); ++i) {
      labels.row({num(points[i]), std::to_string(run.labels[i])});
    }
    labels.write(out / "cluster_labels.csv");
    files = {"cluster_verdicts.json", "cluster_labels.csv"};
    summary["clusters"] = run.clusters.size();
    summary["skipped_clusters"] = v.skipped;
    return {files, summary};
  }

  ClusterExperimentConfig c;
  c.seed = r.seed;
  c.datasets = r.runs;
  c.epsilon = r.epsilon;
  c.min_samples = r.min_samples;
  c.depth = r.p;
  c.alpha = r.alpha;
  c.threads = r.threads;
  const ClusterExperimentReport report = run_cluster_experiment(c);

  json records = json::array();
  CsvTable per_dataset({"dataset", "clusters", "significant", "noise_points",
                        "balanced_accuracy_hybrid", "balanced_accuracy_lrt"});
  for (std::size_t d = 0; d < report.datasets.size(); ++d) {
    const auto& ds = report.datasets[d];
    for (const auto* v : {&ds.hybrid, &ds.lrt}) {
      for (const auto& rec : v->records) {
        json j = to_json(rec);
        j["dataset"] = d;
        records.push_back(std::move(j));
      }
    }
    per_dataset.row({num(d), num(ds.clusters), num(ds.significant), num(ds.noise_points),
                     num(ds.hybrid.confusion.balanced_accuracy()),
                     num(ds.lrt.confusion.balanced_accuracy())});
  }
  write_json(out / "cluster_verdicts.json", records);
  per_dataset.write(out / "cluster_datasets.csv");
  files = {"cluster_verdicts.json", "cluster_datasets.csv"};

  summary["balanced_accuracy_hybrid"] = number_json(report.balanced_accuracy_hybrid());
  summary["balanced_accuracy_lrt"] = number_json(report.balanced_accuracy_lrt());
  summary["confusion_hybrid"] = to_json(report.hybrid);
  summary["confusion_lrt"] = to_json(report.lrt);
  summary["scored_clusters"] = report.hybrid.total();
  summary["skipped_clusters"] = report.skipped;
  summary["datasets"] = report.datasets.size();

  if (r.dump_points) {
    Engine rng = make_engine(r.seed, 0, 0);
    const SyntheticDataset first = generate_dataset(c.params, rng);
    write_points_csv(out / "points_0000.csv", first.points);
    files.push_back("points_0000.csv");
  }
  return {files, summary};
}

inline int execute(const Resolved& r, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir(r.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());

  std::pair<std::vector<std::string>, json> result;
  std::string summary_name;
  if (r.subcommand == "simulate") {
    result = run_experiment(r, dir);
    summary_name = r.experiment + "_summary.json";
  } else if (r.subcommand == "calibrate") {
    Resolved as_fig = r;
    as_fig.experiment = "fig3c";
    result = run_experiment(as_fig, dir);
    summary_name = "calibration_summary.json";
  } else {
    result = run_cluster_validate(r, dir);
    summary_name = "cluster_validation.json";
  }
  auto& [files, summary] = result;
  write_json(dir / summary_name, summary);
  files.push_back(summary_name);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest;
  manifest["tool"] = "span_shrink";
  manifest["version"] = kVersion;
  manifest["subcommand"] = r.subcommand;
  manifest["arguments"] = canonical_args(r);
  manifest["seed"] = r.seed;
  manifest["outputs"] = files;
  manifest["duration_seconds"] = seconds;
  write_json(dir / "manifest.json", manifest);

  out << summary.dump(2) << '\n';
  return 0;
}

}  // namespace detail

/// Runs the tool on `args` (without the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniform-vs-Gaussian tests for 1-D samples by diameter shrinkage", "span_shrink"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Resolved r;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string n_text;
  std::optional<std::size_t> depth;
  std::string config_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed (fallback: $SPAN_SHRINK_SEED)");
    sub->add_option("--runs", runs, "replicates per model per cell / datasets");
    sub->add_option("--n", n_text, "sample size or comma-separated grid");
    sub->add_option("--p", depth, "trimming depth (calibrate: largest depth)");
    sub->add_option("--alpha", r.alpha, "Gaussian curve offset")->capture_default_str();
    sub->add_option("--param-lo", r.param_lo, "lower bound of the L / sigma draws");
    sub->add_option("--param-hi", r.param_hi, "upper bound of the L / sigma draws");
    sub->add_option("--out", r.out_dir, "output directory");
    sub->add_option("--threads", r.threads, "worker threads, 0 = all cores");
    sub->add_option("--config", config_path, "key = value file; flags override it");
  };

  auto* classify = app.add_subcommand("classify", "classify one sample (CSV) and print a JSON verdict");
  std::string classify_input;
  classify->add_option("input", classify_input, "CSV file, one value per line")->required();
  classify->add_option("--method", r.method, "shrinkage | lrt | hybrid")
      ->check(CLI::IsMember({"shrinkage", "lrt", "hybrid"}));
  classify->add_option("--p", depth, "trimming depth");
  classify->add_option("--alpha", r.alpha, "Gaussian curve offset");

  auto* calibrate = app.add_subcommand("calibrate", "accuracy of the shrinkage test versus depth");
  common(calibrate);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiments and tables");
  common(simulate);
  simulate->add_option("--experiment", r.experiment, "fig1 | fig2 | fig3c | fig3d | table1 | table2")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3c", "fig3d", "table1", "table2"}));

  auto* cluster = app.add_subcommand("cluster-validate", "DBSCAN clusters scored by the classifiers");
  common(cluster);
  cluster->add_option("--method", r.method, "classifier for --input runs: hybrid | lrt | shrinkage");
  cluster->add_option("--epsilon", r.epsilon, "DBSCAN radius");
  cluster->add_option("--min-samples", r.min_samples, "DBSCAN core threshold");
  cluster->add_option("--input", r.input, "cluster this point file instead of synthetic data");
  cluster->add_flag("--dump-points", r.dump_points, "write the first synthetic dataset");

  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest.json");
  std::string manifest_path;
  std::string rerun_out;
  rerun->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
  rerun->add_option("--out", rerun_out, "output directory")->required();

  // Config file values go in front of the user's flags so the flags win.
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      try {
        auto extra = detail::config_to_args(args[i + 1]);
        args.insert(args.begin() + 1, extra.begin(), extra.end());
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
      }
      break;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*rerun) {
      std::ifstream in(manifest_path);
      if (!in) throw IoError("cannot open manifest " + manifest_path);
      const json manifest = json::parse(in);
      auto replay = manifest.at("arguments").get<std::vector<std::string>>();
      replay.push_back("--out");
      replay.push_back(rerun_out);
      return run(std::move(replay), out, err);
    }

    if (*classify) {
      const std::vector<double> values = read_points_csv(classify_input);
      const SortedSample sample(values);
      const std::size_t p = depth.value_or(kDefaultDepth);
      Verdict v;
      if (r.method == "shrinkage") {
        v = classify_shrinkage(sample, p, r.alpha);
      } else if (r.method == "lrt") {
        v = classify_lrt(sample);
      } else {
        v = classify_hybrid(sample, p, r.alpha);
      }
      json j = to_json(v);
      j["n"] = sample.size();
      out << j.dump(2) << '\n';
      return 0;
    }

    if (*calibrate) r.subcommand = "calibrate";
    if (*simulate) r.subcommand = "simulate";
    if (*cluster) r.subcommand = "cluster-validate";

    if (seed) {
      r.seed = *seed;
    } else if (const char* env = std::getenv(kSeedEnv); env && *env) {
      try {
        r.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw DomainError(std::string(kSeedEnv) + ": not an unsigned integer");
      }
    }

    // Experiment-specific defaults.
    std::size_t default_runs = 1000;
    std::vector<std::size_t> default_n{100};
    std::size_t default_p = kDefaultDepth;
    const std::string what = r.subcommand == "simulate" ? r.experiment : r.subcommand;
    if (what == "fig1") {
      default_n = {10, 30, 100, 300, 1000, 3000, 10000};
    } else if (what == "fig2") {
      default_runs = 10000;
    } else if (what == "fig3c" || what == "calibrate") {
      default_p = 15;
    } else if (what == "fig3d" || what == "table2") {
      default_runs = 100;
      default_n = {15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100, 150, 200};
    } else if (what == "table1") {
      default_runs = 1;
      default_p = 5;
    } else if (what == "cluster-validate") {
      default_runs = 100;
      default_n = {};
    }
    r.runs = runs.value_or(default_runs);
    r.n_grid = n_text.empty() ? default_n : detail::parse_grid(n_text);
    r.p = depth.value_or(default_p);
    if (r.subcommand != "cluster-validate" && r.n_grid.empty()) {
      throw DomainError("--n: empty list");
    }
    return detail::execute(r, out);
  } catch (const StatisticalError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace span_shrink::cli
