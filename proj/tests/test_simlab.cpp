#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "span_shrink/simlab.hpp"

using Catch::Matchers::WithinAbs;
namespace ss = span_shrink;

namespace {

double auc_pairwise(const std::vector<double>& score, const std::vector<int>& label) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < score.size(); ++i) {
    if (!label[i]) continue;
    for (std::size_t j = 0; j < score.size(); ++j) {
      if (label[j]) continue;
      pairs += 1.0;
      if (score[i] > score[j]) wins += 1.0;
      else if (score[i] == score[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

void check_identical(const ss::AccuracyReport& a, const ss::AccuracyReport& b) {
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].correct == b.cells[i].correct);
    CHECK(a.cells[i].errors == b.cells[i].errors);
    CHECK(same_bits(a.cells[i].accuracy, b.cells[i].accuracy));
    CHECK(same_bits(a.cells[i].auc_confidence, b.cells[i].auc_confidence));
  }
  REQUIRE(a.aggregate.size() == b.aggregate.size());
  for (std::size_t i = 0; i < a.aggregate.size(); ++i) {
    CHECK(same_bits(a.aggregate[i].accuracy, b.aggregate[i].accuracy));
    CHECK(same_bits(a.aggregate[i].auc, b.aggregate[i].auc));
  }
}

}  // namespace

TEST_CASE("AUC by ranks equals pairwise counting") {
  CHECK(ss::auc_mann_whitney(std::vector<double>{0.1, 0.2, 0.8, 0.9},
                             std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(ss::auc_mann_whitney(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                             std::vector<int>{0, 0, 1, 1}) == 0.0);
  CHECK(ss::auc_mann_whitney(std::vector<double>{1, 1, 1, 1}, std::vector<int>{0, 1, 0, 1}) == 0.5);
  CHECK(std::isnan(ss::auc_mann_whitney(std::vector<double>{1, 2}, std::vector<int>{1, 1})));
  CHECK_THROWS_AS(ss::auc_mann_whitney(std::vector<double>{1, 2}, std::vector<int>{1}),
                  ss::DomainError);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coarse(0, 6);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> score(60);
    std::vector<int> label(60);
    for (std::size_t i = 0; i < score.size(); ++i) {
      score[i] = coarse(rng) * 0.5;  // heavy ties
      label[i] = coin(rng);
    }
    label[0] = 1;
    label[1] = 0;
    CHECK_THAT(ss::auc_mann_whitney(score, label), WithinAbs(auc_pairwise(score, label), 1e-14));
  }
}

TEST_CASE("seed derivation") {
  CHECK(ss::derive_seed(1, 2, 3) == ss::derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 20; ++c) {
    for (std::uint64_t r = 0; r < 50; ++r) seen.insert(ss::derive_seed(42, c, r));
  }
  CHECK(seen.size() == 1000);
  CHECK(ss::derive_seed(1, 0, 1) != ss::derive_seed(1, 1, 0));
  auto a = ss::make_engine(9, 1, 2);
  auto b = ss::make_engine(9, 1, 2);
  CHECK(a() == b());
}

TEST_CASE("trial summaries skip errors") {
  const std::vector<ss::Trial> trials{
      {0, 0, 0.1, false}, {1, 1, 0.9, false}, {1, 0, 0.4, false}, {0, 0, 0.0, true}};
  const auto row = ss::summarize_trials(ss::Method::LRT, 10, 6, trials);
  CHECK(row.trials == 3);
  CHECK(row.errors == 1);
  CHECK(row.correct == 2);
  CHECK_THAT(row.accuracy, WithinAbs(2.0 / 3.0, 1e-15));
  CHECK_THAT(row.auc, WithinAbs(0.75, 1e-15));
  CHECK_THAT(row.auc_confidence, WithinAbs(1.0, 1e-15));
}

TEST_CASE("config validation") {
  ss::ExperimentConfig c;
  c.runs = 0;
  CHECK_THROWS_AS(c.validate(), ss::DomainError);
  c = {};
  c.param_lo = 5;
  c.param_hi = 5;
  CHECK_THROWS_AS(c.validate(), ss::DomainError);
  c = {};
  c.n_grid = {1};
  CHECK_THROWS_AS(c.validate(), ss::DomainError);
  c = {};
  c.p_grid = {0};
  CHECK_THROWS_AS(c.validate(), ss::DomainError);
  c = {};
  c.n_grid = {10};
  c.runs = 5;
  CHECK_THROWS_AS(ss::run_shrinkage_curves(c), ss::DomainError);
}

TEST_CASE("shrinkage curve experiment layout") {
  ss::ExperimentConfig c;
  c.runs = 200;
  c.n_grid = {50, 100};
  c.p_grid = {4};
  const auto rows = ss::run_shrinkage_curves(c);
  REQUIRE(rows.size() == 2 * 2 * 4);
  CHECK(rows[0].model == ss::Model::Uniform);
  CHECK(rows[4].model == ss::Model::Gaussian);
  CHECK(rows[8].n == 100);
  for (const auto& row : rows) {
    CHECK(row.mc_std > 0.0);
    CHECK(std::abs(row.mc_mean - row.expected) < 0.05);
    if (row.model == ss::Model::Uniform) CHECK(row.expected == row.expected_unshifted);
    else CHECK_THAT(row.expected_unshifted - row.expected, WithinAbs(c.alpha, 1e-15));
  }
}

TEST_CASE("max statistic experiment") {
  ss::ExperimentConfig c;
  c.runs = 500;
  c.n_grid = {2, 100};
  const auto rows = ss::run_max_statistics(c);
  REQUIRE(rows.size() == 2);
  CHECK(std::isnan(rows[0].estimate_refined));
  CHECK(rows[1].mean_abs_max > rows[1].mean_max);
  CHECK(std::abs(rows[1].mean_max - 2.5076) < 0.1);
}

TEST_CASE("experiments are identical for any thread count") {
  ss::ExperimentConfig c;
  c.seed = 321;
  c.runs = 60;
  c.n_grid = {15, 40, 100};
  c.p_grid = {6};
  c.threads = 1;
  const auto serial = ss::compare_methods(c);
  c.threads = 4;
  const auto parallel = ss::compare_methods(c);
  check_identical(serial, parallel);

  ss::ExperimentConfig k;
  k.runs = 50;
  k.p_grid = {1, 2, 3, 4, 5, 6};
  k.threads = 1;
  const auto k1 = ss::calibrate_p(k);
  k.threads = 3;
  check_identical(k1, ss::calibrate_p(k));

  ss::ExperimentConfig m;
  m.runs = 100;
  m.n_grid = {30, 300};
  m.threads = 1;
  const auto m1 = ss::run_max_statistics(m);
  m.threads = 5;
  const auto m2 = ss::run_max_statistics(m);
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(same_bits(m1[i].mean_abs_max, m2[i].mean_abs_max));
}

TEST_CASE("method comparison shares samples between methods") {
  ss::ExperimentConfig c;
  c.runs = 40;
  c.n_grid = {30, 100};
  const auto report = ss::compare_methods(c);
  REQUIRE(report.cells.size() == 6);
  REQUIRE(report.aggregate.size() == 3);
  // n = 30 is inside the shrinkage regime: hybrid agrees with shrinkage.
  CHECK(report.cells[2].correct == report.cells[1].correct);
  // n = 100 is outside: hybrid agrees with the LRT.
  CHECK(report.cells[5].correct == report.cells[3].correct);
  CHECK(report.find_aggregate(ss::Method::Hybrid) != nullptr);
  CHECK_THAT(report.find_aggregate(ss::Method::LRT)->accuracy,
             WithinAbs(0.5 * (report.cells[0].accuracy + report.cells[3].accuracy), 1e-15));
}

TEST_CASE("tail approximation table") {
  const auto rows = ss::compare_tail_approximations(100, 5);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].k == 100);
  CHECK(rows[4].k == 96);
  CHECK(rows[0].abs_difference < 1e-12);
  for (std::size_t j = 1; j < rows.size(); ++j) {
    CHECK(rows[j].abs_difference > rows[j - 1].abs_difference);
  }
}
