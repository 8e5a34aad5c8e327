#include "cbo/experiment.hpp"

#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

using cbo::AfoStrategy;
using cbo::BinaryVector;
using cbo::ExperimentConfig;
using cbo::ExperimentRecord;
using cbo::ExperimentRow;

namespace {

ExperimentConfig small_labs_config() {
  ExperimentConfig config;
  config.benchmark = "labs";
  config.dimension = 8;
  config.n_init = 4;
  config.n_iters = 4;
  config.lambda_reg = 0.0;
  config.surrogate.burn_in = 30;
  config.seed = 3;
  return config;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

ExperimentRecord synthetic_record(const ExperimentConfig& config,
                                  const std::vector<double>& afo_objectives,
                                  const std::vector<double>& afo_times) {
  ExperimentRecord record;
  record.config = config;
  for (std::size_t k = 0; k < afo_objectives.size(); ++k) {
    ExperimentRow row;
    row.iteration = static_cast<int>(k);
    row.x = BinaryVector(config.dimension);
    row.y = afo_objectives[k];
    row.best_so_far = afo_objectives[k];
    row.afo_time_ms = afo_times[k];
    row.afo_objective = afo_objectives[k];
    record.rows.push_back(row);
  }
  return record;
}

}  // namespace

TEST_CASE("parse_config: full document round trip") {
  const std::string text = R"({
    "benchmark": "bqp",
    "n": 12,
    "benchmark_params": {"alpha_corr": 2.0},
    "afo": "local-search",
    "psr_params": {"max_outer_iters": 7, "step_size_0": 0.5, "tolerance": 1e-8,
                   "lambda_init": "uniform-random"},
    "surrogate_params": {"burn_in": 200, "intercept_prior_variance": 50.0},
    "n_init": 5,
    "n_iters": 9,
    "lambda_reg": 0.01,
    "seed": 17,
    "output": "out.csv"
  })";
  const ExperimentConfig config = cbo::parse_config(text);
  CHECK(config.benchmark == "bqp");
  CHECK(config.dimension == 12);
  CHECK(config.bqp.correlation_length == 2.0);
  CHECK(config.afo == AfoStrategy::kLocalSearch);
  CHECK(config.psr.max_outer_iters == 7);
  CHECK(config.psr.step_size_0 == 0.5);
  CHECK(config.psr.lambda_init == cbo::LambdaInit::kUniformRandom);
  CHECK(config.surrogate.burn_in == 200);
  CHECK(config.n_init == 5);
  CHECK(config.n_iters == 9);
  CHECK(config.lambda_reg == 0.01);
  CHECK(config.seed == 17);
  CHECK(config.output == "out.csv");
}

TEST_CASE("parse_config: per-benchmark regularization defaults") {
  CHECK(cbo::parse_config(R"({"benchmark":"bqp","n":5})").lambda_reg == 0.001);
  CHECK(cbo::parse_config(R"({"benchmark":"contamination","n":5})").lambda_reg == 0.0001);
  CHECK(cbo::parse_config(R"({"benchmark":"ising","n":12})").lambda_reg == 0.0001);
  CHECK(cbo::parse_config(R"({"benchmark":"labs","n":5})").lambda_reg == 0.0);
}

TEST_CASE("parse_config rejects malformed documents") {
  CHECK_THROWS_AS(cbo::parse_config("not json"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp"})"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"n":5})"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp","n":5,"mystery":1})"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp","n":5,"benchmark_params":{"rho":1}})"),
                  cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"spin-glass","n":5})"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp","n":0})"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp","n":5,"n_init":0})"), cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp","n":5,"lambda_reg":-1})"),
                  cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"bqp","n":30,"afo":"exhaustive"})"),
                  cbo::ConfigError);
  CHECK_THROWS_AS(cbo::parse_config(R"({"benchmark":"ising","n":11})"), cbo::ConfigError);
  CHECK_THROWS_AS(
      cbo::parse_config(R"({"benchmark":"bqp","n":5,"psr_params":{"lambda_init":"ones"}})"),
      cbo::ConfigError);
}

TEST_CASE("make_benchmark: ising dimension follows the grid") {
  ExperimentConfig config;
  config.benchmark = "ising";
  config.dimension = 12;
  config.lambda_reg = 0.0001;
  const cbo::Benchmark benchmark = cbo::make_benchmark(config);
  CHECK(benchmark.dimension == 12);
  BinaryVector ones(12);
  for (int i = 0; i < 12; ++i) ones.set_bit(i, true);
  CHECK(benchmark.objective(ones) == doctest::Approx(0.0001 * 12).epsilon(1e-9));
}

TEST_CASE("run_bo: record shape and running minimum") {
  ExperimentConfig config = small_labs_config();
  const ExperimentRecord record = cbo::run_bo(config);
  REQUIRE(record.rows.size() == static_cast<std::size_t>(config.n_init + config.n_iters));

  double best = record.rows.front().y;
  for (std::size_t k = 0; k < record.rows.size(); ++k) {
    const ExperimentRow& row = record.rows[k];
    CHECK(row.iteration == static_cast<int>(k));
    best = std::min(best, row.y);
    CHECK(row.best_so_far == doctest::Approx(best).epsilon(1e-15));
    if (k < static_cast<std::size_t>(config.n_init)) {
      CHECK(!row.afo_time_ms.has_value());
      CHECK(!row.afo_objective.has_value());
    } else {
      CHECK(row.afo_time_ms.has_value());
      CHECK(row.afo_objective.has_value());
    }
  }
  CHECK(record.best_value == doctest::Approx(best).epsilon(1e-15));
}

TEST_CASE("run_bo: exhaustive strategy reports the sampled quadratic's optimum") {
  ExperimentConfig config = small_labs_config();
  config.afo = AfoStrategy::kExhaustive;
  cbo::run_bo(config, [](int, const cbo::QuadraticPbf& acquisition, const ExperimentRow& row) {
    const auto [x, value] =
        oracle::minimize(acquisition.dimension(),
                         [&](const BinaryVector& p) { return acquisition.evaluate(p); });
    REQUIRE(row.afo_objective.has_value());
    CHECK(*row.afo_objective == doctest::Approx(value).epsilon(1e-9));
    CHECK(acquisition.evaluate(row.x) == doctest::Approx(value).epsilon(1e-9));
  });
}

TEST_CASE("run_bo: psr rows carry a sound lower bound") {
  ExperimentConfig config = small_labs_config();
  config.afo = AfoStrategy::kPsr;
  const ExperimentRecord record = cbo::run_bo(config);
  for (std::size_t k = static_cast<std::size_t>(config.n_init); k < record.rows.size(); ++k) {
    REQUIRE(record.rows[k].afo_lower_bound.has_value());
    CHECK(*record.rows[k].afo_lower_bound <= *record.rows[k].afo_objective + 1e-9);
  }
}

TEST_CASE("run_bo: identical configs give identical traces apart from wall time") {
  const ExperimentConfig config = small_labs_config();
  const std::string a = cbo::trace_csv(cbo::run_bo(config));
  const std::string b = cbo::trace_csv(cbo::run_bo(config));
  const auto rows_a = parse_csv(a);
  const auto rows_b = parse_csv(b);
  REQUIRE(rows_a.size() == rows_b.size());
  REQUIRE(rows_a.front() ==
          std::vector<std::string>{"iteration", "x", "y", "best_so_far", "afo_time_ms",
                                   "afo_objective", "afo_lower_bound"});
  for (std::size_t r = 0; r < rows_a.size(); ++r) {
    REQUIRE(rows_a[r].size() == 7);
    REQUIRE(rows_b[r].size() == 7);
    for (std::size_t c = 0; c < 7; ++c) {
      if (c == 4) continue;  // wall time is physical
      CHECK(rows_a[r][c] == rows_b[r][c]);
    }
  }
}

TEST_CASE("local search: single-flip optimality certificate") {
  const cbo::QuadraticPbf f = oracle::random_submodular_pbf(12, 4);
  const cbo::PointValue result = cbo::local_search_afo(f, 20, 3);
  for (int i = 0; i < 12; ++i) {
    BinaryVector neighbor = result.x;
    neighbor.flip_bit(i);
    CHECK(result.value <= f.evaluate(neighbor) + 1e-12);
  }
  CHECK(result.value == doctest::Approx(f.evaluate(result.x)).epsilon(1e-12));
}

TEST_CASE("local search: mostly finds the global optimum at n = 10") {
  int hits = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const cbo::QuadraticPbf f = oracle::random_pbf(10, 3000 + trial);
    const auto [x, value] = oracle::minimize(10, [&](const BinaryVector& p) { return f.evaluate(p); });
    const cbo::PointValue result = cbo::local_search_afo(f, 50, trial);
    if (std::abs(result.value - value) <= 1e-9) ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("local search is deterministic for a fixed seed") {
  const cbo::QuadraticPbf f = oracle::random_pbf(9, 8);
  const cbo::PointValue a = cbo::local_search_afo(f, 1, 77);
  const cbo::PointValue b = cbo::local_search_afo(f, 1, 77);
  CHECK(a.x == b.x);
  CHECK(a.value == b.value);
}

TEST_CASE("random search: budget one is a single seeded draw") {
  const cbo::QuadraticPbf f = oracle::random_pbf(30, 12);  // beyond enumeration
  const cbo::PointValue a = cbo::random_search_afo(f, 1, 5);
  const cbo::PointValue b = cbo::random_search_afo(f, 1, 5);
  CHECK(a.x == b.x);
  CHECK(a.value == doctest::Approx(f.evaluate(a.x)).epsilon(1e-12));
}

TEST_CASE("random search: value never increases with a nested budget") {
  const cbo::QuadraticPbf f = oracle::random_pbf(28, 13);
  double previous = cbo::random_search_afo(f, 1, 9).value;
  for (int budget = 2; budget <= 40; ++budget) {
    const double value = cbo::random_search_afo(f, budget, 9).value;
    CHECK(value <= previous + 1e-15);
    previous = value;
  }
}

TEST_CASE("random search: a budget covering the cube is exhaustive") {
  const cbo::QuadraticPbf f = oracle::random_pbf(8, 14);
  const cbo::PointValue result = cbo::random_search_afo(f, 256, 1);
  const cbo::PointValue exact = cbo::brute_force_minimize(f);
  CHECK(result.value == exact.value);
  CHECK(result.x == exact.x);
}

TEST_CASE("afo_metrics: identical records give zero improvement, unit ratio") {
  ExperimentConfig config = small_labs_config();
  config.afo = AfoStrategy::kPsr;
  ExperimentRecord candidate = synthetic_record(config, {-1.0, -2.0, -3.0}, {10.0, 10.0, 10.0});
  ExperimentConfig baseline_config = config;
  baseline_config.afo = AfoStrategy::kLocalSearch;
  ExperimentRecord baseline = synthetic_record(baseline_config, {-1.0, -2.0, -3.0}, {10.0, 10.0, 10.0});

  const auto rows = cbo::afo_metrics({{candidate, baseline}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_percent_improvement == doctest::Approx(0.0));
  CHECK(rows[0].candidate_time_normalized == doctest::Approx(1.0));
  CHECK(rows[0].baseline_time_normalized == doctest::Approx(1.0));
}

TEST_CASE("afo_metrics: one-iteration formula instance") {
  ExperimentConfig config = small_labs_config();
  config.afo = AfoStrategy::kPsr;
  ExperimentConfig baseline_config = config;
  baseline_config.afo = AfoStrategy::kRandom;
  ExperimentRecord candidate = synthetic_record(config, {-2.5}, {1.0});
  ExperimentRecord baseline = synthetic_record(baseline_config, {-2.0}, {1.0});
  const auto rows = cbo::afo_metrics({{candidate, baseline}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_percent_improvement == doctest::Approx(25.0));
}

TEST_CASE("afo_metrics: timing normalization uses the smallest dimension") {
  ExperimentConfig small = small_labs_config();
  small.dimension = 10;
  small.afo = AfoStrategy::kPsr;
  ExperimentConfig small_baseline = small;
  small_baseline.afo = AfoStrategy::kLocalSearch;

  ExperimentConfig large = small;
  large.dimension = 20;
  ExperimentConfig large_baseline = large;
  large_baseline.afo = AfoStrategy::kLocalSearch;

  const auto rows = cbo::afo_metrics({
      {synthetic_record(small, {-1.0}, {10.0}), synthetic_record(small_baseline, {-1.0}, {30.0})},
      {synthetic_record(large, {-1.0}, {40.0}), synthetic_record(large_baseline, {-1.0}, {80.0})},
  });
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].dimension == 10);
  CHECK(rows[0].candidate_time_normalized == doctest::Approx(1.0));
  CHECK(rows[0].baseline_time_normalized == doctest::Approx(3.0));
  CHECK(rows[1].dimension == 20);
  CHECK(rows[1].candidate_time_normalized == doctest::Approx(4.0));
  CHECK(rows[1].baseline_time_normalized == doctest::Approx(8.0));
}

TEST_CASE("afo_metrics: improvement is antisymmetric on equal-magnitude fixtures") {
  ExperimentConfig config = small_labs_config();
  config.afo = AfoStrategy::kPsr;
  ExperimentConfig baseline_config = config;
  baseline_config.afo = AfoStrategy::kRandom;
  ExperimentRecord a = synthetic_record(config, {-2.0, 4.0}, {1.0, 1.0});
  ExperimentRecord b = synthetic_record(baseline_config, {2.0, -4.0}, {1.0, 1.0});

  const double forward = cbo::afo_metrics({{a, b}})[0].mean_percent_improvement;
  ExperimentRecord a_swapped = a;
  a_swapped.config.afo = AfoStrategy::kRandom;
  ExperimentRecord b_swapped = b;
  b_swapped.config.afo = AfoStrategy::kPsr;
  const double backward = cbo::afo_metrics({{b_swapped, a_swapped}})[0].mean_percent_improvement;
  CHECK(forward == doctest::Approx(-backward).epsilon(1e-12));
}

TEST_CASE("afo_metrics rejects mismatched pairs") {
  ExperimentConfig config = small_labs_config();
  config.afo = AfoStrategy::kPsr;
  ExperimentRecord candidate = synthetic_record(config, {-1.0}, {1.0});

  ExperimentRecord same_strategy = synthetic_record(config, {-1.0}, {1.0});
  CHECK_THROWS_AS(cbo::afo_metrics({{candidate, same_strategy}}), std::invalid_argument);

  ExperimentConfig other = config;
  other.afo = AfoStrategy::kRandom;
  other.seed = 999;
  ExperimentRecord different_seed = synthetic_record(other, {-1.0}, {1.0});
  CHECK_THROWS_AS(cbo::afo_metrics({{candidate, different_seed}}), std::invalid_argument);
}

TEST_CASE("enumerate_minimum also breaks ties lexicographically") {
  const auto result = cbo::enumerate_minimum(3, [](const BinaryVector& x) {
    return x.bit(0) ? 1.0 : 0.0;  // every x starting with 0 ties at 0
  });
  CHECK(result.value == 0.0);
  CHECK(result.x == BinaryVector{0, 0, 0});
  CHECK_THROWS_AS(cbo::enumerate_minimum(25, [](const BinaryVector&) { return 0.0; }),
                  std::invalid_argument);
}
