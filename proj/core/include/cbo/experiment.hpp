#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cbo/objectives.hpp"
#include "cbo/psr.hpp"
#include "cbo/quadratic_pbf.hpp"

namespace cbo {

/// Raised for malformed or inconsistent experiment configuration; the CLI
/// maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AfoStrategy {
  kPsr,
  kExhaustive,
  kRandom,
  kLocalSearch,
};

std::string to_string(AfoStrategy strategy);
AfoStrategy afo_strategy_from_string(const std::string& name);

struct BqpParams {
  double correlation_length = 1.0;
};

struct ContaminationParams {
  double violation_penalty = 1.0;
  int trajectory_count = 100;
  double epsilon = 0.05;
  double upper_limit = 0.1;
  double stage_cost = 1.0;
};

struct IsingParams {
  int grid_side = 3;
  double coupling_min = 0.05;
  double coupling_max = 5.0;
};

struct SurrogateParams {
  int burn_in = 500;
  double intercept_prior_variance = 100.0;
};

struct ExperimentConfig {
  std::string benchmark;  // bqp | contamination | ising | labs
  int dimension = 0;
  BqpParams bqp;
  ContaminationParams contamination;
  IsingParams ising;
  AfoStrategy afo = AfoStrategy::kPsr;
  PsrParams psr;
  SurrogateParams surrogate;
  int n_init = 20;
  int n_iters = 250;
  double lambda_reg = 0.0;
  std::uint64_t seed = 0;
  std::string output = "trace.csv";
};

/// Parses the JSON experiment document. Top-level keys are exactly
/// {benchmark, n, benchmark_params, afo, psr_params, surrogate_params,
/// n_init, n_iters, lambda_reg, seed, output}; unknown keys anywhere are
/// rejected. When lambda_reg is omitted it defaults per benchmark (0.001 for
/// bqp, 0.0001 for contamination and ising, 0 for labs).
ExperimentConfig parse_config(const std::string& json_text);

/// Re-validates a config after programmatic edits (the CLI overrides).
void validate_config(const ExperimentConfig& config);

/// Canonical JSON echo of a config (alphabetically ordered keys).
std::string config_to_json(const ExperimentConfig& config);

/// Instantiates the configured objective; the instance is seeded with
/// config.seed, so a config pins the black box completely.
Benchmark make_benchmark(const ExperimentConfig& config);

struct ExperimentRow {
  int iteration = 0;
  BinaryVector x;
  double y = 0.0;
  double best_so_far = 0.0;
  std::optional<double> afo_time_ms;      // empty on the initial design rows
  std::optional<double> afo_objective;    // acquisition value at the chosen x
  std::optional<double> afo_lower_bound;  // PSR only
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  BinaryVector best_x;
  double best_value = 0.0;
};

/// Optional per-iteration inspection hook: receives the sampled acquisition
/// quadratic and the row just produced (acquisition rows only).
using AfoObserver = std::function<void(int iteration, const QuadraticPbf& acquisition,
                                       const ExperimentRow& row)>;

/// The full Bayesian optimization loop: n_init seeded uniform evaluations,
/// then n_iters rounds of fit / Thompson draw / acquisition minimization /
/// evaluation. The acquisition timer covers only the minimization call.
/// Identical configs reproduce identical traces apart from wall times.
ExperimentRecord run_bo(const ExperimentConfig& config, const AfoObserver& observer = {});

/// Writes the trace in the fixed CSV layout: header
/// iteration,x,y,best_so_far,afo_time_ms,afo_objective,afo_lower_bound
/// with empty cells where a column does not apply.
void write_trace_csv(const ExperimentRecord& record, std::ostream& out);
std::string trace_csv(const ExperimentRecord& record);

/// Steepest-descent single-bit-flip local search from `restarts` seeded
/// uniform starts. Every returned point is single-flip optimal.
PointValue local_search_afo(const QuadraticPbf& f, int restarts, std::uint64_t seed);

/// Best of `budget` seeded uniform points. A budget covering the whole cube
/// (budget >= 2^n, n <= 24) switches to exact enumeration.
PointValue random_search_afo(const QuadraticPbf& f, int budget, std::uint64_t seed);

/// Exhaustive minimization of an arbitrary black box over {0,1}^dimension
/// with the lexicographic tie-break; dimensions above 24 are rejected.
PointValue enumerate_minimum(int dimension, const std::function<double(const BinaryVector&)>& objective);

struct AfoMetricsRow {
  int dimension = 0;
  double candidate_mean_time_ms = 0.0;
  double baseline_mean_time_ms = 0.0;
  double candidate_time_normalized = 0.0;
  double baseline_time_normalized = 0.0;
  double mean_percent_improvement = 0.0;
};

/// Summarizes paired runs that share a config apart from the AFO strategy:
/// mean acquisition wall time per side (normalized by the candidate mean at
/// the smallest dimension present) and the mean percentage improvement
/// 100 (af_baseline - af_candidate) / |af_baseline| over acquisition rows,
/// skipping rows where |af_baseline| < 1e-12. Rows come back sorted by
/// dimension. Mismatched pairs are rejected.
std::vector<AfoMetricsRow> afo_metrics(
    const std::vector<std::pair<ExperimentRecord, ExperimentRecord>>& pairs);

}  // namespace cbo
