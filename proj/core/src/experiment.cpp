#include "cbo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "cbo/surrogate.hpp"
#include "json.hpp"

namespace cbo {

namespace {

constexpr double kImprovementDenominatorGuard = 1e-12;
constexpr int kRandomAfoBudget = 1;
constexpr int kLocalSearchRestarts = 20;
constexpr int kEnumerationBudgetBits = 24;

std::uint64_t splitmix64(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ULL;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
  return v ^ (v >> 31);
}

BinaryVector random_point(std::mt19937_64& rng, int dimension) {
  std::uniform_int_distribution<int> coin(0, 1);
  BinaryVector x(dimension);
  for (int i = 0; i < dimension; ++i) {
    x.set_bit(i, coin(rng) == 1);
  }
  return x;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string format_time_ms(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.3f", v);
  return buffer;
}

void reject_unknown_keys(const nlohmann::json& object, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& item : object.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

double default_lambda_reg(const std::string& benchmark) {
  if (benchmark == "bqp") return 0.001;
  if (benchmark == "contamination" || benchmark == "ising") return 0.0001;
  return 0.0;
}

bool configs_comparable(const ExperimentConfig& a, const ExperimentConfig& b) {
  ExperimentConfig left = a;
  ExperimentConfig right = b;
  left.afo = right.afo;
  left.output = right.output;
  return config_to_json(left) == config_to_json(right);
}

struct AfoOutcome {
  BinaryVector x;
  double value = 0.0;
  std::optional<double> lower_bound;
};

AfoOutcome run_afo(const ExperimentConfig& config, const QuadraticPbf& acquisition,
                   std::uint64_t seed) {
  switch (config.afo) {
    case AfoStrategy::kPsr: {
      PsrResult r = psr_minimize(acquisition, config.psr, seed);
      return {std::move(r.best_x), r.best_value, r.best_lower_bound};
    }
    case AfoStrategy::kExhaustive: {
      PointValue pv = brute_force_minimize(acquisition);
      return {std::move(pv.x), pv.value, std::nullopt};
    }
    case AfoStrategy::kRandom: {
      PointValue pv = random_search_afo(acquisition, kRandomAfoBudget, seed);
      return {std::move(pv.x), pv.value, std::nullopt};
    }
    case AfoStrategy::kLocalSearch: {
      PointValue pv = local_search_afo(acquisition, kLocalSearchRestarts, seed);
      return {std::move(pv.x), pv.value, std::nullopt};
    }
  }
  throw std::logic_error("run_afo: unhandled strategy");
}

}  // namespace

std::string to_string(AfoStrategy strategy) {
  switch (strategy) {
    case AfoStrategy::kPsr: return "psr";
    case AfoStrategy::kExhaustive: return "exhaustive";
    case AfoStrategy::kRandom: return "random";
    case AfoStrategy::kLocalSearch: return "local-search";
  }
  return "?";
}

AfoStrategy afo_strategy_from_string(const std::string& name) {
  if (name == "psr") return AfoStrategy::kPsr;
  if (name == "exhaustive") return AfoStrategy::kExhaustive;
  if (name == "random") return AfoStrategy::kRandom;
  if (name == "local-search") return AfoStrategy::kLocalSearch;
  throw ConfigError("unknown afo strategy \"" + name + "\"");
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"benchmark", "n", "benchmark_params", "afo", "psr_params",
                       "surrogate_params", "n_init", "n_iters", "lambda_reg", "seed", "output"},
                      "config");

  ExperimentConfig config;
  try {
    if (!doc.contains("benchmark")) throw ConfigError("missing \"benchmark\"");
    config.benchmark = doc.at("benchmark").get<std::string>();
    if (!doc.contains("n")) throw ConfigError("missing \"n\"");
    config.dimension = doc.at("n").get<int>();

    if (doc.contains("benchmark_params")) {
      const nlohmann::json& params = doc.at("benchmark_params");
      if (!params.is_object()) throw ConfigError("benchmark_params must be an object");
      if (config.benchmark == "bqp") {
        reject_unknown_keys(params, {"alpha_corr"}, "benchmark_params");
        if (params.contains("alpha_corr")) {
          config.bqp.correlation_length = params.at("alpha_corr").get<double>();
        }
      } else if (config.benchmark == "contamination") {
        reject_unknown_keys(params, {"rho", "t_samples", "epsilon", "upper_limit", "stage_cost"},
                            "benchmark_params");
        auto& c = config.contamination;
        if (params.contains("rho")) c.violation_penalty = params.at("rho").get<double>();
        if (params.contains("t_samples")) c.trajectory_count = params.at("t_samples").get<int>();
        if (params.contains("epsilon")) c.epsilon = params.at("epsilon").get<double>();
        if (params.contains("upper_limit")) c.upper_limit = params.at("upper_limit").get<double>();
        if (params.contains("stage_cost")) c.stage_cost = params.at("stage_cost").get<double>();
      } else if (config.benchmark == "ising") {
        reject_unknown_keys(params, {"grid_side", "coupling_min", "coupling_max"},
                            "benchmark_params");
        auto& is = config.ising;
        if (params.contains("grid_side")) is.grid_side = params.at("grid_side").get<int>();
        if (params.contains("coupling_min")) is.coupling_min = params.at("coupling_min").get<double>();
        if (params.contains("coupling_max")) is.coupling_max = params.at("coupling_max").get<double>();
      } else if (config.benchmark == "labs") {
        reject_unknown_keys(params, {}, "benchmark_params");
      }
    }

    if (doc.contains("afo")) {
      config.afo = afo_strategy_from_string(doc.at("afo").get<std::string>());
    }

    if (doc.contains("psr_params")) {
      const nlohmann::json& params = doc.at("psr_params");
      if (!params.is_object()) throw ConfigError("psr_params must be an object");
      reject_unknown_keys(params, {"max_outer_iters", "step_size_0", "tolerance", "lambda_init"},
                          "psr_params");
      if (params.contains("max_outer_iters")) {
        config.psr.max_outer_iters = params.at("max_outer_iters").get<int>();
      }
      if (params.contains("step_size_0")) {
        config.psr.step_size_0 = params.at("step_size_0").get<double>();
      }
      if (params.contains("tolerance")) {
        config.psr.tolerance = params.at("tolerance").get<double>();
      }
      if (params.contains("lambda_init")) {
        const std::string init = params.at("lambda_init").get<std::string>();
        if (init == "half") {
          config.psr.lambda_init = LambdaInit::kHalf;
        } else if (init == "uniform-random") {
          config.psr.lambda_init = LambdaInit::kUniformRandom;
        } else {
          throw ConfigError("lambda_init must be \"half\" or \"uniform-random\"");
        }
      }
    }

    if (doc.contains("surrogate_params")) {
      const nlohmann::json& params = doc.at("surrogate_params");
      if (!params.is_object()) throw ConfigError("surrogate_params must be an object");
      reject_unknown_keys(params, {"burn_in", "intercept_prior_variance"}, "surrogate_params");
      if (params.contains("burn_in")) {
        config.surrogate.burn_in = params.at("burn_in").get<int>();
      }
      if (params.contains("intercept_prior_variance")) {
        config.surrogate.intercept_prior_variance =
            params.at("intercept_prior_variance").get<double>();
      }
    }

    if (doc.contains("n_init")) config.n_init = doc.at("n_init").get<int>();
    if (doc.contains("n_iters")) config.n_iters = doc.at("n_iters").get<int>();
    config.lambda_reg = doc.contains("lambda_reg") ? doc.at("lambda_reg").get<double>()
                                                   : default_lambda_reg(config.benchmark);
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("output")) config.output = doc.at("output").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }

  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& config) {
  static const std::vector<std::string> kBenchmarks = {"bqp", "contamination", "ising", "labs"};
  if (std::find(kBenchmarks.begin(), kBenchmarks.end(), config.benchmark) == kBenchmarks.end()) {
    throw ConfigError("benchmark must be one of bqp, contamination, ising, labs");
  }
  if (config.dimension < 1) throw ConfigError("n must be at least 1");
  if (config.n_init < 1) throw ConfigError("n_init must be at least 1");
  if (config.n_iters < 1) throw ConfigError("n_iters must be at least 1");
  if (config.lambda_reg < 0.0) throw ConfigError("lambda_reg must be non-negative");
  if (config.psr.max_outer_iters < 1) throw ConfigError("max_outer_iters must be at least 1");
  if (!(config.psr.step_size_0 > 0.0)) throw ConfigError("step_size_0 must be positive");
  if (config.psr.tolerance < 0.0) throw ConfigError("tolerance must be non-negative");
  if (config.surrogate.burn_in < 0) throw ConfigError("burn_in must be non-negative");
  if (!(config.surrogate.intercept_prior_variance > 0.0)) {
    throw ConfigError("intercept_prior_variance must be positive");
  }
  if (config.afo == AfoStrategy::kExhaustive && config.dimension > kEnumerationBudgetBits) {
    throw ConfigError("the exhaustive strategy supports n <= 24 only");
  }

  if (config.benchmark == "bqp") {
    if (!(config.bqp.correlation_length > 0.0)) throw ConfigError("alpha_corr must be positive");
  } else if (config.benchmark == "contamination") {
    if (config.contamination.trajectory_count < 1) throw ConfigError("t_samples must be at least 1");
  } else if (config.benchmark == "ising") {
    const int side = config.ising.grid_side;
    if (side < 2 || side * side > 16) throw ConfigError("grid_side must be 2, 3, or 4");
    const int edge_count = 2 * side * (side - 1);
    if (config.dimension != edge_count) {
      throw ConfigError("for an ising grid of side " + std::to_string(side) + ", n must equal " +
                        std::to_string(edge_count));
    }
  } else if (config.benchmark == "labs") {
    if (config.dimension < 2) throw ConfigError("labs requires n >= 2");
  }
}

std::string config_to_json(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["benchmark"] = config.benchmark;
  doc["n"] = config.dimension;
  if (config.benchmark == "bqp") {
    doc["benchmark_params"] = {{"alpha_corr", config.bqp.correlation_length}};
  } else if (config.benchmark == "contamination") {
    doc["benchmark_params"] = {{"rho", config.contamination.violation_penalty},
                               {"t_samples", config.contamination.trajectory_count},
                               {"epsilon", config.contamination.epsilon},
                               {"upper_limit", config.contamination.upper_limit},
                               {"stage_cost", config.contamination.stage_cost}};
  } else if (config.benchmark == "ising") {
    doc["benchmark_params"] = {{"grid_side", config.ising.grid_side},
                               {"coupling_min", config.ising.coupling_min},
                               {"coupling_max", config.ising.coupling_max}};
  } else {
    doc["benchmark_params"] = nlohmann::json::object();
  }
  doc["afo"] = to_string(config.afo);
  doc["psr_params"] = {
      {"max_outer_iters", config.psr.max_outer_iters},
      {"step_size_0", config.psr.step_size_0},
      {"tolerance", config.psr.tolerance},
      {"lambda_init", config.psr.lambda_init == LambdaInit::kHalf ? "half" : "uniform-random"}};
  doc["surrogate_params"] = {{"burn_in", config.surrogate.burn_in},
                             {"intercept_prior_variance", config.surrogate.intercept_prior_variance}};
  doc["n_init"] = config.n_init;
  doc["n_iters"] = config.n_iters;
  doc["lambda_reg"] = config.lambda_reg;
  doc["seed"] = config.seed;
  doc["output"] = config.output;
  return doc.dump();
}

Benchmark make_benchmark(const ExperimentConfig& config) {
  validate_config(config);
  Benchmark out;
  out.name = config.benchmark;
  out.dimension = config.dimension;
  out.l1_penalty = config.lambda_reg;

  if (config.benchmark == "bqp") {
    auto instance = std::make_shared<BqpInstance>(BqpInstance::make(
        config.dimension, config.bqp.correlation_length, config.lambda_reg, config.seed));
    out.objective = [instance](const BinaryVector& x) { return bqp_objective(*instance, x); };
  } else if (config.benchmark == "contamination") {
    const auto& p = config.contamination;
    auto instance = std::make_shared<ContaminationInstance>(
        ContaminationInstance::make(config.dimension, config.lambda_reg, config.seed,
                                    p.violation_penalty, p.trajectory_count, p.epsilon,
                                    p.upper_limit, p.stage_cost));
    out.objective = [instance](const BinaryVector& x) {
      return contamination_objective(*instance, x);
    };
  } else if (config.benchmark == "ising") {
    auto instance = std::make_shared<IsingInstance>(
        IsingInstance::make_grid(config.ising.grid_side, config.lambda_reg, config.seed,
                                 config.ising.coupling_min, config.ising.coupling_max));
    out.objective = [instance](const BinaryVector& x) { return ising_objective(*instance, x); };
  } else {
    auto instance = std::make_shared<LabsInstance>(LabsInstance::make(config.dimension));
    out.objective = [instance](const BinaryVector& x) { return labs_objective(*instance, x); };
  }
  return out;
}

ExperimentRecord run_bo(const ExperimentConfig& config, const AfoObserver& observer) {
  const Benchmark benchmark = make_benchmark(config);
  std::mt19937_64 rng(splitmix64(config.seed));

  ExperimentRecord record;
  record.config = config;
  record.rows.reserve(static_cast<std::size_t>(config.n_init + config.n_iters));

  std::vector<std::pair<BinaryVector, double>> data;
  data.reserve(static_cast<std::size_t>(config.n_init + config.n_iters));

  bool have_best = false;
  auto note_evaluation = [&](const BinaryVector& x, double y) {
    if (!have_best || y < record.best_value) {
      record.best_value = y;
      record.best_x = x;
      have_best = true;
    }
    data.emplace_back(x, y);
  };

  for (int k = 0; k < config.n_init; ++k) {
    const BinaryVector x = random_point(rng, config.dimension);
    const double y = benchmark.objective(x);
    note_evaluation(x, y);
    record.rows.push_back({k, x, y, record.best_value, std::nullopt, std::nullopt, std::nullopt});
  }

  SurrogateOptions surrogate_options;
  surrogate_options.intercept_prior_variance = config.surrogate.intercept_prior_variance;

  for (int t = 0; t < config.n_iters; ++t) {
    const std::uint64_t fit_seed = rng();
    const std::uint64_t afo_seed = rng();

    GibbsState state = gibbs_fit(data, config.surrogate.burn_in, fit_seed, surrogate_options);
    const AlphaSample alpha = thompson_draw(state);
    const QuadraticPbf acquisition = from_alpha(alpha, config.lambda_reg);

    const auto start = std::chrono::steady_clock::now();
    const AfoOutcome outcome = run_afo(config, acquisition, afo_seed);
    const auto stop = std::chrono::steady_clock::now();
    const double elapsed_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start).count();

    const double y = benchmark.objective(outcome.x);
    note_evaluation(outcome.x, y);
    record.rows.push_back({config.n_init + t, outcome.x, y, record.best_value, elapsed_ms,
                           outcome.value, outcome.lower_bound});
    if (observer) {
      observer(config.n_init + t, acquisition, record.rows.back());
    }
  }
  return record;
}

void write_trace_csv(const ExperimentRecord& record, std::ostream& out) {
  out << "iteration,x,y,best_so_far,afo_time_ms,afo_objective,afo_lower_bound\n";
  for (const ExperimentRow& row : record.rows) {
    out << row.iteration << ',' << row.x.to_string() << ',' << format_double(row.y) << ','
        << format_double(row.best_so_far) << ',';
    if (row.afo_time_ms) out << format_time_ms(*row.afo_time_ms);
    out << ',';
    if (row.afo_objective) out << format_double(*row.afo_objective);
    out << ',';
    if (row.afo_lower_bound) out << format_double(*row.afo_lower_bound);
    out << '\n';
  }
}

std::string trace_csv(const ExperimentRecord& record) {
  std::ostringstream out;
  write_trace_csv(record, out);
  return out.str();
}

PointValue local_search_afo(const QuadraticPbf& f, int restarts, std::uint64_t seed) {
  if (restarts < 1) {
    throw std::invalid_argument("local_search_afo: restarts must be at least 1");
  }
  const int n = f.dimension();
  const Eigen::MatrixXd& a = f.interactions();
  const Eigen::VectorXd& b = f.linear();
  std::mt19937_64 rng(seed);

  PointValue best{BinaryVector(n), f.evaluate(BinaryVector(n))};
  bool have_best = false;

  for (int restart = 0; restart < restarts; ++restart) {
    BinaryVector x = random_point(rng, n);
    double value = f.evaluate(x);
    while (true) {
      const Eigen::VectorXd activity = a * to_real_vector(x);
      int best_flip = -1;
      double best_delta = 0.0;
      for (int i = 0; i < n; ++i) {
        const double sign = x.bit(i) ? -1.0 : 1.0;
        const double delta = sign * (b(i) + 2.0 * activity(i));
        if (delta < best_delta) {
          best_delta = delta;
          best_flip = i;
        }
      }
      if (best_flip < 0) break;
      x.flip_bit(best_flip);
      value += best_delta;
    }
    // Certify single-flip optimality against the exact objective; cached
    // deltas can drift by rounding over a long descent.
    value = f.evaluate(x);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        BinaryVector neighbor = x;
        neighbor.flip_bit(i);
        const double neighbor_value = f.evaluate(neighbor);
        if (neighbor_value < value) {
          x = neighbor;
          value = neighbor_value;
          improved = true;
        }
      }
    }
    if (!have_best || value < best.value) {
      best = {x, value};
      have_best = true;
    }
  }
  return best;
}

PointValue random_search_afo(const QuadraticPbf& f, int budget, std::uint64_t seed) {
  if (budget < 1) {
    throw std::invalid_argument("random_search_afo: budget must be at least 1");
  }
  const int n = f.dimension();
  if (n <= kEnumerationBudgetBits && static_cast<std::uint64_t>(budget) >= (std::uint64_t{1} << n)) {
    return brute_force_minimize(f);  // the budget covers the whole cube
  }
  std::mt19937_64 rng(seed);
  PointValue best{BinaryVector(n), 0.0};
  for (int k = 0; k < budget; ++k) {
    const BinaryVector x = random_point(rng, n);
    const double value = f.evaluate(x);
    if (k == 0 || value < best.value) {
      best = {x, value};
    }
  }
  return best;
}

PointValue enumerate_minimum(int dimension,
                             const std::function<double(const BinaryVector&)>& objective) {
  if (dimension < 0 || dimension > kEnumerationBudgetBits) {
    throw std::invalid_argument("enumerate_minimum: dimension exceeds the 2^24 enumeration budget");
  }
  BinaryVector best(dimension);
  double best_value = objective(best);
  const std::uint64_t total = std::uint64_t{1} << dimension;
  for (std::uint64_t counter = 1; counter < total; ++counter) {
    BinaryVector x(dimension);
    for (int i = 0; i < dimension; ++i) {
      x.set_bit(i, (counter >> (dimension - 1 - i)) & 1);
    }
    const double value = objective(x);
    if (value < best_value) {
      best_value = value;
      best = x;
    }
  }
  return {best, best_value};
}

std::vector<AfoMetricsRow> afo_metrics(
    const std::vector<std::pair<ExperimentRecord, ExperimentRecord>>& pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("afo_metrics: at least one record pair required");
  }

  struct Accumulator {
    double candidate_time_sum = 0.0;
    std::size_t candidate_time_count = 0;
    double baseline_time_sum = 0.0;
    std::size_t baseline_time_count = 0;
    double improvement_sum = 0.0;
    std::size_t improvement_count = 0;
  };
  std::map<int, Accumulator> by_dimension;

  for (const auto& [candidate, baseline] : pairs) {
    if (candidate.config.afo == baseline.config.afo) {
      throw std::invalid_argument("afo_metrics: paired records must use different strategies");
    }
    if (!configs_comparable(candidate.config, baseline.config)) {
      throw std::invalid_argument("afo_metrics: paired records must share the same config");
    }
    if (candidate.rows.size() != baseline.rows.size()) {
      throw std::invalid_argument("afo_metrics: paired records must have equal length");
    }
    Accumulator& acc = by_dimension[candidate.config.dimension];
    for (std::size_t r = 0; r < candidate.rows.size(); ++r) {
      const ExperimentRow& c = candidate.rows[r];
      const ExperimentRow& b = baseline.rows[r];
      if (c.afo_time_ms) {
        acc.candidate_time_sum += *c.afo_time_ms;
        ++acc.candidate_time_count;
      }
      if (b.afo_time_ms) {
        acc.baseline_time_sum += *b.afo_time_ms;
        ++acc.baseline_time_count;
      }
      if (c.afo_objective && b.afo_objective && std::abs(*b.afo_objective) >= kImprovementDenominatorGuard) {
        acc.improvement_sum += 100.0 * (*b.afo_objective - *c.afo_objective) / std::abs(*b.afo_objective);
        ++acc.improvement_count;
      }
    }
  }

  std::vector<AfoMetricsRow> rows;
  for (const auto& [dimension, acc] : by_dimension) {
    AfoMetricsRow row;
    row.dimension = dimension;
    row.candidate_mean_time_ms =
        acc.candidate_time_count ? acc.candidate_time_sum / static_cast<double>(acc.candidate_time_count) : 0.0;
    row.baseline_mean_time_ms =
        acc.baseline_time_count ? acc.baseline_time_sum / static_cast<double>(acc.baseline_time_count) : 0.0;
    row.mean_percent_improvement =
        acc.improvement_count ? acc.improvement_sum / static_cast<double>(acc.improvement_count) : 0.0;
    rows.push_back(row);
  }

  // Timing is reported relative to the candidate at the smallest dimension.
  const double base = rows.front().candidate_mean_time_ms;
  for (AfoMetricsRow& row : rows) {
    if (base > 0.0) {
      row.candidate_time_normalized = row.candidate_mean_time_ms / base;
      row.baseline_time_normalized = row.baseline_mean_time_ms / base;
    } else {
      row.candidate_time_normalized = 0.0;
      row.baseline_time_normalized = 0.0;
    }
  }
  return rows;
}

}  // namespace cbo
