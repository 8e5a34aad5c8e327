// Command line front end: run experiments, sweep acquisition optimizers, or
// print the exact optimum of a configured benchmark instance.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbo/experiment.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw cbo::ConfigError("cannot open config file \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file \"" + path + "\"");
  }
  out << text;
}

// out.csv -> out.seed7.csv; used when --repeats spreads one config over
// several seeds.
std::string path_with_seed(const std::string& path, std::uint64_t seed) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of("/\\");
  const bool has_extension = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  if (!has_extension) {
    return path + ".seed" + std::to_string(seed);
  }
  return path.substr(0, dot) + ".seed" + std::to_string(seed) + path.substr(dot);
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  int repeats = 1;
};

cbo::ExperimentConfig load_config(const CommonFlags& flags) {
  cbo::ExperimentConfig config = cbo::parse_config(read_file(flags.config_path));
  if (flags.seed_override) config.seed = *flags.seed_override;
  if (flags.out_override) config.output = *flags.out_override;
  cbo::validate_config(config);
  return config;
}

void add_common_flags(CLI::App* command, CommonFlags& flags) {
  command->add_option("config", flags.config_path, "experiment config (JSON)")->required();
  command->add_option("--seed", flags.seed_override, "override the config seed");
  command->add_option("--out", flags.out_override, "override the config output path");
  command->add_option("--repeats", flags.repeats, "run seeds seed..seed+k-1")
      ->check(CLI::PositiveNumber);
}

int run_command(const CommonFlags& flags) {
  const cbo::ExperimentConfig base = load_config(flags);
  for (int r = 0; r < flags.repeats; ++r) {
    cbo::ExperimentConfig config = base;
    config.seed = base.seed + static_cast<std::uint64_t>(r);
    const std::string path =
        flags.repeats == 1 ? config.output : path_with_seed(config.output, config.seed);
    config.output = path;

    const cbo::ExperimentRecord record = cbo::run_bo(config);
    write_file(path, cbo::trace_csv(record));
    std::cout << "seed=" << config.seed << " best_x=" << record.best_x.to_string()
              << " best_value=" << record.best_value << " rows=" << record.rows.size()
              << " trace=" << path << '\n';
  }
  return 0;
}

int afo_bench_command(const CommonFlags& flags, const std::vector<int>& dims,
                      const std::vector<std::string>& strategy_names) {
  const cbo::ExperimentConfig base = load_config(flags);
  if (strategy_names.size() < 2) {
    throw cbo::ConfigError("afo-bench needs at least two strategies (candidate first)");
  }
  std::vector<cbo::AfoStrategy> strategies;
  strategies.reserve(strategy_names.size());
  for (const std::string& name : strategy_names) {
    strategies.push_back(cbo::afo_strategy_from_string(name));
  }
  const std::vector<int> dimensions = dims.empty() ? std::vector<int>{base.dimension} : dims;

  // One run per (dimension, seed, strategy); the first strategy is the
  // candidate every other one is measured against.
  std::vector<std::vector<std::pair<cbo::ExperimentRecord, cbo::ExperimentRecord>>> pairs(
      strategies.size());
  for (const int dimension : dimensions) {
    for (int r = 0; r < flags.repeats; ++r) {
      cbo::ExperimentConfig config = base;
      config.dimension = dimension;
      config.seed = base.seed + static_cast<std::uint64_t>(r);
      cbo::validate_config(config);

      config.afo = strategies.front();
      const cbo::ExperimentRecord candidate = cbo::run_bo(config);
      for (std::size_t s = 1; s < strategies.size(); ++s) {
        cbo::ExperimentConfig baseline_config = config;
        baseline_config.afo = strategies[s];
        cbo::validate_config(baseline_config);
        pairs[s].emplace_back(candidate, cbo::run_bo(baseline_config));
      }
      std::cerr << "afo-bench: n=" << dimension << " seed=" << config.seed << " done\n";
    }
  }

  std::ostringstream csv;
  csv << "dimension,candidate,baseline,candidate_mean_afo_ms,baseline_mean_afo_ms,"
         "candidate_time_normalized,baseline_time_normalized,mean_percent_improvement\n";
  for (std::size_t s = 1; s < strategies.size(); ++s) {
    for (const cbo::AfoMetricsRow& row : cbo::afo_metrics(pairs[s])) {
      csv << row.dimension << ',' << to_string(strategies.front()) << ','
          << to_string(strategies[s]) << ',' << row.candidate_mean_time_ms << ','
          << row.baseline_mean_time_ms << ',' << row.candidate_time_normalized << ','
          << row.baseline_time_normalized << ',' << row.mean_percent_improvement << '\n';
    }
  }
  write_file(base.output, csv.str());
  std::cout << csv.str();
  return 0;
}

int oracle_command(const CommonFlags& flags) {
  const cbo::ExperimentConfig config = load_config(flags);
  if (config.dimension > 24) {
    throw cbo::ConfigError("oracle supports n <= 24 only");
  }
  const cbo::Benchmark benchmark = cbo::make_benchmark(config);
  const cbo::PointValue best = cbo::enumerate_minimum(config.dimension, benchmark.objective);

  std::ostringstream out;
  out << "x,value\n" << best.x.to_string() << ',' << best.value << '\n';
  std::cout << out.str();
  if (flags.out_override) {
    write_file(*flags.out_override, out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial Bayesian optimization over binary spaces"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one experiment and write its CSV trace");
  add_common_flags(run, run_flags);

  CommonFlags bench_flags;
  std::vector<int> bench_dims;
  std::vector<std::string> bench_strategies = {"psr", "local-search"};
  CLI::App* bench = app.add_subcommand(
      "afo-bench", "sweep acquisition optimizers over dimensions; emit a metrics CSV");
  add_common_flags(bench, bench_flags);
  bench->add_option("--dims", bench_dims, "dimensions to sweep (default: the config's n)")
      ->delimiter(',');
  bench->add_option("--afo", bench_strategies, "strategies, candidate first")->delimiter(',');

  CommonFlags oracle_flags;
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force optimum of the benchmark (n <= 24)");
  add_common_flags(oracle, oracle_flags);

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(run_flags);
    if (bench->parsed()) return afo_bench_command(bench_flags, bench_dims, bench_strategies);
    if (oracle->parsed()) return oracle_command(oracle_flags);
    return kExitConfigError;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  } catch (const cbo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}
