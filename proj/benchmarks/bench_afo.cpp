// Microbenchmarks for the hot paths: the relaxation solver as a whole, its
// min-cut inner step, one Gibbs sweep of the surrogate, and the local-search
// baseline.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cbo/experiment.hpp"
#include "cbo/flow_network.hpp"
#include "cbo/psr.hpp"
#include "cbo/quadratic_pbf.hpp"
#include "cbo/surrogate.hpp"

namespace {

cbo::QuadraticPbf random_pbf(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = a(j, i) = normal(rng);
    }
  }
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = normal(rng);
  return cbo::QuadraticPbf(a, b, 0.0);
}

void BM_PsrMinimize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cbo::QuadraticPbf f = random_pbf(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbo::psr_minimize(f, {}, 7));
  }
}
BENCHMARK(BM_PsrMinimize)->Arg(20)->Arg(40)->Arg(80)->Arg(160);

void BM_SolveRelaxation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cbo::QuadraticPbf f = random_pbf(n, 2);
  const cbo::LambdaMatrix lam = cbo::LambdaMatrix::half(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbo::solve_relaxation(f, lam));
  }
}
BENCHMARK(BM_SolveRelaxation)->Arg(20)->Arg(80)->Arg(160);

void BM_MinCut(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cbo::QuadraticPbf f = random_pbf(n, 3);
  const cbo::RelaxedObjective relaxed = cbo::relaxed_objective(f, cbo::LambdaMatrix::half(n));
  const cbo::CutReduction reduction = cbo::build_cut_network(relaxed.affine, relaxed.nonpositive);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbo::solve_min_cut(reduction.network));
  }
}
BENCHMARK(BM_MinCut)->Arg(20)->Arg(80)->Arg(160);

void BM_GibbsSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<std::pair<cbo::BinaryVector, double>> data;
  for (int k = 0; k < 60; ++k) {
    cbo::BinaryVector x(n);
    for (int i = 0; i < n; ++i) x.set_bit(i, coin(rng) == 1);
    data.emplace_back(x, normal(rng));
  }
  cbo::GibbsState chain = cbo::gibbs_fit(data, 10, 5);
  for (auto _ : state) {
    chain.advance_one_sweep();
    benchmark::DoNotOptimize(chain.coefficients());
  }
}
BENCHMARK(BM_GibbsSweep)->Arg(10)->Arg(20);

void BM_LocalSearchAfo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cbo::QuadraticPbf f = random_pbf(n, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbo::local_search_afo(f, 20, 11));
  }
}
BENCHMARK(BM_LocalSearchAfo)->Arg(20)->Arg(80);

}  // namespace

BENCHMARK_MAIN();
