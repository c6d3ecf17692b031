#include <benchmark/benchmark.h>

#include <vector>

#include "fps/benchmarks.hpp"
#include "fps/estimator.hpp"
#include "fps/expansion.hpp"
#include "fps/linalg.hpp"
#include "fps/marginal.hpp"
#include "fps/rng.hpp"

namespace {

void BM_SolveDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  fps::RngStream rng(7, 0);
  fps::DenseSystem system(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) system.at(i, j) = rng.uniform(-1.0, 1.0);
    system.at(i, i) += static_cast<double>(n);
    system.rhs()[i] = rng.uniform();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fps::solve_dense_linear(system));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveDense)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_BuildConditional(benchmark::State& state) {
  const fps::Problem problem = fps::make_benchmark("levy5");
  fps::EstimatorConfig config;
  config.basis_size = static_cast<std::size_t>(state.range(0));
  config.diffusion = 70.0;
  const std::vector<double> point{-1.0, -1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fps::build_conditional_cdf(problem, point, 0, config));
  }
}
BENCHMARK(BM_BuildConditional)->Arg(30)->Arg(100)->Arg(200);

void BM_Tabulate(benchmark::State& state) {
  fps::CdfExpansion expansion{std::vector<double>(static_cast<std::size_t>(state.range(0)), 0.01),
                              -10.0, 10.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fps::tabulate_and_repair(expansion, 2048));
  }
}
BENCHMARK(BM_Tabulate)->Arg(30)->Arg(100)->Arg(200);

// One sweep costs 2(L-1)N evaluations plus N solves; time should grow
// linearly in N at fixed L.
void BM_SweepRosenbrockLike(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const fps::Problem problem = fps::make_harmonic(dim, -10.0, 10.0);
  fps::EstimatorConfig config;
  config.basis_size = 30;
  config.diffusion = 10.0;
  fps::MarginalEstimate acc(problem.bounds(), config.basis_size, config.table_size);
  fps::SweepState sweep = fps::SweepState::random_start(problem, fps::RngStream(3, 0));
  for (auto _ : state) {
    fps::gibbs_sweep(problem, sweep, config, acc);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SweepRosenbrockLike)->RangeMultiplier(2)->Range(2, 32)->Complexity(benchmark::oN);

}  // namespace
