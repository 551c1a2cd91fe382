#include <benchmark/benchmark.h>

#include "alohamon/optimizer.hpp"

using namespace alohamon;

namespace {

void BM_OptimizeGrid(benchmark::State& state) {
  OptimizationProblem problem{static_cast<int>(state.range(0)), SourceParams(0.02, 0.02),
                              std::nullopt};
  problem.grid_resolution = static_cast<int>(state.range(1));
  problem.refine_budget = 200;
  problem.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize(problem).objective_bits);
  }
}
BENCHMARK(BM_OptimizeGrid)->Args({10, 6})->Args({50, 6})->Args({10, 11})
    ->Unit(benchmark::kMillisecond);

void BM_SweepAsymmetry(benchmark::State& state) {
  const std::vector<double> etas{1, 5, 20};
  const std::vector<Strategy> strategies{Strategy::Random, Strategy::Reactive};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_asymmetry(50, 0.8, etas, strategies).size());
  }
}
BENCHMARK(BM_SweepAsymmetry)->Unit(benchmark::kMillisecond);

}  // namespace
