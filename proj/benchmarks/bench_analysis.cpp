#include <benchmark/benchmark.h>

#include "alohamon/analysis.hpp"

using namespace alohamon;

namespace {

NetworkConfig reactive_config(int m) {
  return {m, SourceParams(0.02, 0.02), strategy_reactive()};
}

void BM_AverageEntropy(benchmark::State& state) {
  const NetworkConfig config = reactive_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(average_conditional_entropy(config).bits);
  }
}
BENCHMARK(BM_AverageEntropy)->Arg(10)->Arg(50)->Arg(200)->Arg(1000)
    ->Unit(benchmark::kMillisecond);

void BM_JointLaw(benchmark::State& state) {
  const NetworkConfig config = reactive_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_law(config).tail_mass);
  }
}
BENCHMARK(BM_JointLaw)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ConditionalLaw(benchmark::State& state) {
  const TerminatingChain chain = build_chain(reactive_config(50));
  const auto delta = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_source_law(chain, delta, 0).p0);
  }
}
BENCHMARK(BM_ConditionalLaw)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_EntropyCdf(benchmark::State& state) {
  const NetworkConfig config = reactive_config(50);
  std::vector<double> thresholds;
  for (int i = 0; i <= 200; ++i) thresholds.push_back(i / 200.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_cdf(config, kDefaultTolerance, thresholds).tail_mass);
  }
}
BENCHMARK(BM_EntropyCdf)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
