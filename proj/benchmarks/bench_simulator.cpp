#include <benchmark/benchmark.h>

#include "alohamon/simulator.hpp"

using namespace alohamon;

namespace {

void BM_SimulatorRun(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  SimConfig config{NetworkConfig(m, SourceParams(0.02, 0.02), strategy_reactive()), 100000};
  config.warmup = 0;
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(config).counted_node_slots);
  }
  state.SetItemsProcessed(state.iterations() * config.slots * m);
}
BENCHMARK(BM_SimulatorRun)->Arg(1)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SampleTimeline(benchmark::State& state) {
  SimConfig config{NetworkConfig(50, SourceParams(0.1, 0.01), strategy_random(50)), 10000};
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_timeline(config, 0, config.slots).size());
  }
}
BENCHMARK(BM_SampleTimeline)->Unit(benchmark::kMillisecond);

}  // namespace
