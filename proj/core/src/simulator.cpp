#include "alohamon/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "alohamon/rng.hpp"

namespace alohamon {
namespace {

constexpr int kBatches = 20;
constexpr std::int64_t kBatchDeltaCap = 65536;
constexpr std::int64_t kAutoDeltaCapMax = 1'000'000;

// Student t 97.5% quantiles for df = 1..19; batch counts are capped at 20.
constexpr double kT975[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                            2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                            2.131,  2.120, 2.110, 2.101, 2.093};

std::int64_t resolve_warmup(const SimConfig& config) {
  if (config.warmup >= 0) return config.warmup;
  return std::min<std::int64_t>(100'000, config.slots / 10);
}

std::int64_t resolve_delta_cap(const SimConfig& config) {
  if (config.delta_cap > 0) return config.delta_cap;
  double horizon = std::max(1.0 / config.network.source.alpha, 1.0 / config.network.source.beta);
  try {
    const TerminatingChain chain = build_chain(config.network);
    const InterRefreshLaw law = inter_refresh_law(chain, 1e-6);
    horizon = std::max({horizon, law.mean[0], law.mean[1]});
  } catch (const Error&) {
    // Degenerate policies never deliver; the source time scale is all there is.
  }
  const double cap = std::clamp(10.0 * horizon, 16.0, static_cast<double>(kAutoDeltaCapMax));
  return static_cast<std::int64_t>(cap);
}

// Joint evolution of sources, channel and estimators. on_channel fires every
// slot; on_sample fires for each tracked node holding an estimate.
template <typename OnChannel, typename OnSample>
void simulate_network(const NetworkConfig& net, std::int64_t slots, std::uint64_t seed,
                      int tracked_nodes, OnChannel&& on_channel, OnSample&& on_sample) {
  const int m = net.node_count;
  const double alpha = net.source.alpha;
  const double beta = net.source.beta;
  const double pi1 = stationary(net.source).pi1;

  std::vector<std::mt19937_64> rng;
  rng.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) rng.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(i)));

  std::vector<int> state(static_cast<std::size_t>(m));
  std::vector<int> estimate(static_cast<std::size_t>(m), -1);
  std::vector<std::int64_t> age(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) state[static_cast<std::size_t>(i)] = uniform01(rng[i]) < pi1 ? 1 : 0;

  for (std::int64_t slot = 0; slot < slots; ++slot) {
    int transmitters = 0;
    int sender = -1;
    for (int i = 0; i < m; ++i) {
      const int prev = state[static_cast<std::size_t>(i)];
      const double u = uniform01(rng[i]);
      const int cur = prev == 0 ? (u < alpha ? 1 : 0) : (u < beta ? 0 : 1);
      state[static_cast<std::size_t>(i)] = cur;
      const double lam = net.policy.at(prev, cur);
      bool tx = false;
      if (lam >= 1.0) {
        tx = true;
      } else if (lam > 0.0) {
        tx = uniform01(rng[i]) < lam;
      }
      if (tx) {
        ++transmitters;
        sender = i;
      }
    }
    const int delivered = transmitters == 1 ? sender : -1;
    for (int i = 0; i < m; ++i) {
      if (i == delivered) {
        estimate[static_cast<std::size_t>(i)] = state[static_cast<std::size_t>(i)];
        age[static_cast<std::size_t>(i)] = 0;
      } else if (estimate[static_cast<std::size_t>(i)] >= 0) {
        ++age[static_cast<std::size_t>(i)];
      }
    }
    on_channel(slot, transmitters, delivered);
    for (int i = 0; i < tracked_nodes; ++i) {
      if (estimate[static_cast<std::size_t>(i)] >= 0) {
        on_sample(slot, i, age[static_cast<std::size_t>(i)],
                  estimate[static_cast<std::size_t>(i)], state[static_cast<std::size_t>(i)]);
      }
    }
  }
}

}  // namespace

std::uint64_t SimulationStats::cell_count(std::int64_t delta, int estimate, int state) const {
  if (delta < 0 || delta >= delta_cap) {
    throw std::invalid_argument("cell_count: age outside the per-age table (see pooled_count)");
  }
  return counts[static_cast<std::size_t>((delta * 2 + estimate) * 2 + state)];
}

std::uint64_t SimulationStats::estimate_slots(int estimate) const {
  std::uint64_t n = 0;
  for (std::int64_t d = 0; d < delta_cap; ++d) {
    n += cell_count(d, estimate, 0) + cell_count(d, estimate, 1);
  }
  return n + pooled[estimate][0] + pooled[estimate][1];
}

double SimulationStats::estimate_occupancy(int estimate) const {
  if (counted_node_slots == 0) throw InsufficientSamples("no counted slots");
  return static_cast<double>(estimate_slots(estimate)) /
         static_cast<double>(counted_node_slots);
}

SimulationStats run(const SimConfig& config) {
  if (config.slots <= 0) throw std::invalid_argument("run: slots must be > 0");
  const std::int64_t warmup = resolve_warmup(config);
  if (warmup >= config.slots) throw std::invalid_argument("run: warmup must be below slots");
  if (config.delta_cap < 0) throw std::invalid_argument("run: delta_cap must be >= 0");

  SimConfig resolved = config;
  resolved.warmup = warmup;
  resolved.delta_cap = resolve_delta_cap(config);
  SimulationStats stats(resolved);
  stats.delta_cap = resolved.delta_cap;
  stats.counts.assign(static_cast<std::size_t>(stats.delta_cap) * 4, 0);
  stats.first_reception_slot.assign(static_cast<std::size_t>(config.network.node_count), -1);
  stats.batch_count = kBatches;
  stats.batch_delta_cap = std::min(stats.delta_cap, kBatchDeltaCap);
  stats.batch_counts.assign(
      static_cast<std::size_t>(kBatches) * static_cast<std::size_t>(stats.batch_delta_cap + 1) * 4,
      0);

  const std::int64_t counted_span = config.slots - warmup;
  const std::size_t batch_stride = static_cast<std::size_t>(stats.batch_delta_cap + 1) * 4;

  const auto on_channel = [&](std::int64_t slot, int transmitters, int delivered) {
    if (delivered >= 0 && stats.first_reception_slot[static_cast<std::size_t>(delivered)] < 0) {
      stats.first_reception_slot[static_cast<std::size_t>(delivered)] = slot;
    }
    if (slot < warmup) return;
    if (transmitters == 0) {
      ++stats.idles;
    } else if (transmitters == 1) {
      ++stats.singletons;
    } else {
      ++stats.collisions;
    }
    if (delivered == 0) ++stats.receptions;
  };
  const auto on_sample = [&](std::int64_t slot, int /*node*/, std::int64_t delta, int estimate,
                             int state) {
    if (slot < warmup) return;
    ++stats.counted_node_slots;
    if (delta < stats.delta_cap) {
      ++stats.counts[static_cast<std::size_t>((delta * 2 + estimate) * 2 + state)];
    } else {
      ++stats.pooled[estimate][state];
    }
    const auto batch = static_cast<std::size_t>((slot - warmup) * kBatches / counted_span);
    const std::int64_t bd = std::min(delta, stats.batch_delta_cap);
    ++stats.batch_counts[batch * batch_stride + static_cast<std::size_t>((bd * 2 + estimate) * 2 + state)];
  };

  const int tracked = config.track_all_nodes ? config.network.node_count : 1;
  simulate_network(config.network, config.slots, config.seed, tracked, on_channel, on_sample);
  return stats;
}

EmpiricalLaw empirical_conditional_law(const SimulationStats& stats, std::int64_t delta,
                                       int estimate) {
  if (estimate != 0 && estimate != 1) throw std::invalid_argument("estimate must be 0 or 1");
  const std::uint64_t n0 = stats.cell_count(delta, estimate, 0);
  const std::uint64_t n1 = stats.cell_count(delta, estimate, 1);
  const std::uint64_t n = n0 + n1;
  if (n == 0) throw InsufficientSamples("empty (age, estimate) cell");
  EmpiricalLaw law;
  law.samples = n;
  law.p0 = static_cast<double>(n0) / static_cast<double>(n);
  law.p1 = 1.0 - law.p0;
  law.std_error = std::sqrt(law.p0 * law.p1 / static_cast<double>(n));
  return law;
}

EmpiricalLaw pooled_conditional_law(const SimulationStats& stats, int estimate) {
  if (estimate != 0 && estimate != 1) throw std::invalid_argument("estimate must be 0 or 1");
  const std::uint64_t n0 = stats.pooled[estimate][0];
  const std::uint64_t n1 = stats.pooled[estimate][1];
  const std::uint64_t n = n0 + n1;
  if (n == 0) throw InsufficientSamples("empty pooled bin");
  EmpiricalLaw law;
  law.samples = n;
  law.p0 = static_cast<double>(n0) / static_cast<double>(n);
  law.p1 = 1.0 - law.p0;
  law.std_error = std::sqrt(law.p0 * law.p1 / static_cast<double>(n));
  return law;
}

namespace {

// Plug-in entropy over a flat [rows][estimate][state] table.
double plugin_entropy(const std::uint32_t* table, std::size_t rows, std::uint64_t* total_out) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < rows * 4; ++i) total += table[i];
  *total_out = total;
  if (total == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (int xhat : {0, 1}) {
      const std::uint64_t n0 = table[r * 4 + static_cast<std::size_t>(xhat * 2)];
      const std::uint64_t n1 = table[r * 4 + static_cast<std::size_t>(xhat * 2 + 1)];
      const std::uint64_t n = n0 + n1;
      if (n == 0) continue;
      const double p0 = static_cast<double>(n0) / static_cast<double>(n);
      acc += static_cast<double>(n) / static_cast<double>(total) * binary_entropy_bits(p0);
    }
  }
  return acc;
}

}  // namespace

EmpiricalEntropy empirical_average_entropy(const SimulationStats& stats) {
  const std::uint64_t total = stats.counted_node_slots;
  if (total == 0) throw InsufficientSamples("no counted slots");
  EmpiricalEntropy out;
  double acc = 0.0;
  for (std::int64_t d = 0; d < stats.delta_cap; ++d) {
    for (int xhat : {0, 1}) {
      const std::uint64_t n0 = stats.cell_count(d, xhat, 0);
      const std::uint64_t n1 = stats.cell_count(d, xhat, 1);
      const std::uint64_t n = n0 + n1;
      if (n == 0) continue;
      acc += static_cast<double>(n) / static_cast<double>(total) *
             binary_entropy_bits(static_cast<double>(n0) / static_cast<double>(n));
    }
  }
  for (int xhat : {0, 1}) {
    const std::uint64_t n0 = stats.pooled[xhat][0];
    const std::uint64_t n1 = stats.pooled[xhat][1];
    const std::uint64_t n = n0 + n1;
    if (n == 0) continue;
    acc += static_cast<double>(n) / static_cast<double>(total) *
           binary_entropy_bits(static_cast<double>(n0) / static_cast<double>(n));
  }
  out.bits = acc;

  // Batch means over per-batch plug-in estimates.
  const std::size_t rows = static_cast<std::size_t>(stats.batch_delta_cap + 1);
  std::vector<double> batch_values;
  for (int b = 0; b < stats.batch_count; ++b) {
    std::uint64_t n = 0;
    const double h = plugin_entropy(&stats.batch_counts[static_cast<std::size_t>(b) * rows * 4],
                                    rows, &n);
    if (n > 0) batch_values.push_back(h);
  }
  if (batch_values.size() < 10) {
    throw InsufficientSamples("fewer than 10 nonempty batches for the confidence interval");
  }
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= static_cast<double>(batch_values.size());
  double var = 0.0;
  for (double v : batch_values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(batch_values.size() - 1);
  const std::size_t df = batch_values.size() - 1;
  const double t = kT975[std::min<std::size_t>(df, std::size(kT975)) - 1];
  out.half_width = t * std::sqrt(var / static_cast<double>(batch_values.size()));
  return out;
}

std::vector<SlotSample> sample_timeline(const SimConfig& config, int node, std::int64_t slots) {
  if (node < 0 || node >= config.network.node_count) {
    throw std::invalid_argument("sample_timeline: node index out of range");
  }
  if (slots <= 0) throw std::invalid_argument("sample_timeline: slots must be > 0");
  EntropyCurve curve(build_chain(config.network));
  std::vector<SlotSample> series;
  const auto on_channel = [](std::int64_t, int, int) {};
  const auto on_sample = [&](std::int64_t slot, int i, std::int64_t delta, int estimate,
                             int state) {
    if (i != node) return;
    series.push_back({slot, delta, estimate, state, curve.at(delta, estimate)});
  };
  simulate_network(config.network, slots, config.seed, config.network.node_count, on_channel,
                   on_sample);
  return series;
}

}  // namespace alohamon
