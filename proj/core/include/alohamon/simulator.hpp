#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "alohamon/access_policy.hpp"
#include "alohamon/analysis.hpp"
#include "alohamon/errors.hpp"

namespace alohamon {

/// Exact Monte Carlo simulation settings. The simulator tracks every source
/// and the collision channel jointly, with no independence approximation.
struct SimConfig {
  NetworkConfig network;
  std::int64_t slots = 0;
  /// Slots discarded before counting; -1 selects min(100000, slots/10).
  std::int64_t warmup = -1;
  std::uint64_t seed = 1;
  /// Aggregate statistics over all nodes (true) or the reference node only.
  bool track_all_nodes = true;
  /// Age histogram cap; ages >= delta_cap land in a pooled bin. 0 selects
  /// 10 * max(1/alpha, 1/beta, E[W]) clamped to [16, 1000000].
  std::int64_t delta_cap = 0;
};

/// Occupancy counts N(delta, estimate, state) and channel bookkeeping from a
/// run. Counting starts past warmup and, per node, after the node's first
/// delivered update (the estimator is undefined before one).
struct SimulationStats {
  explicit SimulationStats(SimConfig config_) : config(std::move(config_)) {}

  SimConfig config;  // resolved: warmup and delta_cap filled in

  std::int64_t delta_cap = 0;
  /// counts[(delta*2 + estimate)*2 + state] for delta < delta_cap.
  std::vector<std::uint64_t> counts;
  /// Pooled bin for delta >= delta_cap, indexed [estimate][state]; reported
  /// separately, never merged into per-age cells.
  std::array<std::array<std::uint64_t, 2>, 2> pooled{};

  std::uint64_t counted_node_slots = 0;
  std::uint64_t receptions = 0;  // reference-node deliveries past warmup
  std::uint64_t singletons = 0;  // channel outcomes past warmup
  std::uint64_t collisions = 0;
  std::uint64_t idles = 0;
  std::vector<std::int64_t> first_reception_slot;  // per node; -1 if never

  /// Batch tables for the nonparametric confidence interval; the last row
  /// (index batch_delta_cap) pools ages >= batch_delta_cap.
  int batch_count = 0;
  std::int64_t batch_delta_cap = 0;
  std::vector<std::uint32_t> batch_counts;

  std::uint64_t cell_count(std::int64_t delta, int estimate, int state) const;
  std::uint64_t pooled_count(int estimate, int state) const { return pooled[estimate][state]; }
  /// Counted node-slots spent holding a given estimate (pooled included).
  std::uint64_t estimate_slots(int estimate) const;
  double estimate_occupancy(int estimate) const;
};

/// Runs the slotted simulation: every source transitions, every node draws
/// its transmission from the (previous, current) state pair, and a slot
/// delivers exactly when a single node transmits. Deterministic given the
/// seed; per-node random streams are derived independently from it.
SimulationStats run(const SimConfig& config);

/// Ratio estimate of P(X = x | age, estimate) from one cell.
struct EmpiricalLaw {
  double p0 = 0.0;
  double p1 = 0.0;
  double std_error = 0.0;  // binomial standard error of p0
  std::uint64_t samples = 0;
};

/// Per-age cell (delta < delta_cap). Throws InsufficientSamples for empty
/// cells and std::invalid_argument for ages inside the pooled bin.
EmpiricalLaw empirical_conditional_law(const SimulationStats& stats, std::int64_t delta,
                                       int estimate);

/// Conditional law of the pooled bin (ages >= delta_cap).
EmpiricalLaw pooled_conditional_law(const SimulationStats& stats, int estimate);

/// Plug-in estimate of the average conditional entropy with a batch-means
/// confidence half-width (20 batches, 97.5% Student quantile).
struct EmpiricalEntropy {
  double bits = 0.0;
  double half_width = 0.0;
};

EmpiricalEntropy empirical_average_entropy(const SimulationStats& stats);

/// One slot of a sample path for a single node.
struct SlotSample {
  std::int64_t slot = 0;
  std::int64_t delta = 0;
  int estimate = 0;
  int state = 0;
  double entropy_bits = 0.0;
};

/// Simulates `slots` slots and emits the (age, estimate, state) path of one
/// node from its first delivered update on, with the analytical h(age,
/// estimate) attached per slot. Shares the seed derivation with run(), so
/// the sample path is a view of the same realization.
std::vector<SlotSample> sample_timeline(const SimConfig& config, int node, std::int64_t slots);

}  // namespace alohamon
