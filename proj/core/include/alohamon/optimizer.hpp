#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alohamon/access_policy.hpp"
#include "alohamon/analysis.hpp"
#include "alohamon/errors.hpp"

namespace alohamon {

enum class Strategy { Random, Reactive, LoadOne, Balanced };

const char* to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(std::string_view name);

/// Search settings for minimizing the average conditional entropy over the
/// access vector. The search is deterministic given the seed: a full grid
/// pass at grid_resolution points per axis followed by simplex refinement
/// from the best three grid points, box-projected to [0,1]^4.
struct OptimizationProblem {
  int node_count;
  SourceParams source;
  /// Restrict the search to policies with channel load equal to this target
  /// (packets per slot). Only used by optimize_constrained.
  std::optional<double> load_target;
  int grid_resolution = 11;
  int refine_budget = 500;
  std::uint64_t seed = 0;
  /// Tail tolerance of the objective during the search; the winner is
  /// re-scored at final_tolerance.
  double search_tolerance = 1e-9;
  double final_tolerance = kDefaultTolerance;
  int workers = 0;  // grid-phase parallelism; 0 = all hardware threads
};

struct OptimizationTracePoint {
  AccessPolicy policy;
  double objective_bits = 0.0;
};

struct OptimizationResult {
  AccessPolicy policy;
  double objective_bits = 0.0;  // re-scored at final_tolerance
  std::int64_t evaluations = 0;
  /// Strictly improving accepted candidates, in search order.
  std::vector<OptimizationTracePoint> trace;
};

/// Minimizes the average conditional entropy over [0,1]^4, skipping
/// degenerate candidates. Throws NoFeasiblePolicy if every candidate is
/// degenerate.
OptimizationResult optimize(const OptimizationProblem& problem);

/// Same search restricted to the affine slice of policies whose channel load
/// equals problem.load_target; one coordinate is eliminated in closed form.
/// Throws LoadInfeasible when the target lies outside [0, node_count].
OptimizationResult optimize_constrained(const OptimizationProblem& problem);

struct SweepSettings {
  int grid_resolution = 11;
  int refine_budget = 500;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  int workers = 0;  // parallelism across sweep cells
};

/// One (parameter, strategy) cell of a sweep. Cells that fail keep ok=false
/// and record the error; the sweep itself never aborts.
struct SweepRow {
  double parameter = 0.0;  // node count or asymmetry factor
  int node_count = 0;
  double alpha = 0.0;
  double beta = 0.0;
  Strategy strategy = Strategy::Random;
  bool ok = false;
  std::string error;
  AccessPolicy policy;
  double entropy_bits = 0.0;
  double entropy_error_bound = 0.0;
  double mean_access = 0.0;
  double success_prob = 0.0;
  double load = 0.0;
};

/// Entropy/load table across node counts for a fixed source.
std::vector<SweepRow> sweep_nodes(const SourceParams& source, std::span<const int> node_counts,
                                  std::span<const Strategy> strategies,
                                  const SweepSettings& settings = {});

/// Entropy/load table across asymmetry factors with the source parameters
/// pinned to a fixed network-wide transition budget.
std::vector<SweepRow> sweep_asymmetry(int node_count, double budget,
                                      std::span<const double> etas,
                                      std::span<const Strategy> strategies,
                                      const SweepSettings& settings = {});

}  // namespace alohamon
