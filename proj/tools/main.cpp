// Command-line driver: analytical evaluation, exact simulation, policy
// optimization, parameter sweeps and figure-recipe data generation for
// remote monitoring of two-state Markov sources over slotted ALOHA.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alohamon/optimizer.hpp"
#include "alohamon/simulator.hpp"
#include "common.hpp"
#include "csv.hpp"
#include "figures.hpp"

namespace alohamon::cli {
namespace {

struct CommonOpts {
  int m = 0;
  SourceOpts source;
  std::string policy = "reactive";
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 1;
  int grid_resolution = 11;
  int refine_budget = 500;
  int workers = 0;
  std::string out;
};

void add_source_options(CLI::App* sub, CommonOpts* o) {
  sub->add_option("--m", o->m, "number of nodes")->required();
  sub->add_option("--alpha", o->source.alpha, "0->1 transition probability per slot");
  sub->add_option("--beta", o->source.beta, "1->0 transition probability per slot");
  sub->add_option("--eta", o->source.eta, "asymmetry factor alpha/beta");
  sub->add_option("--budget", o->source.budget,
                  "network-wide state transitions per slot (with --eta)");
}

void add_policy_options(CLI::App* sub, CommonOpts* o) {
  sub->add_option("--policy", o->policy,
                  "random|reactive|load-one|balanced or l00,l01,l10,l11");
  sub->add_option("--grid", o->grid_resolution, "grid points per axis (balanced policy)");
  sub->add_option("--refine", o->refine_budget, "refinement evaluations (balanced policy)");
}

Json source_json(const SourceParams& s) {
  return Json{{"alpha", s.alpha}, {"beta", s.beta}};
}

// ---------------------------------------------------------------------------
int run_analyze(const CommonOpts& o) {
  const int workers = resolve_workers(o.workers);
  const SourceParams source = o.source.resolve(o.m);
  const SweepSettings settings{o.grid_resolution, o.refine_budget, o.seed, o.tolerance, workers};
  const AccessPolicy policy = resolve_policy(o.policy, source, o.m, settings);
  const NetworkConfig net(o.m, source, policy);
  const TerminatingChain chain = build_chain(net);
  const AverageEntropy entropy = average_conditional_entropy(net, o.tolerance);
  const Vec2 refresh = expected_refresh_time(chain);
  const EstimateLaw estimate = estimate_law(net, chain);

  Json config{{"mode", "analyze"}, {"m", o.m}, {"source", source_json(source)},
              {"policy", policy_json(policy)}, {"tolerance", o.tolerance}, {"seed", o.seed}};
  CsvWriter csv(o.out);
  csv.comment(std::string("alohamon v") + kVersion + " analyze");
  csv.comment("config: " + config.dump());
  csv.header({"m", "alpha", "beta", "l00", "l01", "l10", "l11", "lambda_bar", "success_prob",
              "load", "entropy_bits", "entropy_error_bound", "tail_mass", "mean_refresh_0",
              "mean_refresh_1", "p_estimate_0", "p_estimate_1"});
  csv.row({CsvWriter::num(o.m), CsvWriter::num(source.alpha), CsvWriter::num(source.beta),
           CsvWriter::num(policy.l00), CsvWriter::num(policy.l01), CsvWriter::num(policy.l10),
           CsvWriter::num(policy.l11),
           CsvWriter::num(mean_access_probability(source, policy)),
           CsvWriter::num(success_probability(net)), CsvWriter::num(channel_load(net)),
           CsvWriter::num(entropy.bits), CsvWriter::num(entropy.error_bound),
           CsvWriter::num(entropy.tail_mass), CsvWriter::num(refresh.v0),
           CsvWriter::num(refresh.v1), CsvWriter::num(estimate.p0),
           CsvWriter::num(estimate.p1)});
  return 0;
}

// ---------------------------------------------------------------------------
struct SimulateOpts {
  CommonOpts common;
  std::int64_t slots = 0;
  std::int64_t warmup = -1;
  std::int64_t delta_cap = 0;
  bool reference_only = false;
};

int run_simulate(const SimulateOpts& o) {
  const SourceParams source = o.common.source.resolve(o.common.m);
  const SweepSettings settings{o.common.grid_resolution, o.common.refine_budget, o.common.seed,
                               o.common.tolerance, resolve_workers(o.common.workers)};
  const AccessPolicy policy = resolve_policy(o.common.policy, source, o.common.m, settings);
  SimConfig sim{NetworkConfig(o.common.m, source, policy), o.slots};
  sim.warmup = o.warmup;
  sim.seed = o.common.seed;
  sim.track_all_nodes = !o.reference_only;
  sim.delta_cap = o.delta_cap;
  const SimulationStats stats = run(sim);

  Json config{{"mode", "simulate"}, {"m", o.common.m}, {"source", source_json(source)},
              {"policy", policy_json(policy)}, {"slots", o.slots},
              {"warmup", stats.config.warmup}, {"seed", o.common.seed},
              {"track_all_nodes", sim.track_all_nodes}, {"delta_cap", stats.delta_cap}};
  CsvWriter csv(o.common.out);
  csv.comment(std::string("alohamon v") + kVersion + " simulate");
  csv.comment("config: " + config.dump());
  csv.comment("counted_node_slots=" + CsvWriter::num(stats.counted_node_slots) +
              " receptions=" + CsvWriter::num(stats.receptions) +
              " singletons=" + CsvWriter::num(stats.singletons) +
              " collisions=" + CsvWriter::num(stats.collisions) +
              " idles=" + CsvWriter::num(stats.idles));
  csv.comment("first_reception_node0=" + CsvWriter::num(stats.first_reception_slot[0]));
  try {
    const EmpiricalEntropy entropy = empirical_average_entropy(stats);
    csv.comment("empirical_entropy_bits=" + CsvWriter::num(entropy.bits) +
                " half_width=" + CsvWriter::num(entropy.half_width));
  } catch (const InsufficientSamples&) {
    csv.comment("empirical_entropy_bits=unavailable (insufficient samples)");
  }
  csv.header({"delta", "estimate", "pooled", "n_state0", "n_state1", "p0_hat", "std_error"});
  for (std::int64_t delta = 0; delta < stats.delta_cap; ++delta) {
    for (int xhat : {0, 1}) {
      const std::uint64_t n0 = stats.cell_count(delta, xhat, 0);
      const std::uint64_t n1 = stats.cell_count(delta, xhat, 1);
      if (n0 + n1 == 0) continue;
      const EmpiricalLaw law = empirical_conditional_law(stats, delta, xhat);
      csv.row({CsvWriter::num(delta), CsvWriter::num(xhat), "0", CsvWriter::num(n0),
               CsvWriter::num(n1), CsvWriter::num(law.p0), CsvWriter::num(law.std_error)});
    }
  }
  for (int xhat : {0, 1}) {
    const std::uint64_t n0 = stats.pooled[xhat][0];
    const std::uint64_t n1 = stats.pooled[xhat][1];
    if (n0 + n1 == 0) continue;
    const EmpiricalLaw law = pooled_conditional_law(stats, xhat);
    csv.row({CsvWriter::num(stats.delta_cap), CsvWriter::num(xhat), "1", CsvWriter::num(n0),
             CsvWriter::num(n1), CsvWriter::num(law.p0), CsvWriter::num(law.std_error)});
  }
  return 0;
}

// ---------------------------------------------------------------------------
struct OptimizeOpts {
  CommonOpts common;
  double load_target = -1.0;
  std::string trace_out;
};

int run_optimize(const OptimizeOpts& o) {
  const SourceParams source = o.common.source.resolve(o.common.m);
  OptimizationProblem problem{o.common.m, source,
                              o.load_target >= 0.0 ? std::optional<double>(o.load_target)
                                                   : std::nullopt,
                              o.common.grid_resolution, o.common.refine_budget, o.common.seed};
  problem.final_tolerance = o.common.tolerance;
  problem.workers = resolve_workers(o.common.workers);
  const OptimizationResult result =
      problem.load_target ? optimize_constrained(problem) : optimize(problem);
  const NetworkConfig net(o.common.m, source, result.policy);

  Json config{{"mode", "optimize"}, {"m", o.common.m}, {"source", source_json(source)},
              {"grid_resolution", o.common.grid_resolution},
              {"refine_budget", o.common.refine_budget}, {"seed", o.common.seed},
              {"tolerance", o.common.tolerance}};
  if (problem.load_target) config["load_target"] = *problem.load_target;

  CsvWriter csv(o.common.out);
  csv.comment(std::string("alohamon v") + kVersion + " optimize");
  csv.comment("config: " + config.dump());
  csv.header({"m", "alpha", "beta", "load_target", "objective_bits", "evaluations", "l00",
              "l01", "l10", "l11", "lambda_bar", "success_prob", "load"});
  csv.row({CsvWriter::num(o.common.m), CsvWriter::num(source.alpha),
           CsvWriter::num(source.beta),
           problem.load_target ? CsvWriter::num(*problem.load_target) : "",
           CsvWriter::num(result.objective_bits), CsvWriter::num(result.evaluations),
           CsvWriter::num(result.policy.l00), CsvWriter::num(result.policy.l01),
           CsvWriter::num(result.policy.l10), CsvWriter::num(result.policy.l11),
           CsvWriter::num(mean_access_probability(source, result.policy)),
           CsvWriter::num(success_probability(net)), CsvWriter::num(channel_load(net))});

  if (!o.trace_out.empty()) {
    CsvWriter trace(o.trace_out);
    trace.comment(std::string("alohamon v") + kVersion + " optimize trace");
    trace.comment("config: " + config.dump());
    trace.header({"step", "l00", "l01", "l10", "l11", "objective_bits"});
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
      const auto& point = result.trace[i];
      trace.row({CsvWriter::num(static_cast<std::int64_t>(i)), CsvWriter::num(point.policy.l00),
                 CsvWriter::num(point.policy.l01), CsvWriter::num(point.policy.l10),
                 CsvWriter::num(point.policy.l11), CsvWriter::num(point.objective_bits)});
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
struct SweepNodesOpts {
  SourceOpts source;
  std::string m_list = "2,5,10,20,50,100,200,500";
  std::string strategies = "random,reactive,balanced,load-one";
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  int grid_resolution = 11;
  int refine_budget = 500;
  int workers = 0;
  std::string out;
};

int run_sweep_nodes(const SweepNodesOpts& o) {
  if (!(o.source.alpha > 0.0) || !(o.source.beta > 0.0)) {
    throw ConfigError("sweep-nodes requires --alpha and --beta");
  }
  const SourceParams source(o.source.alpha, o.source.beta);
  const auto ms = parse_int_list(o.m_list, "m");
  const auto strategies = parse_strategies(o.strategies);
  const SweepSettings settings{o.grid_resolution, o.refine_budget, o.seed, o.tolerance,
                               resolve_workers(o.workers)};
  const auto rows = sweep_nodes(source, ms, strategies, settings);
  Json config{{"mode", "sweep-nodes"}, {"source", source_json(source)}, {"m_list", ms},
              {"strategies", o.strategies}, {"grid_resolution", o.grid_resolution},
              {"refine_budget", o.refine_budget}, {"seed", o.seed},
              {"tolerance", o.tolerance}};
  write_sweep_csv(o.out, "m", rows, config);
  return 0;
}

struct SweepAsymmetryOpts {
  int m = 0;
  double budget = 0.8;
  std::string eta_list = "1,2,5,10,20";
  std::string strategies = "random,reactive,balanced";
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  int grid_resolution = 11;
  int refine_budget = 500;
  int workers = 0;
  std::string out;
};

int run_sweep_asymmetry(const SweepAsymmetryOpts& o) {
  const auto etas = parse_double_list(o.eta_list, "eta");
  const auto strategies = parse_strategies(o.strategies);
  const SweepSettings settings{o.grid_resolution, o.refine_budget, o.seed, o.tolerance,
                               resolve_workers(o.workers)};
  const auto rows = sweep_asymmetry(o.m, o.budget, etas, strategies, settings);
  Json config{{"mode", "sweep-asymmetry"}, {"m", o.m}, {"budget", o.budget},
              {"eta_list", etas}, {"strategies", o.strategies},
              {"grid_resolution", o.grid_resolution}, {"refine_budget", o.refine_budget},
              {"seed", o.seed}, {"tolerance", o.tolerance}};
  write_sweep_csv(o.out, "eta", rows, config);
  return 0;
}

// ---------------------------------------------------------------------------
struct ValidateOpts {
  CommonOpts common;
  std::int64_t slots = 1'000'000;
  std::int64_t delta_limit = 200;
  double conditional_tol = 0.01;
  double joint_tol = 0.002;
  double entropy_tol = 0.01;
  double occupancy_tol = 0.01;
};

int run_validate(const ValidateOpts& o) {
  const SourceParams source = o.common.source.resolve(o.common.m);
  const SweepSettings settings{o.common.grid_resolution, o.common.refine_budget, o.common.seed,
                               o.common.tolerance, resolve_workers(o.common.workers)};
  const AccessPolicy policy = resolve_policy(o.common.policy, source, o.common.m, settings);
  const NetworkConfig net(o.common.m, source, policy);
  const TerminatingChain chain = build_chain(net);
  const JointAoiEstimateLaw joint = joint_law(net, o.common.tolerance);
  const AverageEntropy analytic_entropy = average_conditional_entropy(net, o.common.tolerance);
  const EstimateLaw analytic_estimate = estimate_law(net, chain);

  SimConfig sim{net, o.slots};
  sim.seed = o.common.seed;
  const SimulationStats stats = run(sim);

  Json checks = Json::array();
  bool pass = true;
  const auto add_check = [&](const std::string& name, double value, double tolerance,
                             const Json& extra = Json::object()) {
    Json check{{"name", name}, {"value", value}, {"tolerance", tolerance},
               {"pass", value <= tolerance}};
    for (const auto& [k, v] : extra.items()) check[k] = v;
    pass = pass && value <= tolerance;
    checks.push_back(check);
  };

  // Conditional law, estimate 0, ages up to delta_limit.
  {
    double worst = 0.0;
    std::int64_t compared = 0, empty = 0;
    Vec2 row = basis_row(0);
    const std::int64_t hi = std::min(o.delta_limit, stats.delta_cap - 1);
    for (std::int64_t delta = 0; delta <= hi; ++delta) {
      const double analytic = row.v0 / row.sum();
      try {
        const EmpiricalLaw law = empirical_conditional_law(stats, delta, 0);
        worst = std::max(worst, std::abs(analytic - law.p0));
        ++compared;
      } catch (const InsufficientSamples&) {
        ++empty;
      }
      row = row_times(row, chain.transient);
    }
    add_check("conditional_law_max_abs_diff", worst, o.conditional_tol,
              Json{{"delta_limit", hi}, {"cells_compared", compared}, {"cells_empty", empty}});
  }
  // Joint law, estimate 0.
  {
    double worst = 0.0;
    const std::int64_t hi = std::min({o.delta_limit, joint.delta_max, stats.delta_cap - 1});
    for (std::int64_t delta = 0; delta <= hi; ++delta) {
      const double analytic = joint.probability[0][static_cast<std::size_t>(delta)];
      const double empirical =
          static_cast<double>(stats.cell_count(delta, 0, 0) + stats.cell_count(delta, 0, 1)) /
          static_cast<double>(stats.counted_node_slots);
      worst = std::max(worst, std::abs(analytic - empirical));
    }
    add_check("joint_law_max_abs_diff", worst, o.joint_tol, Json{{"delta_limit", hi}});
  }
  // Average entropy.
  {
    const EmpiricalEntropy empirical = empirical_average_entropy(stats);
    const double diff = std::abs(empirical.bits - analytic_entropy.bits);
    add_check("average_entropy_abs_diff", diff,
              std::max(3.0 * empirical.half_width, o.entropy_tol),
              Json{{"analytic", analytic_entropy.bits}, {"empirical", empirical.bits},
                   {"half_width", empirical.half_width}});
  }
  // Estimate occupancy.
  {
    const double empirical = stats.estimate_occupancy(0);
    add_check("estimate_occupancy_abs_diff", std::abs(empirical - analytic_estimate.p0),
              o.occupancy_tol,
              Json{{"analytic", analytic_estimate.p0}, {"empirical", empirical}});
  }

  Json report;
  report["config"] = Json{{"mode", "validate"}, {"m", o.common.m},
                          {"source", source_json(source)}, {"policy", policy_json(policy)},
                          {"slots", o.slots}, {"seed", o.common.seed},
                          {"tolerance", o.common.tolerance}};
  report["checks"] = checks;
  report["pass"] = pass;
  if (o.common.out.empty() || o.common.out == "-") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(o.common.out, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + o.common.out);
    out << report.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
struct TimelineOpts {
  CommonOpts common;
  std::int64_t slots = 2500;
  int node = 0;
};

int run_timeline(const TimelineOpts& o) {
  const SourceParams source = o.common.source.resolve(o.common.m);
  const SweepSettings settings{o.common.grid_resolution, o.common.refine_budget, o.common.seed,
                               o.common.tolerance, resolve_workers(o.common.workers)};
  const AccessPolicy policy = resolve_policy(o.common.policy, source, o.common.m, settings);
  SimConfig sim{NetworkConfig(o.common.m, source, policy), o.slots};
  sim.seed = o.common.seed;
  const auto series = sample_timeline(sim, o.node, o.slots);

  Json config{{"mode", "timeline"}, {"m", o.common.m}, {"source", source_json(source)},
              {"policy", policy_json(policy)}, {"slots", o.slots}, {"seed", o.common.seed},
              {"node", o.node}};
  CsvWriter csv(o.common.out);
  csv.comment(std::string("alohamon v") + kVersion + " timeline");
  csv.comment("config: " + config.dump());
  csv.header({"slot", "delta", "estimate", "state", "entropy_bits"});
  for (const auto& p : series) {
    csv.row({CsvWriter::num(p.slot), CsvWriter::num(p.delta), CsvWriter::num(p.estimate),
             CsvWriter::num(p.state), CsvWriter::num(p.entropy_bits)});
  }
  return 0;
}

}  // namespace
}  // namespace alohamon::cli

int main(int argc, char** argv) {
  using namespace alohamon::cli;

  CLI::App app{"alohamon: receiver-uncertainty analysis, exact simulation and access-policy "
               "optimization for two-state Markov sources over slotted ALOHA"};
  app.require_subcommand(1);
  app.fallthrough();  // --config may follow the subcommand name
  // Subcommand options may come from an INI file (one section per mode).
  app.set_config("--config", "", "read options from an INI file (sections per subcommand)");

  int rc = 0;
  std::string active_mode = "cli";

  CommonOpts analyze_opts;
  analyze_opts.out = "analyze.csv";
  auto* analyze = app.add_subcommand("analyze", "closed-form uncertainty for one configuration")->configurable();
  add_source_options(analyze, &analyze_opts);
  add_policy_options(analyze, &analyze_opts);
  analyze->add_option("--tolerance", analyze_opts.tolerance, "truncation tolerance");
  analyze->add_option("--seed", analyze_opts.seed, "seed (balanced policy)");
  analyze->add_option("--workers", analyze_opts.workers, "worker threads (0 = all)");
  analyze->add_option("--out", analyze_opts.out, "output CSV path");
  analyze->callback([&] {
    active_mode = "analyze";
    rc = run_analyze(analyze_opts);
  });

  SimulateOpts simulate_opts;
  simulate_opts.common.out = "simulate.csv";
  auto* simulate = app.add_subcommand("simulate", "exact Monte Carlo simulation")->configurable();
  add_source_options(simulate, &simulate_opts.common);
  add_policy_options(simulate, &simulate_opts.common);
  simulate->add_option("--slots", simulate_opts.slots, "simulated slots")->required();
  simulate->add_option("--warmup", simulate_opts.warmup,
                       "discarded slots (-1: min(100000, slots/10))");
  simulate->add_option("--delta-cap", simulate_opts.delta_cap, "age histogram cap (0 = auto)");
  simulate->add_flag("--reference-only", simulate_opts.reference_only,
                     "track only the reference node");
  simulate->add_option("--seed", simulate_opts.common.seed, "simulation seed");
  simulate->add_option("--tolerance", simulate_opts.common.tolerance, "truncation tolerance");
  simulate->add_option("--workers", simulate_opts.common.workers, "worker threads");
  simulate->add_option("--out", simulate_opts.common.out, "output CSV path");
  simulate->callback([&] {
    active_mode = "simulate";
    rc = run_simulate(simulate_opts);
  });

  OptimizeOpts optimize_opts;
  optimize_opts.common.out = "optimize.csv";
  auto* optimize_cmd = app.add_subcommand("optimize", "minimize the average uncertainty")->configurable();
  add_source_options(optimize_cmd, &optimize_opts.common);
  optimize_cmd->add_option("--grid", optimize_opts.common.grid_resolution,
                           "grid points per axis");
  optimize_cmd->add_option("--refine", optimize_opts.common.refine_budget,
                           "refinement evaluations");
  optimize_cmd->add_option("--load-target", optimize_opts.load_target,
                           "constrain the channel load (packets/slot)");
  optimize_cmd->add_option("--tolerance", optimize_opts.common.tolerance,
                           "final truncation tolerance");
  optimize_cmd->add_option("--seed", optimize_opts.common.seed, "determinism seed");
  optimize_cmd->add_option("--workers", optimize_opts.common.workers, "worker threads");
  optimize_cmd->add_option("--out", optimize_opts.common.out, "output CSV path");
  optimize_cmd->add_option("--trace-out", optimize_opts.trace_out,
                           "optional CSV with accepted improvements");
  optimize_cmd->callback([&] {
    active_mode = "optimize";
    rc = run_optimize(optimize_opts);
  });

  SweepNodesOpts sweep_nodes_opts;
  sweep_nodes_opts.out = "sweep_nodes.csv";
  auto* sweep_nodes_cmd =
      app.add_subcommand("sweep-nodes", "uncertainty vs number of nodes per strategy")->configurable();
  sweep_nodes_cmd->add_option("--alpha", sweep_nodes_opts.source.alpha, "0->1 probability")
      ->required();
  sweep_nodes_cmd->add_option("--beta", sweep_nodes_opts.source.beta, "1->0 probability")
      ->required();
  sweep_nodes_cmd->add_option("--m-list", sweep_nodes_opts.m_list, "node counts");
  sweep_nodes_cmd->add_option("--strategies", sweep_nodes_opts.strategies, "strategy list");
  sweep_nodes_cmd->add_option("--grid", sweep_nodes_opts.grid_resolution, "grid points");
  sweep_nodes_cmd->add_option("--refine", sweep_nodes_opts.refine_budget, "refinement budget");
  sweep_nodes_cmd->add_option("--tolerance", sweep_nodes_opts.tolerance, "tolerance");
  sweep_nodes_cmd->add_option("--seed", sweep_nodes_opts.seed, "determinism seed");
  sweep_nodes_cmd->add_option("--workers", sweep_nodes_opts.workers, "worker threads");
  sweep_nodes_cmd->add_option("--out", sweep_nodes_opts.out, "output CSV path");
  sweep_nodes_cmd->callback([&] {
    active_mode = "sweep-nodes";
    rc = run_sweep_nodes(sweep_nodes_opts);
  });

  SweepAsymmetryOpts sweep_asym_opts;
  sweep_asym_opts.out = "sweep_asymmetry.csv";
  auto* sweep_asym_cmd =
      app.add_subcommand("sweep-asymmetry", "uncertainty vs asymmetry at fixed budget")->configurable();
  sweep_asym_cmd->add_option("--m", sweep_asym_opts.m, "number of nodes")->required();
  sweep_asym_cmd->add_option("--budget", sweep_asym_opts.budget,
                             "network transitions per slot");
  sweep_asym_cmd->add_option("--eta-list", sweep_asym_opts.eta_list, "asymmetry factors");
  sweep_asym_cmd->add_option("--strategies", sweep_asym_opts.strategies, "strategy list");
  sweep_asym_cmd->add_option("--grid", sweep_asym_opts.grid_resolution, "grid points");
  sweep_asym_cmd->add_option("--refine", sweep_asym_opts.refine_budget, "refinement budget");
  sweep_asym_cmd->add_option("--tolerance", sweep_asym_opts.tolerance, "tolerance");
  sweep_asym_cmd->add_option("--seed", sweep_asym_opts.seed, "determinism seed");
  sweep_asym_cmd->add_option("--workers", sweep_asym_opts.workers, "worker threads");
  sweep_asym_cmd->add_option("--out", sweep_asym_opts.out, "output CSV path");
  sweep_asym_cmd->callback([&] {
    active_mode = "sweep-asymmetry";
    rc = run_sweep_asymmetry(sweep_asym_opts);
  });

  ValidateOpts validate_opts;
  validate_opts.common.out = "validate.json";
  auto* validate = app.add_subcommand("validate", "analysis vs simulation discrepancy report")->configurable();
  add_source_options(validate, &validate_opts.common);
  add_policy_options(validate, &validate_opts.common);
  validate->add_option("--slots", validate_opts.slots, "simulated slots");
  validate->add_option("--delta-limit", validate_opts.delta_limit, "max age compared");
  validate->add_option("--cond-tol", validate_opts.conditional_tol, "conditional-law tolerance");
  validate->add_option("--joint-tol", validate_opts.joint_tol, "joint-law tolerance");
  validate->add_option("--entropy-tol", validate_opts.entropy_tol, "entropy tolerance floor");
  validate->add_option("--occupancy-tol", validate_opts.occupancy_tol, "occupancy tolerance");
  validate->add_option("--seed", validate_opts.common.seed, "simulation seed");
  validate->add_option("--tolerance", validate_opts.common.tolerance, "truncation tolerance");
  validate->add_option("--workers", validate_opts.common.workers, "worker threads");
  validate->add_option("--out", validate_opts.common.out, "report path (JSON, '-' = stdout)");
  validate->callback([&] {
    active_mode = "validate";
    rc = run_validate(validate_opts);
  });

  TimelineOpts timeline_opts;
  timeline_opts.common.out = "timeline.csv";
  auto* timeline = app.add_subcommand("timeline", "per-slot uncertainty sample path")->configurable();
  add_source_options(timeline, &timeline_opts.common);
  add_policy_options(timeline, &timeline_opts.common);
  timeline->add_option("--slots", timeline_opts.slots, "simulated slots");
  timeline->add_option("--node", timeline_opts.node, "tracked node index");
  timeline->add_option("--seed", timeline_opts.common.seed, "simulation seed");
  timeline->add_option("--workers", timeline_opts.common.workers, "worker threads");
  timeline->add_option("--out", timeline_opts.common.out, "output CSV path");
  timeline->callback([&] {
    active_mode = "timeline";
    rc = run_timeline(timeline_opts);
  });

  FigureOverrides figure_opts;
  std::string figure_name;
  std::string figure_prefix;
  int figure_workers = 0;
  auto* figure = app.add_subcommand("figure", "emit plot-ready data for a figure recipe")->configurable();
  figure->add_option("name", figure_name, "fig2|fig3|fig4|fig5|fig6")->required();
  figure->add_option("--slots", figure_opts.slots, "simulated slots override");
  figure->add_option("--seed", figure_opts.seed, "seed override");
  figure->add_option("--m-list", figure_opts.m_list, "node-count override (fig4/fig5)");
  figure->add_option("--eta-list", figure_opts.eta_list, "asymmetry override (fig6)");
  figure->add_option("--grid", figure_opts.grid_resolution, "grid points override");
  figure->add_option("--refine", figure_opts.refine_budget, "refinement budget override");
  figure->add_option("--tolerance", figure_opts.tolerance, "tolerance override");
  figure->add_option("--workers", figure_workers, "worker threads");
  figure->add_option("--out-prefix", figure_prefix, "output path prefix (default: figure name)");
  figure->callback([&] {
    active_mode = "figure";
    figure_opts.workers = resolve_workers(figure_workers);
    emit_figure(figure_name, figure_prefix, figure_opts);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error_record(active_mode, alohamon::ConfigError(e.what()));
    return 2;
  } catch (const std::exception& e) {
    emit_error_record(active_mode, e);
    return 1;
  }
  return rc;
}
