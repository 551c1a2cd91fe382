#include "figures.hpp"

#include <algorithm>
#include <cmath>

#include "alohamon/simulator.hpp"
#include "csv.hpp"

namespace alohamon::cli {
namespace {

void write_provenance(CsvWriter& csv, const std::string& what, const Json& config) {
  csv.comment(std::string("alohamon v") + kVersion + " " + what);
  csv.comment("config: " + config.dump());
}

// Timeline of the per-slot uncertainty for one node under the random access
// policy with a strongly asymmetric source.
void fig2(const std::string& prefix, const FigureOverrides& o) {
  const std::int64_t slots = o.slots > 0 ? o.slots : 2500;
  const NetworkConfig net(50, SourceParams(0.1, 0.01), strategy_random(50));
  SimConfig sim{net, slots};
  sim.seed = o.seed;
  const auto series = sample_timeline(sim, 0, slots);

  Json config{{"figure", "fig2"}, {"m", 50}, {"alpha", 0.1}, {"beta", 0.01},
              {"policy", policy_json(net.policy)}, {"slots", slots}, {"seed", o.seed},
              {"node", 0}};
  CsvWriter csv(prefix + "_timeline.csv");
  write_provenance(csv, "figure fig2", config);
  csv.header({"slot", "delta", "estimate", "state", "entropy_bits"});
  for (const auto& p : series) {
    csv.row({CsvWriter::num(p.slot), CsvWriter::num(p.delta), CsvWriter::num(p.estimate),
             CsvWriter::num(p.state), CsvWriter::num(p.entropy_bits)});
  }
}

// Analysis vs exact simulation: conditional source law and joint law for the
// reactive policy at m = 50.
void fig3(const std::string& prefix, const FigureOverrides& o) {
  const std::int64_t slots = o.slots > 0 ? o.slots : 10'000'000;
  const NetworkConfig net(50, SourceParams(0.02, 0.02), strategy_reactive());
  const TerminatingChain chain = build_chain(net);
  const JointAoiEstimateLaw joint = joint_law(net, o.tolerance);

  SimConfig sim{net, slots};
  sim.seed = o.seed;
  sim.track_all_nodes = true;
  const SimulationStats stats = run(sim);

  Json config{{"figure", "fig3"}, {"m", 50}, {"alpha", 0.02}, {"beta", 0.02},
              {"policy", policy_json(net.policy)}, {"slots", slots}, {"seed", o.seed},
              {"tolerance", o.tolerance}, {"track_all_nodes", true}};

  {
    CsvWriter csv(prefix + "_conditional.csv");
    write_provenance(csv, "figure fig3 (conditional law, estimate 0)", config);
    csv.header({"delta", "p0_analytic", "p0_empirical", "std_error", "samples"});
    Vec2 row = basis_row(0);
    for (std::int64_t delta = 0; delta <= 200; ++delta) {
      const double analytic = row.v0 / row.sum();
      std::string empirical = "", std_error = "", samples = "0";
      try {
        const EmpiricalLaw law = empirical_conditional_law(stats, delta, 0);
        empirical = CsvWriter::num(law.p0);
        std_error = CsvWriter::num(law.std_error);
        samples = CsvWriter::num(law.samples);
      } catch (const InsufficientSamples&) {
        // empty cell: leave the empirical columns blank
      }
      csv.row({CsvWriter::num(delta), CsvWriter::num(analytic), empirical, std_error, samples});
      row = row_times(row, chain.transient);
    }
  }
  {
    CsvWriter csv(prefix + "_joint.csv");
    write_provenance(csv, "figure fig3 (joint age-estimate law, estimate 0)", config);
    csv.header({"delta", "p_analytic", "p_empirical"});
    const std::int64_t hi = std::min<std::int64_t>({600, joint.delta_max, stats.delta_cap - 1});
    for (std::int64_t delta = 0; delta <= hi; ++delta) {
      const double analytic = joint.probability[0][static_cast<std::size_t>(delta)];
      const double empirical =
          static_cast<double>(stats.cell_count(delta, 0, 0) + stats.cell_count(delta, 0, 1)) /
          static_cast<double>(stats.counted_node_slots);
      csv.row({CsvWriter::num(delta), CsvWriter::num(analytic), CsvWriter::num(empirical)});
    }
  }
}

// CDF of the instantaneous entropy for random vs reactive access, symmetric
// sources.
void fig4(const std::string& prefix, const FigureOverrides& o) {
  const std::vector<int> ms =
      o.m_list.empty() ? std::vector<int>{10, 50, 100} : parse_int_list(o.m_list, "m");
  std::vector<double> thresholds;
  for (int i = 0; i <= 200; ++i) thresholds.push_back(static_cast<double>(i) / 200.0);

  Json config{{"figure", "fig4"}, {"alpha", 0.02}, {"beta", 0.02}, {"m_list", ms},
              {"tolerance", o.tolerance}, {"thresholds", "0:0.005:1"}};
  CsvWriter csv(prefix + "_cdf.csv");
  write_provenance(csv, "figure fig4", config);
  csv.header({"m", "strategy", "zeta", "cdf", "tail_mass"});
  for (int m : ms) {
    for (Strategy strategy : {Strategy::Random, Strategy::Reactive}) {
      const AccessPolicy policy =
          strategy == Strategy::Random ? strategy_random(m) : strategy_reactive();
      const NetworkConfig net(m, SourceParams(0.02, 0.02), policy);
      const EntropyCdf cdf = entropy_cdf(net, o.tolerance, thresholds);
      for (std::size_t i = 0; i < thresholds.size(); ++i) {
        csv.row({CsvWriter::num(m), to_string(strategy), CsvWriter::num(thresholds[i]),
                 CsvWriter::num(cdf.value[i]), CsvWriter::num(cdf.tail_mass)});
      }
    }
  }
}

// Average uncertainty and access probabilities across the population size.
void fig5(const std::string& prefix, const FigureOverrides& o) {
  const std::vector<int> ms = o.m_list.empty()
                                  ? std::vector<int>{2, 5, 10, 20, 50, 100, 200, 500}
                                  : parse_int_list(o.m_list, "m");
  const std::vector<Strategy> strategies{Strategy::Random, Strategy::Reactive,
                                         Strategy::Balanced, Strategy::LoadOne};
  SweepSettings settings{o.grid_resolution, o.refine_budget, o.seed, o.tolerance, o.workers};
  const auto rows = sweep_nodes(SourceParams(0.02, 0.02), ms, strategies, settings);
  Json config{{"figure", "fig5"}, {"alpha", 0.02}, {"beta", 0.02}, {"m_list", ms},
              {"strategies", Json::array({"random", "reactive", "balanced", "load-one"})},
              {"grid_resolution", o.grid_resolution}, {"refine_budget", o.refine_budget},
              {"seed", o.seed}, {"tolerance", o.tolerance}};
  write_sweep_csv(prefix + "_nodes.csv", "m", rows, config);
}

// Average uncertainty and optimized probabilities across the asymmetry
// factor at a fixed network-wide transition budget.
void fig6(const std::string& prefix, const FigureOverrides& o) {
  const std::vector<double> etas = o.eta_list.empty()
                                       ? std::vector<double>{1, 2, 5, 10, 20}
                                       : parse_double_list(o.eta_list, "eta");
  const std::vector<Strategy> strategies{Strategy::Random, Strategy::Reactive,
                                         Strategy::Balanced};
  SweepSettings settings{o.grid_resolution, o.refine_budget, o.seed, o.tolerance, o.workers};
  const auto rows = sweep_asymmetry(50, 0.8, etas, strategies, settings);
  Json config{{"figure", "fig6"}, {"m", 50}, {"budget", 0.8}, {"eta_list", etas},
              {"strategies", Json::array({"random", "reactive", "balanced"})},
              {"grid_resolution", o.grid_resolution}, {"refine_budget", o.refine_budget},
              {"seed", o.seed}, {"tolerance", o.tolerance}};
  write_sweep_csv(prefix + "_asymmetry.csv", "eta", rows, config);
}

}  // namespace

void write_sweep_csv(const std::string& path, const std::string& key_name,
                     const std::vector<SweepRow>& rows, const Json& config) {
  CsvWriter csv(path);
  csv.comment(std::string("alohamon v") + kVersion + " sweep");
  csv.comment("config: " + config.dump());
  csv.header({key_name, "strategy", "ok", "error", "alpha", "beta", "l00", "l01", "l10", "l11",
              "lambda_bar", "success_prob", "load", "entropy_bits", "entropy_error_bound"});
  for (const auto& row : rows) {
    if (row.ok) {
      csv.row({CsvWriter::num(row.parameter), to_string(row.strategy), "1", "",
               CsvWriter::num(row.alpha), CsvWriter::num(row.beta),
               CsvWriter::num(row.policy.l00), CsvWriter::num(row.policy.l01),
               CsvWriter::num(row.policy.l10), CsvWriter::num(row.policy.l11),
               CsvWriter::num(row.mean_access), CsvWriter::num(row.success_prob),
               CsvWriter::num(row.load), CsvWriter::num(row.entropy_bits),
               CsvWriter::num(row.entropy_error_bound)});
    } else {
      csv.row({CsvWriter::num(row.parameter), to_string(row.strategy), "0", row.error, "", "",
               "", "", "", "", "", "", "", "", ""});
    }
  }
}

void emit_figure(const std::string& name, const std::string& prefix,
                 const FigureOverrides& overrides) {
  const std::string out = prefix.empty() ? name : prefix;
  if (name == "fig2") {
    fig2(out, overrides);
  } else if (name == "fig3") {
    fig3(out, overrides);
  } else if (name == "fig4") {
    fig4(out, overrides);
  } else if (name == "fig5") {
    fig5(out, overrides);
  } else if (name == "fig6") {
    fig6(out, overrides);
  } else {
    throw ConfigError("unknown figure: " + name + " (expected fig2..fig6)");
  }
}

}  // namespace alohamon::cli
