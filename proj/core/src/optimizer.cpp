#include "alohamon/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>

#include "alohamon/rng.hpp"
#include "parallel.hpp"

namespace alohamon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefineStarts = 3;

using PolicyVec = std::array<double, 4>;

bool lex_less(const PolicyVec& a, const PolicyVec& b) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

struct Candidate {
  PolicyVec lambda{};
  double objective = kInf;
};

// Total order: objective first, then lexicographically smallest vector, so
// min-reduction over any partition of the candidates is associative and the
// tie-break between equal-objective policies is deterministic.
bool better(const Candidate& a, const Candidate& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  return lex_less(a.lambda, b.lambda);
}

// Search space over the access vector: either all of [0,1]^4 or the affine
// slice of constant mean access probability, with one coordinate eliminated
// in closed form.
struct SearchSpace {
  int dim = 4;
  std::array<int, 4> free_idx{0, 1, 2, 3};
  int elim_idx = -1;
  double elim_target = 0.0;       // required mean access probability
  std::array<double, 4> coeff{};  // lbar = coeff . lambda

  bool expand(const double* x, PolicyVec* lambda) const {
    PolicyVec v{};
    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(free_idx[i])] = x[i];
    if (elim_idx >= 0) {
      double partial = 0.0;
      for (int i = 0; i < dim; ++i) {
        partial += coeff[static_cast<std::size_t>(free_idx[i])] * x[i];
      }
      const double rest = (elim_target - partial) / coeff[static_cast<std::size_t>(elim_idx)];
      if (rest < -1e-9 || rest > 1.0 + 1e-9) return false;
      v[static_cast<std::size_t>(elim_idx)] = std::clamp(rest, 0.0, 1.0);
    }
    *lambda = v;
    return true;
  }
};

SearchSpace constrained_space(const OptimizationProblem& problem, double target_lbar) {
  const StationaryLaw pi = stationary(problem.source);
  SearchSpace space;
  space.coeff = {pi.pi0 * (1.0 - problem.source.alpha), pi.pi0 * problem.source.alpha,
                 pi.pi1 * problem.source.beta, pi.pi1 * (1.0 - problem.source.beta)};
  space.elim_idx = static_cast<int>(
      std::max_element(space.coeff.begin(), space.coeff.end()) - space.coeff.begin());
  space.elim_target = target_lbar;
  space.dim = 3;
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (i != space.elim_idx) space.free_idx[static_cast<std::size_t>(k++)] = i;
  }
  return space;
}

struct Objective {
  const OptimizationProblem& problem;
  const SearchSpace& space;
  std::atomic<std::int64_t> evaluations{0};

  double operator()(const double* x) {
    PolicyVec lambda{};
    if (!space.expand(x, &lambda)) return kInf;
    evaluations.fetch_add(1, std::memory_order_relaxed);
    try {
      const NetworkConfig config(problem.node_count, problem.source,
                                 AccessPolicy(lambda[0], lambda[1], lambda[2], lambda[3]));
      return average_conditional_entropy(config, problem.search_tolerance).bits;
    } catch (const Error&) {
      return kInf;
    }
  }
};

// Derivative-free simplex descent inside the unit box; candidates are
// projected onto the box before evaluation. Deterministic.
class NelderMead {
 public:
  NelderMead(Objective& objective, int dim, int budget)
      : objective_(objective), dim_(dim), budget_(budget) {}

  Candidate minimize(const std::array<double, 4>& start, double step) {
    const int n = dim_;
    std::vector<std::array<double, 4>> x(static_cast<std::size_t>(n) + 1);
    std::vector<double> f(static_cast<std::size_t>(n) + 1, kInf);
    x[0] = start;
    for (int i = 0; i < n; ++i) {
      auto v = start;
      const auto j = static_cast<std::size_t>(i);
      v[j] += v[j] + step <= 1.0 ? step : -step;
      x[static_cast<std::size_t>(i) + 1] = v;
    }
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = eval(x[i]);

    while (used_ < budget_) {
      sort_simplex(x, f);
      note(x[0], f[0]);
      double spread = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        spread = std::max(spread, std::abs(x[static_cast<std::size_t>(n)][j] - x[0][j]));
      }
      if (spread < 1e-12 && f[static_cast<std::size_t>(n)] - f[0] < 1e-14) break;

      std::array<double, 4> centroid{};
      for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        double c = 0.0;
        for (int v = 0; v < n; ++v) c += x[static_cast<std::size_t>(v)][j];
        centroid[j] = c / n;
      }
      const auto worst = static_cast<std::size_t>(n);
      const auto reflected = blend(centroid, x[worst], -1.0);
      const double fr = eval(reflected);
      if (fr < f[0]) {
        const auto expanded = blend(centroid, x[worst], -2.0);
        const double fe = eval(expanded);
        if (fe < fr) {
          x[worst] = expanded;
          f[worst] = fe;
        } else {
          x[worst] = reflected;
          f[worst] = fr;
        }
      } else if (fr < f[worst - 1]) {
        x[worst] = reflected;
        f[worst] = fr;
      } else {
        const bool outside = fr < f[worst];
        const auto contracted = blend(centroid, outside ? reflected : x[worst], 0.5);
        const double fc = eval(contracted);
        if (fc < std::min(fr, f[worst])) {
          x[worst] = contracted;
          f[worst] = fc;
        } else {
          for (std::size_t v = 1; v < x.size(); ++v) {
            x[v] = blend(x[0], x[v], 0.5);
            f[v] = eval(x[v]);
          }
        }
      }
    }
    sort_simplex(x, f);
    note(x[0], f[0]);
    return best_;
  }

 private:
  double eval(const std::array<double, 4>& point) {
    if (used_ >= budget_) return kInf;
    ++used_;
    const auto projected = project(point);
    return objective_(projected.data());
  }

  void note(const std::array<double, 4>& point, double value) {
    if (!(value < best_.objective)) return;
    PolicyVec lambda{};
    const auto projected = project(point);
    if (!objective_.space.expand(projected.data(), &lambda)) return;
    best_ = {lambda, value};
  }

  std::array<double, 4> project(const std::array<double, 4>& point) const {
    auto out = point;
    for (int i = 0; i < dim_; ++i) {
      const auto j = static_cast<std::size_t>(i);
      out[j] = std::clamp(out[j], 0.0, 1.0);
    }
    return out;
  }

  void sort_simplex(std::vector<std::array<double, 4>>& x, std::vector<double>& f) const {
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<std::array<double, 4>> xs(x.size());
    std::vector<double> fs(f.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      xs[i] = x[order[i]];
      fs[i] = f[order[i]];
    }
    x.swap(xs);
    f.swap(fs);
  }

  static std::array<double, 4> blend(const std::array<double, 4>& a,
                                     const std::array<double, 4>& b, double t) {
    // a + t*(b - a)
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  }

  Objective& objective_;
  int dim_;
  int budget_;
  int used_ = 0;
  Candidate best_;
};

OptimizationResult search(const OptimizationProblem& problem, const SearchSpace& space) {
  if (problem.grid_resolution < 2) {
    throw std::invalid_argument("grid_resolution must be >= 2");
  }
  if (problem.refine_budget < 0) {
    throw std::invalid_argument("refine_budget must be >= 0");
  }
  Objective objective{problem, space, {}};

  // Phase 1: full grid. Objectives land in an index-addressed vector, so the
  // scan below is identical for any worker count.
  const int g = problem.grid_resolution;
  std::int64_t total = 1;
  for (int i = 0; i < space.dim; ++i) total *= g;
  std::vector<double> values(static_cast<std::size_t>(total), kInf);
  detail::parallel_for(total, problem.workers, [&](std::int64_t index) {
    std::array<double, 4> x{};
    std::int64_t rest = index;
    for (int i = 0; i < space.dim; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<double>(rest % g) / (g - 1);
      rest /= g;
    }
    values[static_cast<std::size_t>(index)] = objective(x.data());
  });

  OptimizationResult result;
  std::vector<Candidate> top;  // best kRefineStarts grid candidates
  Candidate best;
  for (std::int64_t index = 0; index < total; ++index) {
    const double value = values[static_cast<std::size_t>(index)];
    if (!std::isfinite(value)) continue;
    std::array<double, 4> x{};
    std::int64_t rest = index;
    for (int i = 0; i < space.dim; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<double>(rest % g) / (g - 1);
      rest /= g;
    }
    PolicyVec lambda{};
    space.expand(x.data(), &lambda);
    const Candidate candidate{lambda, value};
    if (better(candidate, best)) {
      if (candidate.objective < best.objective) {
        result.trace.push_back(
            {AccessPolicy(lambda[0], lambda[1], lambda[2], lambda[3]), value});
      }
      best = candidate;
    }
    top.push_back(candidate);
    std::sort(top.begin(), top.end(), better);
    if (top.size() > kRefineStarts) top.resize(kRefineStarts);
  }
  if (top.empty()) {
    throw NoFeasiblePolicy("every candidate policy is degenerate");
  }

  // Phase 2: simplex refinement from the best grid points.
  if (problem.refine_budget > 0) {
    const int starts = static_cast<int>(top.size());
    const int per_start = problem.refine_budget / starts;
    const double step = 0.5 / (g - 1);
    for (int s = 0; s < starts; ++s) {
      const int budget = s == 0 ? per_start + problem.refine_budget % starts : per_start;
      if (budget <= 0) continue;
      std::array<double, 4> start{};
      for (int i = 0; i < space.dim; ++i) {
        start[static_cast<std::size_t>(i)] =
            top[static_cast<std::size_t>(s)].lambda[static_cast<std::size_t>(space.free_idx[i])];
      }
      NelderMead refiner(objective, space.dim, budget);
      const Candidate refined = refiner.minimize(start, step);
      if (std::isfinite(refined.objective) && better(refined, best)) {
        if (refined.objective < best.objective) {
          result.trace.push_back({AccessPolicy(refined.lambda[0], refined.lambda[1],
                                               refined.lambda[2], refined.lambda[3]),
                                  refined.objective});
        }
        best = refined;
      }
    }
  }

  result.policy = AccessPolicy(best.lambda[0], best.lambda[1], best.lambda[2], best.lambda[3]);
  const NetworkConfig config(problem.node_count, problem.source, result.policy);
  result.objective_bits = average_conditional_entropy(config, problem.final_tolerance).bits;
  result.evaluations = objective.evaluations.load() + 1;
  return result;
}

SweepRow make_row(double parameter, int node_count, const SourceParams& source,
                  Strategy strategy) {
  SweepRow row;
  row.parameter = parameter;
  row.node_count = node_count;
  row.alpha = source.alpha;
  row.beta = source.beta;
  row.strategy = strategy;
  return row;
}

void fill_row(SweepRow* row, const SourceParams& source, const SweepSettings& settings,
              std::uint64_t cell_seed) {
  const AccessPolicy policy = [&] {
    switch (row->strategy) {
      case Strategy::Random:
        return strategy_random(row->node_count);
      case Strategy::Reactive:
        return strategy_reactive();
      case Strategy::LoadOne:
        return strategy_load_one(source, row->node_count);
      case Strategy::Balanced: {
        OptimizationProblem problem{row->node_count, source, std::nullopt,
                                    settings.grid_resolution, settings.refine_budget, cell_seed};
        problem.final_tolerance = settings.tolerance;
        problem.workers = 1;  // cells themselves run in parallel
        return optimize(problem).policy;
      }
    }
    throw std::invalid_argument("unknown strategy");
  }();
  const NetworkConfig config(row->node_count, source, policy);
  const AverageEntropy entropy = average_conditional_entropy(config, settings.tolerance);
  row->policy = policy;
  row->entropy_bits = entropy.bits;
  row->entropy_error_bound = entropy.error_bound;
  row->mean_access = mean_access_probability(source, policy);
  row->success_prob = success_probability(config);
  row->load = channel_load(config);
  row->ok = true;
}

}  // namespace

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Random:
      return "random";
    case Strategy::Reactive:
      return "reactive";
    case Strategy::LoadOne:
      return "load-one";
    case Strategy::Balanced:
      return "balanced";
  }
  return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  if (name == "random") return Strategy::Random;
  if (name == "reactive") return Strategy::Reactive;
  if (name == "load-one") return Strategy::LoadOne;
  if (name == "balanced") return Strategy::Balanced;
  return std::nullopt;
}

OptimizationResult optimize(const OptimizationProblem& problem) {
  const SearchSpace space;
  return search(problem, space);
}

OptimizationResult optimize_constrained(const OptimizationProblem& problem) {
  if (!problem.load_target.has_value()) {
    throw std::invalid_argument("optimize_constrained requires a load target");
  }
  const double target = *problem.load_target;
  if (!(target >= 0.0 && target <= problem.node_count)) {
    throw LoadInfeasible("load target outside [0, node_count]");
  }
  const SearchSpace space = constrained_space(problem, target / problem.node_count);
  return search(problem, space);
}

std::vector<SweepRow> sweep_nodes(const SourceParams& source, std::span<const int> node_counts,
                                  std::span<const Strategy> strategies,
                                  const SweepSettings& settings) {
  std::vector<SweepRow> rows;
  rows.reserve(node_counts.size() * strategies.size());
  for (int m : node_counts) {
    for (Strategy strategy : strategies) {
      rows.push_back(make_row(static_cast<double>(m), m, source, strategy));
    }
  }
  detail::parallel_for(static_cast<std::int64_t>(rows.size()), settings.workers,
                       [&](std::int64_t i) {
                         auto& row = rows[static_cast<std::size_t>(i)];
                         try {
                           fill_row(&row, source, settings,
                                    derive_seed(settings.seed, static_cast<std::uint64_t>(i)));
                         } catch (const std::exception& e) {
                           row.error = e.what();
                         }
                       });
  return rows;
}

std::vector<SweepRow> sweep_asymmetry(int node_count, double budget,
                                      std::span<const double> etas,
                                      std::span<const Strategy> strategies,
                                      const SweepSettings& settings) {
  std::vector<SweepRow> rows;
  rows.reserve(etas.size() * strategies.size());
  std::vector<std::optional<SourceParams>> sources;
  sources.reserve(etas.size());
  std::vector<std::string> source_errors(etas.size());
  for (std::size_t k = 0; k < etas.size(); ++k) {
    try {
      sources.push_back(params_from_budget(etas[k], node_count, budget));
    } catch (const std::exception& e) {
      sources.push_back(std::nullopt);
      source_errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < etas.size(); ++k) {
    for (Strategy strategy : strategies) {
      if (sources[k].has_value()) {
        rows.push_back(make_row(etas[k], node_count, *sources[k], strategy));
      } else {
        SweepRow row;
        row.parameter = etas[k];
        row.node_count = node_count;
        row.strategy = strategy;
        row.error = source_errors[k];
        rows.push_back(row);
      }
    }
  }
  detail::parallel_for(static_cast<std::int64_t>(rows.size()), settings.workers,
                       [&](std::int64_t i) {
                         auto& row = rows[static_cast<std::size_t>(i)];
                         if (!row.error.empty()) return;
                         try {
                           const SourceParams source(row.alpha, row.beta);
                           fill_row(&row, source, settings,
                                    derive_seed(settings.seed, static_cast<std::uint64_t>(i)));
                         } catch (const std::exception& e) {
                           row.error = e.what();
                         }
                       });
  return rows;
}

}  // namespace alohamon
