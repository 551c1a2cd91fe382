#include "common.hpp"

#include <iostream>
#include <sstream>

namespace alohamon::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    try {
      values.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " entry: " + part);
    }
  }
  if (values.empty()) throw ConfigError(std::string(what) + " list is empty");
  return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  for (double v : parse_double_list(text, what)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw ConfigError(std::string(what) + " entries must be integers");
    }
    values.push_back(i);
  }
  return values;
}

std::vector<Strategy> parse_strategies(const std::string& text) {
  std::vector<Strategy> strategies;
  for (const auto& name : split(text, ',')) {
    const auto strategy = strategy_from_string(name);
    if (!strategy) throw ConfigError("unknown strategy: " + name);
    strategies.push_back(*strategy);
  }
  if (strategies.empty()) throw ConfigError("strategy list is empty");
  return strategies;
}

AccessPolicy resolve_policy(const std::string& text, const SourceParams& source, int node_count,
                            const SweepSettings& settings) {
  if (const auto strategy = strategy_from_string(text)) {
    switch (*strategy) {
      case Strategy::Random:
        return strategy_random(node_count);
      case Strategy::Reactive:
        return strategy_reactive();
      case Strategy::LoadOne:
        return strategy_load_one(source, node_count);
      case Strategy::Balanced: {
        OptimizationProblem problem{node_count, source, std::nullopt,
                                    settings.grid_resolution, settings.refine_budget,
                                    settings.seed};
        problem.final_tolerance = settings.tolerance;
        problem.workers = settings.workers;
        return optimize(problem).policy;
      }
    }
  }
  const auto parts = parse_double_list(text, "policy");
  if (parts.size() != 4) {
    throw ConfigError("policy must be a strategy name or four comma-separated probabilities");
  }
  try {
    return {parts[0], parts[1], parts[2], parts[3]};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const char* error_type_name(const std::exception& e) {
  if (dynamic_cast<const BudgetInfeasible*>(&e)) return "BudgetInfeasible";
  if (dynamic_cast<const LoadInfeasible*>(&e)) return "LoadInfeasible";
  if (dynamic_cast<const DegeneratePolicy*>(&e)) return "DegeneratePolicy";
  if (dynamic_cast<const UnreachableCondition*>(&e)) return "UnreachableCondition";
  if (dynamic_cast<const SingularFundamentalMatrix*>(&e)) return "SingularFundamentalMatrix";
  if (dynamic_cast<const InsufficientSamples*>(&e)) return "InsufficientSamples";
  if (dynamic_cast<const NoFeasiblePolicy*>(&e)) return "NoFeasiblePolicy";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "ConfigError";
  return "Error";
}

void emit_error_record(const std::string& mode, const std::exception& e) {
  Json record;
  record["error"]["type"] = error_type_name(e);
  record["error"]["message"] = e.what();
  record["error"]["mode"] = mode;
  std::cerr << record.dump() << "\n";
}

Json policy_json(const AccessPolicy& p) {
  return Json::array({p.l00, p.l01, p.l10, p.l11});
}

}  // namespace alohamon::cli
