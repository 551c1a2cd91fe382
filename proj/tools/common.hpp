#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "alohamon/access_policy.hpp"
#include "alohamon/errors.hpp"
#include "alohamon/optimizer.hpp"
#include "json.hpp"

namespace alohamon::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kWorkersEnv = "ALOHAMON_WORKERS";

/// Worker-pool size: explicit flag first, then the environment variable,
/// otherwise 0 (all hardware threads).
inline int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 0;
}

/// Source parameters from either (alpha, beta) or (eta, budget).
struct SourceOpts {
  double alpha = -1.0;
  double beta = -1.0;
  double eta = -1.0;
  double budget = -1.0;

  SourceParams resolve(int node_count) const {
    const bool direct = alpha >= 0.0 || beta >= 0.0;
    const bool budgeted = eta > 0.0 || budget > 0.0;
    if (direct && budgeted) {
      throw ConfigError("give either --alpha/--beta or --eta/--budget, not both");
    }
    if (budgeted) {
      if (!(eta > 0.0) || !(budget > 0.0)) {
        throw ConfigError("--eta and --budget must both be set and positive");
      }
      return params_from_budget(eta, node_count, budget);
    }
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      throw ConfigError("--alpha and --beta must both be set and positive");
    }
    return {alpha, beta};
  }
};

std::vector<double> parse_double_list(const std::string& text, const char* what);
std::vector<int> parse_int_list(const std::string& text, const char* what);
std::vector<Strategy> parse_strategies(const std::string& text);

/// Policy from a strategy name, "balanced" (runs the optimizer), or four
/// comma-separated components.
AccessPolicy resolve_policy(const std::string& text, const SourceParams& source, int node_count,
                            const SweepSettings& settings);

const char* error_type_name(const std::exception& e);
void emit_error_record(const std::string& mode, const std::exception& e);

Json policy_json(const AccessPolicy& p);

}  // namespace alohamon::cli
