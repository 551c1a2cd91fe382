#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alohamon/errors.hpp"
#include "alohamon/source_model.hpp"

namespace alohamon {

/// Transmit probabilities conditioned on the (previous, current) state pair
/// of the monitored source. Each component lies in [0,1]; the all-zero
/// policy is a valid value but yields a degenerate chain downstream.
struct AccessPolicy {
  double l00 = 0.0;
  double l01 = 0.0;
  double l10 = 0.0;
  double l11 = 0.0;

  AccessPolicy() = default;
  AccessPolicy(double l00_, double l01_, double l10_, double l11_)
      : l00(l00_), l01(l01_), l10(l10_), l11(l11_) {
    for (double v : {l00, l01, l10, l11}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("AccessPolicy: components must lie in [0,1]");
      }
    }
  }

  double at(int prev, int cur) const {
    return prev == 0 ? (cur == 0 ? l00 : l01) : (cur == 0 ? l10 : l11);
  }
};

struct NetworkConfig {
  int node_count;
  SourceParams source;
  AccessPolicy policy;

  NetworkConfig(int node_count_, SourceParams source_, AccessPolicy policy_)
      : node_count(node_count_), source(source_), policy(policy_) {
    if (node_count < 1) throw std::invalid_argument("NetworkConfig: node_count must be >= 1");
  }
};

/// Average transmit probability of a node in stationary conditions:
/// pi0*[(1-alpha)*l00 + alpha*l01] + pi1*[beta*l10 + (1-beta)*l11].
inline double mean_access_probability(const SourceParams& source, const AccessPolicy& policy) {
  const StationaryLaw pi = stationary(source);
  return pi.pi0 * ((1.0 - source.alpha) * policy.l00 + source.alpha * policy.l01) +
         pi.pi1 * (source.beta * policy.l10 + (1.0 - source.beta) * policy.l11);
}

/// Probability that a transmitted packet is decoded: every one of the other
/// node_count-1 terminals must stay silent, each transmitting with the mean
/// access probability.
inline double success_probability(const NetworkConfig& config) {
  const double lbar = mean_access_probability(config.source, config.policy);
  return std::pow(1.0 - lbar, config.node_count - 1);
}

/// Average number of packets sent per slot across the network.
inline double channel_load(const NetworkConfig& config) {
  return config.node_count * mean_access_probability(config.source, config.policy);
}

/// Throughput-oriented benchmark: transmit with probability 1/node_count
/// regardless of the source evolution.
inline AccessPolicy strategy_random(int node_count) {
  if (node_count < 1) throw std::invalid_argument("strategy_random: node_count must be >= 1");
  const double l = 1.0 / node_count;
  return {l, l, l, l};
}

/// Transmit exactly when the source changes state.
inline AccessPolicy strategy_reactive() {
  return {0.0, 1.0, 1.0, 0.0};
}

/// Reactive variant that also transmits without a state change, with the
/// persistence probability chosen so the average channel load is one packet
/// per slot. The persistence probability is split equally between l00 and
/// l11.
inline AccessPolicy strategy_load_one(const SourceParams& source, int node_count) {
  if (node_count < 1) throw std::invalid_argument("strategy_load_one: node_count must be >= 1");
  const StationaryLaw pi = stationary(source);
  const double change_rate = pi.pi0 * source.alpha + pi.pi1 * source.beta;
  if (change_rate * node_count > 1.0) {
    throw LoadInfeasible("strategy_load_one: reactive transmissions alone already exceed load 1");
  }
  const double c =
      std::clamp((1.0 / node_count - change_rate) / (1.0 - change_rate), 0.0, 1.0);
  return {c, 1.0, 1.0, c};
}

}  // namespace alohamon
