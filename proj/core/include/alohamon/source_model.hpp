#pragma once

#include <cmath>
#include <stdexcept>

#include "alohamon/errors.hpp"

namespace alohamon {

/// Binary entropy in bits, with 0*log2(0) := 0.
inline double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

/// Two-state discrete-time Markov source. alpha is the per-slot probability
/// of the 0->1 transition, beta of the 1->0 one. Both must lie in the open
/// interval (0,1) so the chain is ergodic and aperiodic.
struct SourceParams {
  double alpha;
  double beta;

  SourceParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
      throw std::invalid_argument("SourceParams: alpha and beta must lie in (0,1)");
    }
  }
};

struct StationaryLaw {
  double pi0;
  double pi1;
};

inline StationaryLaw stationary(const SourceParams& source) {
  const double pi0 = source.beta / (source.alpha + source.beta);
  return {pi0, 1.0 - pi0};
}

/// Ratio alpha/beta. 1 for symmetric sources; large values mean the source
/// spends most of its time in state 1.
inline double asymmetry_factor(const SourceParams& source) {
  return source.alpha / source.beta;
}

/// Entropy of the stationary law, in bits. In (0,1]; equals 1 iff alpha==beta.
inline double source_entropy(const SourceParams& source) {
  return binary_entropy_bits(stationary(source).pi0);
}

/// Inverts the network-wide transition budget
///   node_count * (pi0*alpha + pi1*beta) = budget
/// for a given asymmetry factor eta = alpha/beta. The per-node transition
/// rate reduces to 2*alpha*beta/(alpha+beta), which gives
/// beta = budget*(1+eta)/(2*node_count*eta) and alpha = eta*beta.
inline SourceParams params_from_budget(double eta, int node_count, double budget) {
  if (!(eta > 0.0)) throw std::invalid_argument("params_from_budget: eta must be > 0");
  if (node_count < 1) throw std::invalid_argument("params_from_budget: node_count must be >= 1");
  if (!(budget > 0.0)) throw std::invalid_argument("params_from_budget: budget must be > 0");
  const double beta = budget * (1.0 + eta) / (2.0 * node_count * eta);
  const double alpha = eta * beta;
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw BudgetInfeasible("params_from_budget: budget requires a transition probability outside (0,1)");
  }
  return {alpha, beta};
}

}  // namespace alohamon
