#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "alohamon/access_policy.hpp"
#include "alohamon/errors.hpp"

namespace alohamon {

/// Default truncation tolerance for the infinite sums over ages and
/// inter-refresh lengths.
inline constexpr double kDefaultTolerance = 1e-12;

struct Vec2 {
  double v0 = 0.0;
  double v1 = 0.0;
  double sum() const { return v0 + v1; }
};

struct Mat2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;
};

/// row^T * M for a row vector.
inline Vec2 row_times(const Vec2& row, const Mat2& m) {
  return {row.v0 * m.m00 + row.v1 * m.m10, row.v0 * m.m01 + row.v1 * m.m11};
}

inline Vec2 basis_row(int state) { return state == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0}; }

/// Terminating chain tracking the source state while the sink receives no
/// update from the reference node. `transient` holds the substochastic 2x2
/// block over states {0,1}; `absorption` the per-state probability of an
/// update delivery (which ends the inter-refresh period). Rows conserve
/// probability: transient row sum + absorption entry = 1.
struct TerminatingChain {
  Mat2 transient;
  Vec2 absorption;
};

/// Builds the terminating chain for a network configuration, folding the
/// slotted-ALOHA success probability into the transition structure.
/// Throws DegeneratePolicy when no update can ever be delivered
/// (absorption identically zero, e.g. the all-zero policy or a certain
/// collision at every slot).
TerminatingChain build_chain(const NetworkConfig& config);

/// Law of the current source state given the age of the last update and its
/// content. p0 + p1 = 1.
struct ConditionalSourceLaw {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// Conditional law of the source state after `delta` slots without delivery,
/// starting from a delivered state `estimate`. Throws UnreachableCondition
/// when the pair (delta, estimate) has zero probability.
ConditionalSourceLaw conditional_source_law(const TerminatingChain& chain, std::int64_t delta,
                                            int estimate);

/// Receiver uncertainty h(delta, estimate) in bits; zero at delta = 0.
double instantaneous_entropy(const TerminatingChain& chain, std::int64_t delta, int estimate);

/// Incrementally extended table of h(delta, estimate); amortizes the age
/// iteration when many ages are queried (timelines, figure sweeps).
class EntropyCurve {
 public:
  explicit EntropyCurve(const TerminatingChain& chain);

  /// h(delta, estimate) in bits. Throws UnreachableCondition for pairs with
  /// zero probability mass.
  double at(std::int64_t delta, int estimate);

 private:
  TerminatingChain chain_;
  std::array<std::vector<double>, 2> values_;
  std::array<Vec2, 2> row_;  // normalized to sum 1
  std::array<bool, 2> exhausted_{false, false};
};

/// Distribution of the inter-refresh time W (slots between consecutive
/// deliveries from the reference node), conditioned on the estimate held
/// over the period. pmf[xhat][w-1] = P(W = w | xhat), w = 1, 2, ...
struct InterRefreshLaw {
  std::array<std::vector<double>, 2> pmf;
  std::array<double, 2> mean;       // closed form via the fundamental matrix
  std::array<double, 2> tail_mass;  // P(W > w_max | xhat)
};

/// Iterates the phase-type law until the residual transient mass drops below
/// `tolerance` (or an internal iteration cap is hit; the remaining mass is
/// recorded in tail_mass either way). Throws SingularFundamentalMatrix if
/// (I - A) cannot be inverted.
InterRefreshLaw inter_refresh_law(const TerminatingChain& chain,
                                  double tolerance = kDefaultTolerance);

/// Stationary law of the current age, conditioned on the estimate:
/// pmf[xhat][delta] = P(W > delta | xhat) / E[W | xhat].
struct AoiLawGivenEstimate {
  std::array<std::vector<double>, 2> pmf;
  std::array<double, 2> tail_mass;     // probability mass beyond the table
  std::array<double, 2> mean_refresh;  // E[W | xhat]
};

AoiLawGivenEstimate aoi_law_given_estimate(const TerminatingChain& chain,
                                           double tolerance = kDefaultTolerance);

/// Expected inter-refresh times (E[W | estimate]) through the fundamental
/// matrix; v0/v1 index the estimate value. Throws SingularFundamentalMatrix
/// for degenerate chains.
Vec2 expected_refresh_time(const TerminatingChain& chain);

/// Stationary law of the estimate held at the sink.
struct EstimateLaw {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// Length-biased mixture over inter-refresh periods: periods start with
/// estimate 0 with probability c0 and last E[W|0] slots on average.
EstimateLaw estimate_law(const NetworkConfig& config, const TerminatingChain& chain);

/// Truncated joint law of (age, estimate) with the per-cell entropy table.
/// probability[xhat][delta] = p(delta, xhat) for delta in [0, delta_max];
/// tail_mass is the exact probability excluded by the truncation.
struct JointAoiEstimateLaw {
  std::int64_t delta_max = -1;
  std::array<std::vector<double>, 2> probability;
  std::array<std::vector<double>, 2> entropy;
  double tail_mass = 0.0;
  EstimateLaw estimate;
};

JointAoiEstimateLaw joint_law(const NetworkConfig& config, double tolerance = kDefaultTolerance);

/// Average receiver uncertainty H = sum p(delta, xhat) h(delta, xhat).
/// `bits` includes an estimate of the truncated tail contribution (the
/// per-cell entropy converges in the tail); the true value lies within
/// `error_bound` of `bits`, and error_bound <= tail_mass * 1 bit.
struct AverageEntropy {
  double bits = 0.0;
  double tail_mass = 0.0;
  double error_bound = 0.0;
};

AverageEntropy average_conditional_entropy(const NetworkConfig& config,
                                           double tolerance = kDefaultTolerance);

/// CDF of the instantaneous entropy at the thresholds given (ascending).
/// value[i] sums the table mass with h <= thresholds[i]; the true CDF lies
/// in [value[i], value[i] + tail_mass].
struct EntropyCdf {
  std::vector<double> value;
  double tail_mass = 0.0;
};

EntropyCdf entropy_cdf(const NetworkConfig& config, double tolerance,
                       std::span<const double> thresholds);

struct Reception {
  std::int64_t slot = 0;
  int state = 0;
};

struct TimelinePoint {
  std::int64_t slot = 0;
  std::int64_t delta = 0;
  int estimate = 0;
  double entropy_bits = 0.0;
};

/// Entropy sample path for a given reception schedule: the age resets to 0
/// at each reception, the estimate takes the received state, and h is
/// evaluated per slot from the first reception through end_slot.
std::vector<TimelinePoint> entropy_timeline(const NetworkConfig& config,
                                            std::span<const Reception> receptions,
                                            std::int64_t end_slot);

}  // namespace alohamon
