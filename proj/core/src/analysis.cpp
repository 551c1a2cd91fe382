#include "alohamon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alohamon {
namespace {

// Hard caps guarding near-degenerate chains whose transient mass decays too
// slowly for the tolerance to be reached; the exact remaining mass is always
// recorded, so truncated results stay consistent.
constexpr std::int64_t kMaxIterations = 50'000'000;
constexpr std::int64_t kMaxTableRows = 1'000'000;

// Direction-convergence detection for the streaming entropy accumulation.
constexpr double kDirectionEps = 1e-14;
constexpr int kDirectionStreak = 64;
constexpr std::int64_t kDirectionMinAge = 128;

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// det(I - A) expanded through row conservation (A*1 + a_d = 1):
//   det = a01*ad1 + a10*ad0 + ad0*ad1.
// All terms are nonnegative, so the subtraction-free form stays accurate for
// chains absorbing with tiny probability. Positivity is equivalent to a
// spectral radius below one for these chains.
double fundamental_det(const TerminatingChain& chain) {
  const Mat2& a = chain.transient;
  const Vec2& ad = chain.absorption;
  return a.m01 * ad.v1 + a.m10 * ad.v0 + ad.v0 * ad.v1;
}

// Row sums of the fundamental matrix: z = (I - A)^{-1} 1. z[xhat] is the
// expected number of slots to absorption from xhat, i.e. E[W | xhat].
Vec2 fundamental_row_sums(const TerminatingChain& chain) {
  const Mat2& a = chain.transient;
  const Vec2& ad = chain.absorption;
  const double det = fundamental_det(chain);
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw SingularFundamentalMatrix("fundamental matrix is singular; chain is degenerate");
  }
  // (1 - a11) = a10 + ad1 and (1 - a00) = a01 + ad0, again subtraction-free.
  const double z0 = ((a.m10 + ad.v1) + a.m01) / det;
  const double z1 = ((a.m01 + ad.v0) + a.m10) / det;
  return {z0, z1};
}

double clamp_bits(double h) { return std::clamp(h, 0.0, 1.0); }

void check_estimate(int estimate) {
  if (estimate != 0 && estimate != 1) {
    throw std::invalid_argument("estimate must be 0 or 1");
  }
}

// One streaming pass over ages for a fixed estimate value: accumulates
// sum_d S(d) h(d) with S(d) = P(W > d | xhat), stopping either when the
// remaining mass is negligible or when the conditional law has converged in
// direction (stiff chains), in which case the tail contributes h_lim exactly
// up to the recorded drift.
struct StreamedEntropy {
  double weighted_sum = 0.0;  // sum_{d <= D} S(d) h(d) + h_lim * tail_sum
  double tail_sum = 0.0;      // sum_{d > D} S(d), computed in closed form
  double h_uncertainty = 0.0; // bound on |h(d) - h_lim| over the tail
};

StreamedEntropy stream_entropy(const TerminatingChain& chain, const Vec2& z, int xhat,
                               double mass_cut) {
  Vec2 row = basis_row(xhat);
  Kahan acc;
  double h_prev = std::numeric_limits<double>::quiet_NaN();
  double change_prev = std::numeric_limits<double>::infinity();
  int streak = 0;
  StreamedEntropy out;
  for (std::int64_t delta = 0;; ++delta) {
    const double survival = row.sum();
    if (survival <= 0.0) {
      out.weighted_sum = acc.value();
      return out;  // remaining ages unreachable; nothing left to add
    }
    const double h = binary_entropy_bits(row.v0 / survival);
    acc.add(survival * h);
    const Vec2 next = row_times(row, chain.transient);
    const double remaining = next.v0 * z.v0 + next.v1 * z.v1;  // sum_{k > delta} S(k)
    if (remaining < mass_cut) {
      out.weighted_sum = acc.value() + h * remaining;
      out.tail_sum = remaining;
      out.h_uncertainty = 1.0;  // irrelevant: the tail itself is below the cut
      return out;
    }
    const double change = std::isnan(h_prev) ? std::numeric_limits<double>::infinity()
                                             : std::abs(h - h_prev);
    if (change < kDirectionEps) {
      ++streak;
    } else {
      streak = 0;
    }
    if ((delta >= kDirectionMinAge && streak >= kDirectionStreak) || delta >= kMaxIterations) {
      // Tail entropy is h up to the residual drift of the power iteration,
      // estimated from the geometric decay of the per-step changes.
      double drift = 1.0;
      if (change == 0.0) {
        drift = 0.0;
      } else if (change_prev > 0.0 && std::isfinite(change_prev)) {
        const double ratio = change / change_prev;
        if (ratio < 0.999) drift = change * ratio / (1.0 - ratio) * 100.0;
      }
      if (delta >= kMaxIterations) drift = 1.0;
      out.weighted_sum = acc.value() + h * remaining;
      out.tail_sum = remaining;
      out.h_uncertainty = std::min(1.0, drift + 1e-13);
      return out;
    }
    if (change > 0.0) change_prev = change;
    h_prev = h;
    row = next;
  }
}

}  // namespace

TerminatingChain build_chain(const NetworkConfig& config) {
  const double ps = success_probability(config);
  const double alpha = config.source.alpha;
  const double beta = config.source.beta;
  const AccessPolicy& l = config.policy;
  TerminatingChain chain;
  chain.transient = {(1.0 - alpha) * (1.0 - l.l00 * ps), alpha * (1.0 - l.l01 * ps),
                     beta * (1.0 - l.l10 * ps), (1.0 - beta) * (1.0 - l.l11 * ps)};
  chain.absorption = {(alpha * l.l01 + (1.0 - alpha) * l.l00) * ps,
                      (beta * l.l10 + (1.0 - beta) * l.l11) * ps};
  if (chain.absorption.v0 == 0.0 && chain.absorption.v1 == 0.0) {
    throw DegeneratePolicy("policy never delivers an update");
  }
  if (!(fundamental_det(chain) > 0.0)) {
    throw DegeneratePolicy("transient block has spectral radius 1; absorption unreachable");
  }
  return chain;
}

ConditionalSourceLaw conditional_source_law(const TerminatingChain& chain, std::int64_t delta,
                                            int estimate) {
  if (delta < 0) throw std::invalid_argument("delta must be >= 0");
  check_estimate(estimate);
  Vec2 row = basis_row(estimate);
  for (std::int64_t k = 0; k < delta; ++k) {
    row = row_times(row, chain.transient);
    const double s = row.sum();
    if (s <= 0.0) {
      throw UnreachableCondition("(delta, estimate) pair has zero probability");
    }
    row.v0 /= s;
    row.v1 /= s;
  }
  return {row.v0, row.v1};
}

double instantaneous_entropy(const TerminatingChain& chain, std::int64_t delta, int estimate) {
  const ConditionalSourceLaw law = conditional_source_law(chain, delta, estimate);
  return binary_entropy_bits(law.p0);
}

EntropyCurve::EntropyCurve(const TerminatingChain& chain) : chain_(chain) {
  for (int xhat : {0, 1}) {
    row_[xhat] = basis_row(xhat);
    values_[xhat].push_back(0.0);
  }
}

double EntropyCurve::at(std::int64_t delta, int estimate) {
  if (delta < 0) throw std::invalid_argument("delta must be >= 0");
  check_estimate(estimate);
  auto& cache = values_[estimate];
  while (static_cast<std::int64_t>(cache.size()) <= delta) {
    if (exhausted_[estimate]) {
      throw UnreachableCondition("(delta, estimate) pair has zero probability");
    }
    Vec2 next = row_times(row_[estimate], chain_.transient);
    const double s = next.sum();
    if (s <= 0.0) {
      exhausted_[estimate] = true;
      continue;
    }
    next.v0 /= s;
    next.v1 /= s;
    row_[estimate] = next;
    cache.push_back(binary_entropy_bits(next.v0));
  }
  return cache[static_cast<std::size_t>(delta)];
}

InterRefreshLaw inter_refresh_law(const TerminatingChain& chain, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const Vec2 z = fundamental_row_sums(chain);
  InterRefreshLaw law;
  for (int xhat : {0, 1}) {
    Vec2 row = basis_row(xhat);
    auto& pmf = law.pmf[xhat];
    double residual = 1.0;
    for (std::int64_t w = 1;; ++w) {
      pmf.push_back(row.v0 * chain.absorption.v0 + row.v1 * chain.absorption.v1);
      row = row_times(row, chain.transient);
      residual = row.sum();
      if (residual < tolerance || w >= kMaxTableRows) break;
    }
    law.tail_mass[xhat] = residual;
    law.mean[xhat] = xhat == 0 ? z.v0 : z.v1;
  }
  return law;
}

AoiLawGivenEstimate aoi_law_given_estimate(const TerminatingChain& chain, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const Vec2 z = fundamental_row_sums(chain);
  AoiLawGivenEstimate law;
  for (int xhat : {0, 1}) {
    const double expected_w = xhat == 0 ? z.v0 : z.v1;
    Vec2 row = basis_row(xhat);
    auto& pmf = law.pmf[xhat];
    double tail = 0.0;
    for (std::int64_t delta = 0;; ++delta) {
      pmf.push_back(row.sum() / expected_w);
      row = row_times(row, chain.transient);
      tail = (row.v0 * z.v0 + row.v1 * z.v1) / expected_w;
      if (tail < tolerance || delta + 1 >= kMaxTableRows) break;
    }
    law.tail_mass[xhat] = tail;
    law.mean_refresh[xhat] = expected_w;
  }
  return law;
}

Vec2 expected_refresh_time(const TerminatingChain& chain) {
  return fundamental_row_sums(chain);
}

EstimateLaw estimate_law(const NetworkConfig& config, const TerminatingChain& chain) {
  const double lbar = mean_access_probability(config.source, config.policy);
  if (!(lbar > 0.0)) {
    throw DegeneratePolicy("estimate law undefined for a never-transmitting policy");
  }
  const double ps = success_probability(config);
  const StationaryLaw pi = stationary(config.source);
  const double c0 = (pi.pi0 * (1.0 - config.source.alpha) * config.policy.l00 +
                     pi.pi1 * config.source.beta * config.policy.l10) *
                    ps / (lbar * ps);
  const double c1 = 1.0 - c0;
  const Vec2 z = fundamental_row_sums(chain);
  const double norm = c0 * z.v0 + c1 * z.v1;
  return {c0 * z.v0 / norm, c1 * z.v1 / norm};
}

JointAoiEstimateLaw joint_law(const NetworkConfig& config, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const TerminatingChain chain = build_chain(config);
  const Vec2 z = fundamental_row_sums(chain);
  const EstimateLaw est = estimate_law(config, chain);
  const std::array<double, 2> weight{est.p0, est.p1};
  const std::array<double, 2> expected_w{z.v0, z.v1};

  JointAoiEstimateLaw law;
  law.estimate = est;
  std::array<Vec2, 2> row{basis_row(0), basis_row(1)};
  std::array<double, 2> tail{0.0, 0.0};
  for (std::int64_t delta = 0;; ++delta) {
    for (int xhat : {0, 1}) {
      const double survival = row[xhat].sum();
      law.probability[xhat].push_back(weight[xhat] * survival / expected_w[xhat]);
      law.entropy[xhat].push_back(
          survival > 0.0 ? clamp_bits(binary_entropy_bits(row[xhat].v0 / survival)) : 0.0);
      row[xhat] = row_times(row[xhat], chain.transient);
      tail[xhat] = weight[xhat] * (row[xhat].v0 * z.v0 + row[xhat].v1 * z.v1) / expected_w[xhat];
    }
    law.delta_max = delta;
    if (tail[0] + tail[1] < tolerance || delta + 1 >= kMaxTableRows) break;
  }
  law.tail_mass = tail[0] + tail[1];
  return law;
}

AverageEntropy average_conditional_entropy(const NetworkConfig& config, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const TerminatingChain chain = build_chain(config);
  const Vec2 z = fundamental_row_sums(chain);
  const EstimateLaw est = estimate_law(config, chain);
  const std::array<double, 2> weight{est.p0, est.p1};
  const std::array<double, 2> expected_w{z.v0, z.v1};

  AverageEntropy out;
  Kahan bits;
  for (int xhat : {0, 1}) {
    if (weight[xhat] <= 0.0) continue;
    // Mass below this cut contributes less than tolerance/2 to the average.
    const double mass_cut = 0.5 * tolerance * expected_w[xhat] / weight[xhat];
    const StreamedEntropy streamed = stream_entropy(chain, z, xhat, mass_cut);
    bits.add(weight[xhat] * streamed.weighted_sum / expected_w[xhat]);
    const double tail = weight[xhat] * streamed.tail_sum / expected_w[xhat];
    out.tail_mass += tail;
    out.error_bound += tail * streamed.h_uncertainty;
  }
  out.bits = clamp_bits(bits.value());
  out.error_bound = std::min(out.error_bound, out.tail_mass);
  return out;
}

EntropyCdf entropy_cdf(const NetworkConfig& config, double tolerance,
                       std::span<const double> thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] < thresholds[i - 1]) {
      throw std::invalid_argument("thresholds must be sorted ascending");
    }
  }
  const JointAoiEstimateLaw law = joint_law(config, tolerance);
  std::vector<std::pair<double, double>> cells;  // (entropy, mass)
  cells.reserve(2 * static_cast<std::size_t>(law.delta_max + 1));
  for (int xhat : {0, 1}) {
    for (std::size_t d = 0; d < law.probability[xhat].size(); ++d) {
      cells.emplace_back(law.entropy[xhat][d], law.probability[xhat][d]);
    }
  }
  std::sort(cells.begin(), cells.end());
  std::vector<double> prefix(cells.size() + 1, 0.0);
  Kahan running;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    running.add(cells[i].second);
    prefix[i + 1] = running.value();
  }
  EntropyCdf cdf;
  cdf.tail_mass = law.tail_mass;
  cdf.value.reserve(thresholds.size());
  for (double zeta : thresholds) {
    const auto it = std::upper_bound(cells.begin(), cells.end(), zeta,
                                     [](double z, const auto& cell) { return z < cell.first; });
    cdf.value.push_back(prefix[static_cast<std::size_t>(it - cells.begin())]);
  }
  return cdf;
}

std::vector<TimelinePoint> entropy_timeline(const NetworkConfig& config,
                                            std::span<const Reception> receptions,
                                            std::int64_t end_slot) {
  if (receptions.empty()) throw std::invalid_argument("at least one reception required");
  for (std::size_t i = 0; i < receptions.size(); ++i) {
    check_estimate(receptions[i].state);
    if (i > 0 && receptions[i].slot <= receptions[i - 1].slot) {
      throw std::invalid_argument("reception slots must be strictly increasing");
    }
  }
  if (end_slot < receptions.front().slot) {
    throw std::invalid_argument("end_slot precedes the first reception");
  }
  const TerminatingChain chain = build_chain(config);
  EntropyCurve curve(chain);
  std::vector<TimelinePoint> series;
  series.reserve(static_cast<std::size_t>(end_slot - receptions.front().slot + 1));
  std::size_t next = 0;
  std::int64_t last_slot = 0;
  int estimate = 0;
  for (std::int64_t slot = receptions.front().slot; slot <= end_slot; ++slot) {
    while (next < receptions.size() && receptions[next].slot == slot) {
      last_slot = receptions[next].slot;
      estimate = receptions[next].state;
      ++next;
    }
    const std::int64_t delta = slot - last_slot;
    series.push_back({slot, delta, estimate, curve.at(delta, estimate)});
  }
  return series;
}

}  // namespace alohamon
