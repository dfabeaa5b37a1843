#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "remon/analysis.hpp"
#include "remon/model.hpp"
#include "remon/policy.hpp"

namespace remon {

/// V: the smallest n whose prefix x_1..x_n holds K free sources, else N.
int decision_prefix_length(std::span<const std::uint8_t> x, int k);

/// 1-based indices of the first K free sources (fewer if not enough are free).
std::vector<int> top_k_free(std::span<const std::uint8_t> x, int k);

/// True when x and y differ anywhere in positions 1..V. Positions past V
/// never count, busy positions inside the prefix do.
bool top_k_error_at(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y, int k);

struct EpisodeResult {
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> per_t_error;  // index t-1, t = 1..T
  int update_count = 0;
  std::vector<std::uint8_t> pair_states;  // (T+1) x N row-major, index_of(PairState)
  std::vector<std::uint8_t> updates;      // T x N row-major, row t-1
};

/// X follows sample_trajectory(cfg, seed); the policy only drives Y.
EpisodeResult run_episode(const SystemConfig& cfg, const TabularPolicy& policy,
                          std::uint64_t seed);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

struct McEstimate {
  Estimate error_prob;   // time-averaged top-K error
  Estimate update_rate;  // (1/T) sum_t sum_n U_n(t)
  std::vector<double> per_t_error_freq;  // index t-1
  int trials = 0;
  /// Per source (index n-1), per t = 0..T: empirical pair-state frequencies.
  std::vector<std::vector<PairDistribution>> pair_state_freq;
  /// Per source, per t = 0..T (entry 0 is 0): empirical update frequency.
  std::vector<std::vector<double>> update_freq;

  /// Standard error of a per-t frequency with success probability p.
  double frequency_se(double p) const;
};

/// Episode i uses seed derive_seed(seed, i). Work is split across `workers`
/// threads (0 picks the hardware count); results do not depend on it.
McEstimate monte_carlo(const SystemConfig& cfg, const TabularPolicy& policy, int trials,
                       std::uint64_t seed, int workers = 1);

struct JointEvaluation {
  std::vector<double> error_at;         // Pr(top-K error at t), t = 0..T, entry 0 is 0
  std::vector<double> expected_update;  // sum_n E[U_n(t)], t = 0..T
  double error_prob = 0.0;              // (1/T) sum_{t>=1} error_at
  double update_rate = 0.0;
};

/// Propagates the exact distribution over all 4^N joint pair states.
/// N <= 4 and T <= 12.
JointEvaluation exact_joint_evaluation(const SystemConfig& cfg, const TabularPolicy& policy);

}  // namespace remon
