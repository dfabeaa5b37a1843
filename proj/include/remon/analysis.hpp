#pragma once

#include <array>
#include <span>
#include <vector>

#include "remon/model.hpp"
#include "remon/policy.hpp"

namespace remon {

using PairDistribution = std::array<double, 4>;  // indexed by index_of(PairState)

/// Exact distribution of the (X, Y) pair of one source for t = 0..T.
struct PairChainSeries {
  std::vector<PairDistribution> dist;   // size T+1
  std::vector<double> beta;             // Pr(X(t) != Y(t)), size T+1
  std::vector<double> expected_update;  // E[U(t)], size T+1, entry 0 is 0

  int horizon() const { return static_cast<int>(dist.size()) - 1; }
  /// (1/T) * sum_{t=1}^{T} E[U(t)].
  double update_rate() const;
};

/// Starts from the steady state with Y(0) = X(0) and applies the table's
/// decisions slot by slot.
PairChainSeries propagate_pair_chain(const SourceParams& p, const DecisionTable& policy);

std::vector<PairChainSeries> analyze_policy(const SystemConfig& cfg, const TabularPolicy& policy);

/// Sum over sources of their time-averaged update rates.
double total_update_rate(std::span<const PairChainSeries> series);

/// Stationary mismatch probability nu/zeta of the policy that only updates
/// in the persistent mismatch state.
double beta_steady_state_one_sided(const SourceParams& p);

/// rho(t, m) = alpha_m + sum_{n<m} alpha_n beta_n(t). Candidates run over
/// m = 1..N+1; m = N+1 (alpha_{N+1} = 0) is the plain union bound.
struct RhoResult {
  std::vector<double> rho_per_m;  // index m-1, size N+1
  double rho = 0.0;
  int m_star = 0;  // smallest minimizing m
  double lower = 0.0;
  double upper = 0.0;

  /// Sources at or beyond m_star are in the tail error.
  bool in_tail(int n) const { return n >= m_star; }
};

RhoResult rho_at(const AlphaTable& alpha, std::span<const double> betas);

/// (1/T) sum_{t=1}^{T} rho(t) for per-source series of equal horizon.
double approx_objective(const AlphaTable& alpha, std::span<const PairChainSeries> series);

/// c_2 = 4 alpha_2, c_i = 4 alpha_i (1 - alpha_i / c_{i-1}). `alphas` holds
/// alpha_1..alpha_k; the result holds c_2..c_k. Throws std::domain_error when
/// some c_i is not positive.
std::vector<double> concavity_coefficients(std::span<const double> alphas);

/// Closed-form maximum w^2 / c_k of the pairwise-error program for
/// w in [0, alpha_k].
double fk_closed_form(std::span<const double> alphas, double w);

/// Grid maximisation of sum_{i>=2} sum_{j<i} alpha_j b_j b_i subject to
/// sum alpha_i b_i = w, prefix sums in [0, alpha_i] and b_i in [0, 1].
/// Search is over prefix sums with final step `grid_resolution`. Test oracle
/// only; k <= 4.
double fk_numeric_max(std::span<const double> alphas, double w, double grid_resolution);

}  // namespace remon
