#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "remon/model.hpp"
#include "remon/policy.hpp"

namespace remon {

/// Per-slot error weight alpha*(t) of one source: alpha outside the tail,
/// 0 inside it.
class TailProfile {
 public:
  TailProfile(double alpha, std::vector<bool> active);

  /// alpha for t <= last_active, 0 afterwards.
  static TailProfile monotone(double alpha, int horizon, int last_active);

  double alpha() const { return alpha_; }
  int horizon() const { return static_cast<int>(active_.size()); }
  /// 1-based.
  double at(int t) const;
  bool active(int t) const { return at(t) != 0.0; }
  /// Active on a prefix of slots and silent afterwards.
  bool is_monotone() const;

 private:
  double alpha_;
  std::vector<bool> active_;
};

/// Backward-recursion values. Vectors are indexed by t-1 for t = 1..T.
/// tau[t-1][s] is the expected cost from slot t on, given pair state s at t.
/// omega(t) / upsilon(t) are the update gaps for states 01 / 10 that decide
/// U(t).
struct DpTables {
  double gamma = 0.0;
  std::vector<std::array<double, 4>> tau;
  std::vector<double> delta01;
  std::vector<double> delta10;
  std::vector<double> delta;
  std::vector<double> omega;
  std::vector<double> upsilon;
};

struct DpSolution {
  DpTables tables;
  DecisionTable policy;
  double value = 0.0;
};

struct DpOptions {
  /// Charge alpha*(T) to mismatch states at the final slot. Turned off only
  /// to inject a known-bad terminal condition when exercising the verifier.
  bool charge_terminal_mismatch = true;
};

/// Minimises sum_t alpha*(t) beta(t) + gamma E[U(t)] for a single source.
/// Updates in 01 at slot t iff gamma < omega(t) (strict), likewise 10 with
/// upsilon(t); matched states never update.
DpSolution solve_single_source_dp(const SourceParams& p, double gamma, const TailProfile& tail,
                                  const DpOptions& options = {});

/// Exact Lagrangian cost of an arbitrary table, via the pair chain.
double single_source_cost(const SourceParams& p, double gamma, const TailProfile& tail,
                          const DecisionTable& policy);

struct PropertyReport {
  bool ok = true;
  std::string property;  // name of the first violated property
  int t = 0;
  std::optional<PairState> state;
  std::string detail;
};

/// Checks, in order: terminal gap omega(T) = (1 - 2 mu) alpha*(T); dominance
/// of the persistent mismatch state; Delta(t) <= 2 alpha / zeta; silence when
/// alpha*(t) = 0; persistence and prefix structure of both-state updates
/// (monotone tails only); and that `solution.policy` attains
/// `solution.value`.
PropertyReport check_structural_properties(const SourceParams& p, double gamma,
                                           const TailProfile& tail, const DpSolution& solution);

/// Smallest gamma (up to bisection tolerance) whose optimal policy's
/// time-averaged update rate does not exceed target_rate. The rate is a step
/// function of gamma, so the target is usually not hit exactly.
double calibrate_gamma(const SourceParams& p, const TailProfile& tail, double target_rate);

struct BruteForceResult {
  DecisionTable policy;
  double value = 0.0;
};

/// Exhaustive search over all 4^T mismatch-state tables. T <= 8.
BruteForceResult brute_force_single_source(const SourceParams& p, double gamma,
                                           const TailProfile& tail);

}  // namespace remon
