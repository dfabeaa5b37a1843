#pragma once

#include <span>
#include <vector>

#include "remon/model.hpp"
#include "remon/policy.hpp"

namespace remon {

/// Rate-constrained switch-time allocation across sources. Source indices in
/// the sets are 1-based.
struct KktSolution {
  double rate = 0.0;       // budget the solution was computed for
  double full_rate = 0.0;  // sum of 2 mu lambda / zeta
  double theta = 0.0;
  std::vector<int> set_a;    // sources that update on both states for the whole horizon
  std::vector<int> set_b;    // set_a plus the sources that time-share up to T'
  std::vector<int> n_tilde;  // minimisers of tau(theta, m) over m = 1..N+1
  std::vector<double> tau_of_m;  // index m-1, size N+1
  double t_prime = 0.0;
  std::vector<int> switch_times;   // T_n, index n-1
  std::vector<double> breakpoints;  // index n-1
};

/// A point of the relaxed allocation program: s_n slots updating on both
/// mismatch states, then z_n slots on the persistent state only.
struct LpPoint {
  std::vector<double> s;
  std::vector<double> z;
  double objective = 0.0;
};

struct KktOptions {
  /// Shifts the alpha index of the leading tau(theta, m) term. Non-zero only
  /// for fault injection in the verifier.
  int tau_leading_offset = 0;
};

/// Relaxed error contribution of source n (1-based):
/// alpha_n (nu/zeta)(2 omega s_n + z_n) + alpha_n (d_{n-1} - d_n), d = s + z,
/// d_0 = T.
double epsilon_n(const SystemConfig& cfg, const AlphaTable& alpha, int n, std::span<const double> s,
                 std::span<const double> z);

double lp_objective(const SystemConfig& cfg, const AlphaTable& alpha, std::span<const double> s,
                    std::span<const double> z);

/// alpha_n (1 / (2 omega_n) - 1) per source.
std::vector<double> compute_breakpoints(const SystemConfig& cfg, const AlphaTable& alpha);

double full_update_rate(const SystemConfig& cfg);

/// Largest candidate theta for which sum_A g <= r <= sum_B g, g = 2 mu lambda
/// / zeta. Throws when r is negative or exceeds the full rate.
double solve_theta(const SystemConfig& cfg, const AlphaTable& alpha, double r,
                   const KktOptions& options = {});

/// Full switch-time recipe. r above the full rate yields T_n = T everywhere.
KktSolution compute_Tn(const SystemConfig& cfg, const AlphaTable& alpha, double r,
                       const KktOptions& options = {});

/// Maps a solution onto (s, z) using the unrounded T'. The rate equality
/// sum g s = T min(r, full) holds up to rounding.
LpPoint embed_solution(const SystemConfig& cfg, const AlphaTable& alpha, const KktSolution& sol);

ThreeStageSpec to_three_stage_spec(const SystemConfig& cfg, const KktSolution& sol);

/// Exact minimiser of the allocation program by enumerating basic feasible
/// solutions. Test oracle; N <= 6.
LpPoint lp_oracle(const SystemConfig& cfg, const AlphaTable& alpha, double r);

}  // namespace remon
