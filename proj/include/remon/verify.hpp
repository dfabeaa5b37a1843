#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "remon/dp.hpp"
#include "remon/io.hpp"
#include "remon/kkt.hpp"

namespace remon {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string summary;
  std::string witness;  // first failing instance, empty on success
  double seconds = 0.0;
};

/// Instance counts for the randomized checks. Defaults are the full suite.
struct VerifySizes {
  int sandwich_instances = 100;
  int chain_instances = 20;
  int chain_trials = 100000;
  int pairwise_draws = 50;
  int dp_brute_instances = 200;
  int dp_structure_instances = 1000;
  int lp_instances = 100;
  int rate_instances = 20;
  int sweep_instances = 5;
};

struct VerifyOptions {
  std::uint64_t seed = 0x5eedULL;
  VerifySizes sizes;
  KktOptions kkt;  // fault injection for the allocation check
  DpOptions dp;    // fault injection for the dp checks
  int workers = 1;
};

/// Exact joint error probability within [rho/4, rho] (+-1e-9) at every slot
/// for random switch-time policies with N <= 4, K <= 2, T <= 12.
CheckResult check_error_sandwich(int instances, std::uint64_t seed);

/// Simulated pair-state and update frequencies within 3 standard errors of
/// the pair chain, plus the always-update identities to 1e-12.
CheckResult check_pair_chain(int instances, int trials, std::uint64_t seed, int workers = 1);

/// Closed-form pairwise bound against the grid maximum (1e-4 at grid 1e-3)
/// for k = 2, 3, 4; both at most w/2.
CheckResult check_pairwise_bound(int draws, std::uint64_t seed);

/// DP value equals exhaustive search (1e-9) for T <= 6 and the extracted
/// table attains it.
CheckResult check_dp_optimality(int instances, std::uint64_t seed, const DpOptions& options = {});

/// Structural properties of DP solutions on monotone tails, T in [4, 50],
/// mu and lambda in (0.01, 0.49), gamma in [0, 2 alpha].
CheckResult check_dp_structure(int instances, std::uint64_t seed, const DpOptions& options = {});

/// Switch-time allocation against the vertex-enumeration optimum (1e-6 T)
/// with the rate equality to 1e-9, T = 1000, N <= 6.
CheckResult check_allocation_vs_lp(int instances, std::uint64_t seed, const KktOptions& options = {});

/// Compiled switch-time policy rate <= r + 2 N / T for T in {100, 1000, 10000}.
CheckResult check_rate_contract(int instances, std::uint64_t seed);

/// The six-source K = 3 selection example.
CheckResult check_top_k_example();

/// Ten-point sweep: objective non-increasing in r, equal to always-update at
/// the full rate and to never-update at 0 (1e-9).
CheckResult check_sweep_sanity(int instances, std::uint64_t seed);

/// All nine checks in a fixed order.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

Json verdict_to_json(const std::vector<CheckResult>& results);

}  // namespace remon
