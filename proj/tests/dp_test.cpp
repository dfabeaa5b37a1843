#include <gtest/gtest.h>

#include <cmath>

#include "remon/analysis.hpp"
#include "remon/dp.hpp"
#include "remon/rng.hpp"

using namespace remon;

namespace {

DecisionTable always_table(int horizon) {
  DecisionTable table(horizon);
  for (int t = 1; t <= horizon; ++t) {
    table.set_update(t, PairState::k01, true);
    table.set_update(t, PairState::k10, true);
  }
  return table;
}

double update_rate(const SourceParams& p, const DecisionTable& table) {
  return propagate_pair_chain(p, table).update_rate();
}

}  // namespace

TEST(TailProfile, MonotoneShape) {
  const auto tail = TailProfile::monotone(0.7, 5, 3);
  EXPECT_EQ(tail.horizon(), 5);
  EXPECT_DOUBLE_EQ(tail.at(3), 0.7);
  EXPECT_EQ(tail.at(4), 0.0);
  EXPECT_TRUE(tail.is_monotone());
  EXPECT_FALSE(TailProfile(0.7, {true, false, true}).is_monotone());
  EXPECT_THROW(tail.at(6), std::out_of_range);
  EXPECT_THROW(TailProfile::monotone(0.7, 5, 6), std::out_of_range);
  EXPECT_THROW(TailProfile(1.5, {true}), std::invalid_argument);
}

TEST(SingleSourceDp, ZeroGammaMatchesAlwaysUpdate) {
  const SourceParams p{0.15, 0.35};
  const auto tail = TailProfile::monotone(0.8, 6, 6);
  const auto sol = solve_single_source_dp(p, 0.0, tail);
  const double always = single_source_cost(p, 0.0, tail, always_table(6));
  EXPECT_NEAR(always, 0.8 * 6 * p.change_rate(), 1e-12);
  EXPECT_NEAR(sol.value, always, 1e-12);
  EXPECT_NEAR(brute_force_single_source(p, 0.0, tail).value, always, 1e-12);
  for (int t = 2; t <= 6; ++t) {
    EXPECT_EQ(sol.policy.update(t, PairState::k01), sol.tables.omega[static_cast<std::size_t>(t - 1)] > 0);
    EXPECT_EQ(sol.policy.update(t, PairState::k10), sol.tables.upsilon[static_cast<std::size_t>(t - 1)] > 0);
  }
  // With lambda >= mu the persistent state updates on every live slot.
  for (int t = 2; t <= 6; ++t) EXPECT_TRUE(sol.policy.update(t, PairState::k01));
}

TEST(SingleSourceDp, LargeGammaNeverUpdates) {
  const SourceParams p{0.2, 0.45};
  const auto tail = TailProfile::monotone(0.6, 30, 30);
  const auto sol = solve_single_source_dp(p, 0.6 * 30, tail);
  for (int t = 1; t <= 30; ++t) {
    EXPECT_FALSE(sol.policy.update(t, PairState::k01));
    EXPECT_FALSE(sol.policy.update(t, PairState::k10));
  }
  EXPECT_NEAR(sol.value, single_source_cost(p, 0.0, tail, DecisionTable(30)), 1e-10);
}

TEST(SingleSourceDp, SilentTailCostsNothing) {
  const SourceParams p{0.3, 0.1};
  const auto sol = solve_single_source_dp(p, 0.05, TailProfile::monotone(0.9, 12, 0));
  EXPECT_EQ(sol.value, 0.0);
  EXPECT_EQ(sol.policy, DecisionTable(12));
  EXPECT_EQ(brute_force_single_source(p, 0.05, TailProfile::monotone(0.9, 5, 0)).value, 0.0);
}

TEST(SingleSourceDp, TerminalGap) {
  const SourceParams p{0.2, 0.3};
  const auto sol = solve_single_source_dp(p, 0.1, TailProfile::monotone(0.5, 8, 8));
  EXPECT_DOUBLE_EQ(sol.tables.omega.back(), (1 - 2 * p.mu) * 0.5);
  EXPECT_DOUBLE_EQ(sol.tables.upsilon.back(), (1 - 2 * p.lambda) * 0.5);
}

TEST(SingleSourceDp, SymmetricSourceUpdatesBothStatesAlike) {
  Rng rng(derive_seed(21, 0));
  for (int trial = 0; trial < 50; ++trial) {
    const double m = 0.01 + 0.48 * rng.uniform();
    const SourceParams p{m, m};
    const int horizon = 4 + static_cast<int>(rng.uniform() * 30);
    const auto tail = TailProfile::monotone(rng.uniform(), horizon, static_cast<int>(rng.uniform() * horizon));
    const auto sol = solve_single_source_dp(p, 2 * tail.alpha() * rng.uniform(), tail);
    for (int t = 1; t <= horizon; ++t) {
      EXPECT_EQ(sol.policy.update(t, PairState::k01), sol.policy.update(t, PairState::k10));
    }
  }
}

TEST(SingleSourceDp, MatchesBruteForceOnSmallHorizons) {
  Rng rng(derive_seed(22, 0));
  for (int trial = 0; trial < 40; ++trial) {
    const SourceParams p{0.05 + 0.4 * rng.uniform(), 0.05 + 0.4 * rng.uniform()};
    const int horizon = 1 + static_cast<int>(rng.uniform() * 5);
    std::vector<bool> active(static_cast<std::size_t>(horizon));
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = rng.bernoulli(0.7);
    const TailProfile tail(rng.uniform(), active);
    const double gamma = 2 * tail.alpha() / p.zeta() * rng.uniform();
    const auto sol = solve_single_source_dp(p, gamma, tail);
    const auto brute = brute_force_single_source(p, gamma, tail);
    EXPECT_NEAR(sol.value, brute.value, 1e-9);
    EXPECT_NEAR(single_source_cost(p, gamma, tail, sol.policy), brute.value, 1e-9);
  }
}

TEST(StructuralProperties, HoldOnRandomMonotoneTails) {
  Rng rng(derive_seed(23, 0));
  for (int trial = 0; trial < 200; ++trial) {
    const SourceParams p{0.01 + 0.48 * rng.uniform(), 0.01 + 0.48 * rng.uniform()};
    const int horizon = 4 + static_cast<int>(rng.uniform() * 47);
    const auto tail = TailProfile::monotone(rng.uniform(), horizon, static_cast<int>(rng.uniform() * (horizon + 1)));
    const double gamma = 2 * tail.alpha() * rng.uniform();
    const auto report = check_structural_properties(p, gamma, tail, solve_single_source_dp(p, gamma, tail));
    EXPECT_TRUE(report.ok) << report.property << " at t=" << report.t << ": " << report.detail;
  }
}

TEST(StructuralProperties, FlippedDecisionIsDetected) {
  const SourceParams p{0.12, 0.31};
  const auto tail = TailProfile::monotone(0.9, 10, 7);
  const double gamma = 0.3;
  const auto sol = solve_single_source_dp(p, gamma, tail);
  int detected = 0;
  for (int t = 2; t <= 10; ++t) {
    for (PairState s : {PairState::k01, PairState::k10}) {
      DpSolution bad = sol;
      bad.policy.set_update(t, s, !sol.policy.update(t, s));
      if (std::abs(single_source_cost(p, gamma, tail, bad.policy) - sol.value) <= 1e-9) continue;
      const auto report = check_structural_properties(p, gamma, tail, bad);
      EXPECT_FALSE(report.ok) << "flip at t=" << t;
      ++detected;
    }
  }
  EXPECT_GT(detected, 0);
}

TEST(StructuralProperties, BadTerminalConditionIsReported) {
  const SourceParams p{0.2, 0.3};
  const auto tail = TailProfile::monotone(0.5, 8, 8);
  const auto sol = solve_single_source_dp(p, 0.1, tail, DpOptions{false});
  const auto report = check_structural_properties(p, 0.1, tail, sol);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.property, "terminal_gap");
}

TEST(CalibrateGamma, ZeroTargetGivesNeverUpdate) {
  const SourceParams p{0.1, 0.3};
  const auto tail = TailProfile::monotone(1.0, 20, 20);
  const double gamma = calibrate_gamma(p, tail, 0.0);
  EXPECT_EQ(update_rate(p, solve_single_source_dp(p, gamma, tail).policy), 0.0);
}

TEST(CalibrateGamma, FullTargetGivesAlwaysUpdate) {
  const SourceParams p{0.1, 0.3};
  const auto tail = TailProfile::monotone(1.0, 20, 20);
  const double gamma = calibrate_gamma(p, tail, p.change_rate());
  EXPECT_EQ(gamma, 0.0);
  const auto policy = solve_single_source_dp(p, gamma, tail).policy;
  EXPECT_NEAR(update_rate(p, policy), update_rate(p, always_table(20)), 1e-12);
  EXPECT_THROW(calibrate_gamma(p, tail, p.change_rate() + 1e-6), std::invalid_argument);
  EXPECT_THROW(calibrate_gamma(p, tail, -0.1), std::invalid_argument);
}

TEST(CalibrateGamma, MidTargetSitsOnTheStepBelow) {
  const SourceParams p{0.15, 0.25};
  const auto tail = TailProfile::monotone(0.8, 12, 12);
  for (double fraction : {0.2, 0.5, 0.8}) {
    const double target = fraction * p.change_rate();
    const double gamma = calibrate_gamma(p, tail, target);
    ASSERT_GT(gamma, 0.0);
    EXPECT_LE(update_rate(p, solve_single_source_dp(p, gamma, tail).policy), target);
    const double below = gamma - 1e-12 * std::max(1.0, gamma);
    EXPECT_GT(update_rate(p, solve_single_source_dp(p, below, tail).policy), target);
  }
}

TEST(BruteForce, RejectsLongHorizons) {
  EXPECT_THROW(brute_force_single_source({0.1, 0.2}, 0.0, TailProfile::monotone(1, 9, 9)),
               std::invalid_argument);
  EXPECT_THROW(solve_single_source_dp({0.1, 0.2}, -1.0, TailProfile::monotone(1, 3, 3)),
               std::invalid_argument);
}
