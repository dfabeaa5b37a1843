#include <gtest/gtest.h>

#include <cmath>

#include "remon/model.hpp"
#include "remon/rng.hpp"

using namespace remon;

namespace {

SystemConfig uniform_config(int n, int k, double mu, double lambda) {
  SystemConfig cfg;
  cfg.n_sources = n;
  cfg.k_select = k;
  cfg.horizon = 10;
  cfg.rate_budget = 0.1;
  cfg.sources.assign(static_cast<std::size_t>(n), SourceParams{mu, lambda});
  return cfg;
}

bool mentions(const ConfigError& e, const std::string& text) {
  for (const auto& v : e.violations()) {
    if (v.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(ValidateConfig, AcceptsWellFormedConfig) {
  const auto cfg = uniform_config(3, 1, 0.2, 0.2);
  EXPECT_NO_THROW(validate_config(cfg));
  EXPECT_EQ(&validate_config(cfg), &cfg);
}

TEST(ValidateConfig, RejectsKAboveN) {
  try {
    validate_config(uniform_config(2, 3, 0.2, 0.2));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "k_select exceeds n_sources"));
  }
}

TEST(ValidateConfig, RejectsLargeMuAndListsEveryViolation) {
  auto cfg = uniform_config(2, 1, 0.2, 0.2);
  cfg.sources[0].mu = 0.6;
  cfg.sources[1].lambda = 0.0;
  cfg.horizon = 0;
  try {
    validate_config(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "mu must be < 0.5"));
    EXPECT_TRUE(mentions(e, "sources[2].lambda must be > 0"));
    EXPECT_TRUE(mentions(e, "horizon"));
    EXPECT_EQ(e.violations().size(), 3u);
  }
}

TEST(ValidateConfig, RejectsSourceCountMismatchAndNegativeBudget) {
  auto cfg = uniform_config(2, 1, 0.2, 0.2);
  cfg.sources.pop_back();
  cfg.rate_budget = -1.0;
  EXPECT_THROW(validate_config(cfg), ConfigError);
}

TEST(SourceParams, DerivedQuantities) {
  const SourceParams p{0.1, 0.3};
  EXPECT_DOUBLE_EQ(p.zeta(), 0.4);
  EXPECT_DOUBLE_EQ(p.nu(), 0.1);
  EXPECT_DOUBLE_EQ(p.omega(), 0.3);
  EXPECT_DOUBLE_EQ(p.nu() + p.omega(), p.zeta());
  EXPECT_DOUBLE_EQ(p.change_rate(), 2 * 0.1 * 0.3 / 0.4);
}

TEST(SteadyState, FreeProbability) {
  EXPECT_DOUBLE_EQ(steady_state_free_prob({0.2, 0.2}), 0.5);
  EXPECT_DOUBLE_EQ(steady_state_free_prob({0.1, 0.3}), 0.25);
  EXPECT_DOUBLE_EQ(steady_state_free_prob({0.3, 0.1}), 0.75);
}

TEST(TransitionProb, KernelEntries) {
  const SourceParams p{0.1, 0.3};
  EXPECT_DOUBLE_EQ(transition_prob(p, 1, 0), 0.3);
  EXPECT_DOUBLE_EQ(transition_prob(p, 0, 1), 0.1);
  for (int from : {0, 1}) {
    EXPECT_DOUBLE_EQ(transition_prob(p, from, 0) + transition_prob(p, from, 1), 1.0);
  }
  EXPECT_THROW(transition_prob(p, 2, 0), std::out_of_range);
}

TEST(AlphaTable, FirstEntryIsOneAndSentinelIsZero) {
  const auto alpha = alpha_table(uniform_config(4, 2, 0.1, 0.3));
  EXPECT_EQ(alpha.n_sources(), 4);
  EXPECT_DOUBLE_EQ(alpha[1], 1.0);
  EXPECT_DOUBLE_EQ(alpha[5], 0.0);
  EXPECT_THROW(alpha[0], std::out_of_range);
  EXPECT_THROW(alpha[6], std::out_of_range);
}

TEST(AlphaTable, SingleFairPrefix) {
  auto cfg = uniform_config(2, 1, 0.2, 0.2);
  EXPECT_DOUBLE_EQ(alpha_table(cfg)[2], 0.5);
}

TEST(AlphaTable, TwoSourcePrefixWithKTwo) {
  SystemConfig cfg = uniform_config(3, 2, 0.2, 0.2);
  cfg.sources[0] = {0.1, 0.3};  // p = 0.25
  cfg.sources[1] = {0.2, 0.2};  // p = 0.5
  EXPECT_NEAR(alpha_table(cfg)[3], 1.0 - 0.25 * 0.5, 1e-15);
}

TEST(AlphaTable, MatchesEnumerationAndIsNonIncreasing) {
  Rng rng(derive_seed(11, 0));
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 13);
    const int k = 1 + static_cast<int>(rng.uniform() * n);
    SystemConfig cfg = uniform_config(n, k, 0.2, 0.2);
    for (auto& s : cfg.sources) s = {0.01 + 0.48 * rng.uniform(), 0.01 + 0.48 * rng.uniform()};
    const auto alpha = alpha_table(cfg);
    for (int m = 1; m <= n; ++m) {
      double below = 0.0;
      const int prefix = m - 1;
      for (unsigned mask = 0; mask < (1u << prefix); ++mask) {
        double prob = 1.0;
        int free_count = 0;
        for (int i = 0; i < prefix; ++i) {
          const double p = steady_state_free_prob(cfg.sources[static_cast<std::size_t>(i)]);
          const bool free = (mask >> i) & 1u;
          prob *= free ? p : 1.0 - p;
          free_count += free;
        }
        if (free_count < k) below += prob;
      }
      EXPECT_NEAR(alpha[m], below, 1e-12) << "n=" << n << " k=" << k << " m=" << m;
      if (m > 1) EXPECT_LE(alpha[m], alpha[m - 1] + 1e-15);
      EXPECT_GE(alpha[m], 0.0);
      EXPECT_LE(alpha[m], 1.0 + 1e-15);
    }
  }
}

TEST(Sampling, SameSeedGivesIdenticalTrajectories) {
  const auto cfg = uniform_config(3, 1, 0.1, 0.3);
  const auto a = sample_trajectories(cfg, 5, 0xabc);
  const auto b = sample_trajectories(cfg, 5, 0xabc);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].availability, b[i].availability);
  EXPECT_NE(a[0].availability, sample_trajectories(cfg, 1, 0xabd)[0].availability);
  EXPECT_EQ(a[3].availability, sample_trajectory(cfg, derive_seed(0xabc, 3)).availability);
}

TEST(Sampling, InitialStateAndFlipFrequency) {
  auto cfg = uniform_config(1, 1, 0.1, 0.3);
  cfg.horizon = 1;
  constexpr int kDraws = 100000;
  const auto trs = sample_trajectories(cfg, kDraws, 0x5eed);
  int free0 = 0;
  int from_free = 0;
  int flips = 0;
  for (const auto& tr : trs) {
    free0 += tr.at(0, 1);
    if (tr.at(0, 1) == 1) {
      ++from_free;
      flips += tr.at(1, 1) == 0;
    }
  }
  const double p = 0.25;
  EXPECT_LE(std::abs(free0 / double(kDraws) - p), 3 * std::sqrt(p * (1 - p) / kDraws));
  const double lam = 0.3;
  EXPECT_LE(std::abs(flips / double(from_free) - lam), 3 * std::sqrt(lam * (1 - lam) / from_free));
}

TEST(Sampling, LongChainStationaryFraction) {
  for (const SourceParams p : {SourceParams{0.05, 0.2}, SourceParams{0.3, 0.1}}) {
    SystemConfig cfg = uniform_config(1, 1, p.mu, p.lambda);
    cfg.horizon = 100000;
    const auto tr = sample_trajectory(cfg, 0x77);
    double free = 0;
    for (int t = 1; t <= cfg.horizon; ++t) free += tr.at(t, 1);
    const double pi = steady_state_free_prob(p);
    // Lag-one correlation 1 - zeta inflates the variance of the time average.
    const double rho = 1.0 - p.zeta();
    const double se = std::sqrt(pi * (1 - pi) / cfg.horizon * (1 + rho) / (1 - rho));
    EXPECT_LE(std::abs(free / cfg.horizon - pi), 3 * se);
  }
}

TEST(PairState, Encoding) {
  EXPECT_EQ(make_pair_state(1, 0), PairState::k10);
  EXPECT_EQ(x_of(PairState::k01), 0);
  EXPECT_EQ(y_of(PairState::k01), 1);
  EXPECT_TRUE(is_mismatch(PairState::k10));
  EXPECT_FALSE(is_mismatch(PairState::k11));
  EXPECT_EQ(to_string(PairState::k10), "10");
}
