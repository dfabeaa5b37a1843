#include "remon/analysis.hpp"

#include <stdexcept>
#include <string>

namespace remon {

double PairChainSeries::update_rate() const {
  const int horizon_len = horizon();
  if (horizon_len < 1) return 0.0;
  double total = 0.0;
  for (int t = 1; t <= horizon_len; ++t) total += expected_update[static_cast<std::size_t>(t)];
  return total / horizon_len;
}

PairChainSeries propagate_pair_chain(const SourceParams& p, const DecisionTable& policy) {
  const int horizon = policy.horizon();
  PairChainSeries out;
  out.dist.resize(static_cast<std::size_t>(horizon) + 1);
  out.beta.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  out.expected_update.assign(static_cast<std::size_t>(horizon) + 1, 0.0);

  const double free_prob = steady_state_free_prob(p);
  out.dist[0] = {1.0 - free_prob, 0.0, 0.0, free_prob};

  for (int t = 1; t <= horizon; ++t) {
    const PairDistribution& prev = out.dist[static_cast<std::size_t>(t - 1)];
    PairDistribution next{};
    double updates = 0.0;
    for (int s = 0; s < 4; ++s) {
      const auto state = static_cast<PairState>(s);
      const double mass = prev[static_cast<std::size_t>(s)];
      if (mass == 0.0) continue;
      const int x = x_of(state);
      const bool u = policy.update(t, state);
      if (u) updates += mass;
      const int y = u ? x : y_of(state);
      const double to_free = transition_prob(p, x, 1);
      next[static_cast<std::size_t>(index_of(make_pair_state(1, y)))] += mass * to_free;
      next[static_cast<std::size_t>(index_of(make_pair_state(0, y)))] += mass * (1.0 - to_free);
    }
    out.dist[static_cast<std::size_t>(t)] = next;
    out.beta[static_cast<std::size_t>(t)] = next[1] + next[2];
    out.expected_update[static_cast<std::size_t>(t)] = updates;
  }
  out.beta[0] = out.dist[0][1] + out.dist[0][2];
  return out;
}

std::vector<PairChainSeries> analyze_policy(const SystemConfig& cfg, const TabularPolicy& policy) {
  validate_config(cfg);
  if (policy.n_sources() != cfg.n_sources || policy.horizon() != cfg.horizon) {
    throw std::invalid_argument("policy shape does not match the config");
  }
  std::vector<PairChainSeries> out;
  out.reserve(static_cast<std::size_t>(cfg.n_sources));
  for (int n = 1; n <= cfg.n_sources; ++n) {
    out.push_back(propagate_pair_chain(cfg.source(n), policy.source(n)));
  }
  return out;
}

double total_update_rate(std::span<const PairChainSeries> series) {
  double total = 0.0;
  for (const auto& s : series) total += s.update_rate();
  return total;
}

double beta_steady_state_one_sided(const SourceParams& p) { return p.nu() / p.zeta(); }

RhoResult rho_at(const AlphaTable& alpha, std::span<const double> betas) {
  const int n_sources = alpha.n_sources();
  if (static_cast<int>(betas.size()) != n_sources) {
    throw std::invalid_argument("expected " + std::to_string(n_sources) + " betas, got " +
                                std::to_string(betas.size()));
  }
  RhoResult r;
  r.rho_per_m.reserve(static_cast<std::size_t>(n_sources) + 1);
  double prefix = 0.0;
  for (int m = 1; m <= n_sources + 1; ++m) {
    r.rho_per_m.push_back(alpha[m] + prefix);
    if (m <= n_sources) prefix += alpha[m] * betas[static_cast<std::size_t>(m - 1)];
  }
  r.m_star = 1;
  r.rho = r.rho_per_m[0];
  for (int m = 2; m <= n_sources + 1; ++m) {
    if (r.rho_per_m[static_cast<std::size_t>(m - 1)] < r.rho) {
      r.rho = r.rho_per_m[static_cast<std::size_t>(m - 1)];
      r.m_star = m;
    }
  }
  r.upper = r.rho;
  r.lower = r.rho / 4.0;
  return r;
}

double approx_objective(const AlphaTable& alpha, std::span<const PairChainSeries> series) {
  if (static_cast<int>(series.size()) != alpha.n_sources() || series.empty()) {
    throw std::invalid_argument("need one pair-chain series per source");
  }
  const int horizon = series.front().horizon();
  std::vector<double> betas(series.size());
  double total = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    for (std::size_t n = 0; n < series.size(); ++n) {
      if (series[n].horizon() != horizon) throw std::invalid_argument("series horizons differ");
      betas[n] = series[n].beta[static_cast<std::size_t>(t)];
    }
    total += rho_at(alpha, betas).rho;
  }
  return total / horizon;
}

}  // namespace remon
