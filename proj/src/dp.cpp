#include "remon/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "remon/analysis.hpp"

namespace remon {

TailProfile::TailProfile(double alpha, std::vector<bool> active)
    : alpha_(alpha), active_(std::move(active)) {
  if (!(alpha >= 0.0) || alpha > 1.0) throw std::invalid_argument("tail alpha must be in [0, 1]");
  if (active_.empty()) throw std::invalid_argument("tail profile needs at least one slot");
}

TailProfile TailProfile::monotone(double alpha, int horizon, int last_active) {
  if (horizon < 1 || last_active < 0 || last_active > horizon) {
    throw std::out_of_range("monotone tail needs 0 <= last_active <= horizon");
  }
  std::vector<bool> active(static_cast<std::size_t>(horizon), false);
  std::fill_n(active.begin(), last_active, true);
  return TailProfile(alpha, std::move(active));
}

double TailProfile::at(int t) const {
  if (t < 1 || t > horizon()) throw std::out_of_range("tail slot out of range");
  return active_[static_cast<std::size_t>(t - 1)] ? alpha_ : 0.0;
}

bool TailProfile::is_monotone() const {
  return std::is_sorted(active_.begin(), active_.end(), std::greater<>());
}

namespace {

constexpr int k00 = 0, k01 = 1, k10 = 2, k11 = 3;

void record_gaps(DpTables& tables, const SourceParams& p, std::size_t i) {
  const auto& tau = tables.tau[i];
  tables.delta01[i] = tau[k01] - tau[k00];
  tables.delta10[i] = tau[k10] - tau[k11];
  tables.delta[i] = tables.delta01[i] + tables.delta10[i];
  tables.omega[i] = tables.delta01[i] - p.mu * tables.delta[i];
  tables.upsilon[i] = tables.delta10[i] - p.lambda * tables.delta[i];
}

}  // namespace

DpSolution solve_single_source_dp(const SourceParams& p, double gamma, const TailProfile& tail,
                                  const DpOptions& options) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  const int horizon = tail.horizon();
  const auto len = static_cast<std::size_t>(horizon);

  DpSolution sol;
  DpTables& tb = sol.tables;
  tb.gamma = gamma;
  tb.tau.assign(len, {});
  tb.delta01.assign(len, 0.0);
  tb.delta10.assign(len, 0.0);
  tb.delta.assign(len, 0.0);
  tb.omega.assign(len, 0.0);
  tb.upsilon.assign(len, 0.0);

  const double terminal = options.charge_terminal_mismatch ? tail.at(horizon) : 0.0;
  tb.tau[len - 1] = {0.0, terminal, terminal, 0.0};

  for (int t = horizon; t >= 2; --t) {
    const auto i = static_cast<std::size_t>(t - 1);
    record_gaps(tb, p, i);
    const auto& next = tb.tau[i];
    const double cost = tail.at(t - 1);
    // After an update in 01 (resp. 10) the pair continues like 00 (resp. 11).
    const double from_busy = (1.0 - p.mu) * next[k00] + p.mu * next[k10];
    const double from_free = (1.0 - p.lambda) * next[k11] + p.lambda * next[k01];
    auto& cur = tb.tau[i - 1];
    cur[k00] = from_busy;
    cur[k01] = cost + from_busy + std::min(gamma, tb.omega[i]);
    cur[k10] = cost + from_free + std::min(gamma, tb.upsilon[i]);
    cur[k11] = from_free;
  }
  record_gaps(tb, p, 0);

  sol.policy = DecisionTable(horizon);
  for (int t = 1; t <= horizon; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    sol.policy.set_update(t, PairState::k01, gamma < tb.omega[i]);
    sol.policy.set_update(t, PairState::k10, gamma < tb.upsilon[i]);
  }

  // Y(1) = Y(0) = X(0), X(0) stationary, X(1) one kernel step later.
  const double pi1 = steady_state_free_prob(p);
  const double pi0 = 1.0 - pi1;
  const std::array<double, 4> first{pi0 * (1.0 - p.mu), pi1 * p.lambda, pi0 * p.mu,
                                    pi1 * (1.0 - p.lambda)};
  const auto& tau1 = tb.tau[0];
  sol.value = 0.0;
  for (int s = 0; s < 4; ++s) sol.value += tau1[static_cast<std::size_t>(s)] * first[static_cast<std::size_t>(s)];
  return sol;
}

double single_source_cost(const SourceParams& p, double gamma, const TailProfile& tail,
                          const DecisionTable& policy) {
  if (policy.horizon() != tail.horizon()) throw std::invalid_argument("horizon mismatch");
  const auto chain = propagate_pair_chain(p, policy);
  double cost = 0.0;
  for (int t = 1; t <= tail.horizon(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    cost += tail.at(t) * chain.beta[i] + gamma * chain.expected_update[i];
  }
  return cost;
}

namespace {

PropertyReport violation(std::string property, int t, std::optional<PairState> state,
                         std::string detail) {
  return PropertyReport{false, std::move(property), t, state, std::move(detail)};
}

std::string describe(double lhs, const char* op, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << lhs << ' ' << op << ' ' << rhs;
  return os.str();
}

}  // namespace

PropertyReport check_structural_properties(const SourceParams& p, double gamma,
                                           const TailProfile& tail, const DpSolution& solution) {
  const auto& tb = solution.tables;
  const auto& policy = solution.policy;
  const int horizon = tail.horizon();
  if (policy.horizon() != horizon || static_cast<int>(tb.omega.size()) != horizon) {
    throw std::invalid_argument("solution does not match the tail horizon");
  }

  const double terminal_gap = (1.0 - 2.0 * p.mu) * tail.at(horizon);
  if (std::abs(tb.omega.back() - terminal_gap) > 1e-12) {
    return violation("terminal_gap", horizon, PairState::k01,
                     "omega(T) = " + describe(tb.omega.back(), "!=", terminal_gap));
  }

  const PairState dominant = persistent_state(p);
  const PairState other = dominant == PairState::k01 ? PairState::k10 : PairState::k01;
  const double delta_cap = 2.0 * tail.alpha() / p.zeta() + 1e-9;
  for (int t = 1; t <= horizon; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    if (policy.update(t, other) && !policy.update(t, dominant)) {
      return violation("dominance", t, other, "updates in the minor mismatch state only");
    }
    if (tb.delta[i] > delta_cap) {
      return violation("delta_bound", t, std::nullopt,
                       "Delta = " + describe(tb.delta[i], ">", delta_cap));
    }
    if (!tail.active(t) &&
        (policy.update(t, PairState::k01) || policy.update(t, PairState::k10))) {
      return violation("tail_silence", t,
                       policy.update(t, PairState::k01) ? PairState::k01 : PairState::k10,
                       "update lands in a tail slot");
    }
  }

  if (tail.is_monotone()) {
    for (int t = 1; t < horizon; ++t) {
      if (!tail.active(t)) continue;
      for (PairState s : {PairState::k01, PairState::k10}) {
        if (policy.update(t + 1, s) && !policy.update(t, s)) {
          return violation("persistence", t, s, "updates at t+1 but not at t");
        }
      }
    }
    bool in_prefix = true;
    for (int t = 1; t <= horizon; ++t) {
      const bool both = policy.updates_both(t);
      if (both && !in_prefix) {
        return violation("prefix_threshold", t, std::nullopt,
                         "both-state updates resume after a gap");
      }
      if (!both) in_prefix = false;
    }
  }

  const double attained = single_source_cost(p, gamma, tail, policy);
  if (std::abs(attained - solution.value) > 1e-9) {
    return violation("optimality", 0, std::nullopt,
                     "policy cost " + describe(attained, "!=", solution.value));
  }
  return {};
}

double calibrate_gamma(const SourceParams& p, const TailProfile& tail, double target_rate) {
  if (!(target_rate >= 0.0)) throw std::invalid_argument("target rate must be >= 0");
  if (target_rate > p.change_rate() + 1e-12) {
    throw std::invalid_argument("target rate exceeds the always-update rate");
  }
  auto rate_at = [&](double gamma) {
    return propagate_pair_chain(p, solve_single_source_dp(p, gamma, tail).policy).update_rate();
  };
  if (rate_at(0.0) <= target_rate) return 0.0;
  double lo = 0.0;
  double hi = tail.alpha() * tail.horizon();
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (rate_at(mid) <= target_rate) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

BruteForceResult brute_force_single_source(const SourceParams& p, double gamma,
                                           const TailProfile& tail) {
  const int horizon = tail.horizon();
  if (horizon > 8) throw std::invalid_argument("brute force is limited to horizons <= 8");
  const std::uint32_t count = 1u << (2 * horizon);
  BruteForceResult best{DecisionTable(horizon), std::numeric_limits<double>::infinity()};
  DecisionTable table(horizon);
  for (std::uint32_t code = 0; code < count; ++code) {
    for (int t = 1; t <= horizon; ++t) {
      const auto shift = static_cast<std::uint32_t>(2 * (t - 1));
      table.set_update(t, PairState::k01, ((code >> shift) & 1u) != 0);
      table.set_update(t, PairState::k10, ((code >> (shift + 1)) & 1u) != 0);
    }
    const double cost = single_source_cost(p, gamma, tail, table);
    if (cost < best.value) best = {table, cost};
  }
  return best;
}

}  // namespace remon
