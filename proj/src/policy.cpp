#include "remon/policy.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace remon {

DecisionTable::DecisionTable(int horizon) : horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("decision table horizon must be >= 1");
  bits_.assign(static_cast<std::size_t>(horizon), 0);
}

std::size_t DecisionTable::slot(int t) const {
  if (t < 1 || t > horizon_) {
    throw std::out_of_range("slot " + std::to_string(t) + " outside 1.." +
                            std::to_string(horizon_));
  }
  return static_cast<std::size_t>(t - 1);
}

bool DecisionTable::update(int t, PairState s) const {
  const auto i = slot(t);
  switch (s) {
    case PairState::k01: return (bits_[i] & 1u) != 0;
    case PairState::k10: return (bits_[i] & 2u) != 0;
    default: return false;
  }
}

void DecisionTable::set_update(int t, PairState s, bool value) {
  const auto i = slot(t);
  if (!is_mismatch(s)) {
    if (value) throw std::invalid_argument("matched states never update");
    return;
  }
  const std::uint8_t mask = s == PairState::k01 ? 1u : 2u;
  bits_[i] = static_cast<std::uint8_t>(value ? (bits_[i] | mask) : (bits_[i] & ~mask));
}

TabularPolicy::TabularPolicy(int n_sources, int horizon) : horizon_(horizon) {
  if (n_sources < 1) throw std::invalid_argument("policy needs at least one source");
  tables_.assign(static_cast<std::size_t>(n_sources), DecisionTable(horizon));
}

const DecisionTable& TabularPolicy::source(int n) const {
  if (n < 1 || n > n_sources()) {
    throw std::out_of_range("source index " + std::to_string(n) + " outside 1.." +
                            std::to_string(n_sources()));
  }
  return tables_[static_cast<std::size_t>(n - 1)];
}

DecisionTable& TabularPolicy::source(int n) {
  return const_cast<DecisionTable&>(std::as_const(*this).source(n));
}

bool TabularPolicy::decide(int n, int t, int x, int y) const {
  if ((x != 0 && x != 1) || (y != 0 && y != 1)) {
    throw std::out_of_range("pair values must be bits");
  }
  return source(n).update(t, make_pair_state(x, y));
}

PairState persistent_state(const SourceParams& p) {
  return p.lambda >= p.mu ? PairState::k01 : PairState::k10;
}

ThreeStageSpec make_three_stage_spec(const SystemConfig& cfg, std::vector<int> switch_times) {
  ThreeStageSpec spec;
  spec.switch_times = std::move(switch_times);
  for (const auto& src : cfg.sources) spec.persistent_states.push_back(persistent_state(src));
  return spec;
}

TabularPolicy compile_three_stage(const SystemConfig& cfg, const ThreeStageSpec& spec) {
  validate_config(cfg);
  const auto n = static_cast<std::size_t>(cfg.n_sources);
  if (spec.switch_times.size() != n || spec.persistent_states.size() != n) {
    throw std::invalid_argument("three-stage spec must list one entry per source");
  }
  TabularPolicy policy(cfg.n_sources, cfg.horizon);
  for (int src = 1; src <= cfg.n_sources; ++src) {
    const int switch_time = spec.switch_times[static_cast<std::size_t>(src - 1)];
    const PairState keep = spec.persistent_states[static_cast<std::size_t>(src - 1)];
    if (switch_time < 0 || switch_time > cfg.horizon) {
      throw std::out_of_range("switch time of source " + std::to_string(src) + " is " +
                              std::to_string(switch_time) + ", outside 0.." +
                              std::to_string(cfg.horizon));
    }
    if (keep != persistent_state(cfg.source(src))) {
      throw std::invalid_argument("persistent state of source " + std::to_string(src) +
                                  " does not match its parameters");
    }
    auto& table = policy.source(src);
    for (int t = 1; t <= cfg.horizon; ++t) {
      const bool both = t <= switch_time;
      table.set_update(t, PairState::k01, both || keep == PairState::k01);
      table.set_update(t, PairState::k10, both || keep == PairState::k10);
    }
  }
  return policy;
}

TabularPolicy always_update_policy(const SystemConfig& cfg) {
  validate_config(cfg);
  TabularPolicy policy(cfg.n_sources, cfg.horizon);
  for (int src = 1; src <= cfg.n_sources; ++src) {
    for (int t = 1; t <= cfg.horizon; ++t) {
      policy.source(src).set_update(t, PairState::k01, true);
      policy.source(src).set_update(t, PairState::k10, true);
    }
  }
  return policy;
}

TabularPolicy never_update_policy(const SystemConfig& cfg) {
  validate_config(cfg);
  return TabularPolicy(cfg.n_sources, cfg.horizon);
}

}  // namespace remon
