#pragma once

#include <cstdint>
#include <vector>

#include "remon/model.hpp"

namespace remon {

/// Update decisions of one source. Entry (t, s) is U(t) given that the pair
/// (X, Y) observed at slot t-1 is s; when U(t) = 1 the monitor becomes
/// Y(t) = X(t-1). Matched states never update.
class DecisionTable {
 public:
  DecisionTable() = default;
  explicit DecisionTable(int horizon);

  int horizon() const { return horizon_; }
  /// 1 <= t <= horizon.
  bool update(int t, PairState s) const;
  /// Throws std::invalid_argument when asked to update in a matched state.
  void set_update(int t, PairState s, bool value);
  /// True when both mismatch states update at t.
  bool updates_both(int t) const { return update(t, PairState::k01) && update(t, PairState::k10); }

  friend bool operator==(const DecisionTable&, const DecisionTable&) = default;

 private:
  std::size_t slot(int t) const;

  int horizon_ = 0;
  // bit 0: update in 01, bit 1: update in 10
  std::vector<std::uint8_t> bits_;
};

class TabularPolicy {
 public:
  TabularPolicy() = default;
  /// Never-update policy of the given shape.
  TabularPolicy(int n_sources, int horizon);

  int n_sources() const { return static_cast<int>(tables_.size()); }
  int horizon() const { return horizon_; }

  const DecisionTable& source(int n) const;
  DecisionTable& source(int n);

  /// Pure lookup of U_n(t) given (X_n(t-1), Y_n(t-1)) = (x, y).
  bool decide(int n, int t, int x, int y) const;

  friend bool operator==(const TabularPolicy&, const TabularPolicy&) = default;

 private:
  int horizon_ = 0;
  std::vector<DecisionTable> tables_;
};

/// Mismatch state in which updates continue after the switch time:
/// (0,1) when lambda >= mu, otherwise (1,0).
PairState persistent_state(const SourceParams& p);

struct ThreeStageSpec {
  std::vector<int> switch_times;            // T_n in 0..T, index n-1
  std::vector<PairState> persistent_states;  // index n-1
};

/// Spec whose persistent states follow the source parameters.
ThreeStageSpec make_three_stage_spec(const SystemConfig& cfg, std::vector<int> switch_times);

/// Updates on both mismatch states for t <= T_n and only on the persistent
/// state afterwards.
TabularPolicy compile_three_stage(const SystemConfig& cfg, const ThreeStageSpec& spec);

TabularPolicy always_update_policy(const SystemConfig& cfg);
TabularPolicy never_update_policy(const SystemConfig& cfg);

}  // namespace remon
