#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace remon {

/// Joint (availability, monitor) state of one source, encoded as 2*x + y.
/// x = 1 means the source is free; y is what the destination believes.
enum class PairState : std::uint8_t { k00 = 0, k01 = 1, k10 = 2, k11 = 3 };

constexpr PairState make_pair_state(int x, int y) {
  return static_cast<PairState>(2 * (x & 1) + (y & 1));
}
constexpr int x_of(PairState s) { return static_cast<int>(s) >> 1; }
constexpr int y_of(PairState s) { return static_cast<int>(s) & 1; }
constexpr bool is_mismatch(PairState s) { return x_of(s) != y_of(s); }
constexpr int index_of(PairState s) { return static_cast<int>(s); }

std::string to_string(PairState s);

/// Two-state Markov law of a single source. mu is the busy->free
/// probability per slot, lambda the free->busy probability.
struct SourceParams {
  double mu = 0.0;
  double lambda = 0.0;

  double zeta() const { return mu + lambda; }
  double nu() const { return mu < lambda ? mu : lambda; }
  double omega() const { return mu < lambda ? lambda : mu; }
  /// Expected updates per slot when every status change is reported.
  double change_rate() const { return 2.0 * mu * lambda / zeta(); }
};

/// Sources are stored in preference order; public indices are 1-based.
struct SystemConfig {
  int n_sources = 0;
  int k_select = 0;
  int horizon = 0;
  double rate_budget = 0.0;
  std::vector<SourceParams> sources;
  std::uint64_t seed = 0x5eedULL;

  const SourceParams& source(int n) const;
};

/// Thrown by validate_config; what() lists every violated invariant.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Returns the config unchanged, or throws ConfigError naming each
/// offending field.
const SystemConfig& validate_config(const SystemConfig& cfg);

double steady_state_free_prob(const SourceParams& p);

/// Entry of the 2x2 kernel P(X(t) = to | X(t-1) = from).
double transition_prob(const SourceParams& p, int from_state, int to_state);

/// alpha_n = Pr(fewer than K of sources 1..n-1 are free) at steady state,
/// for n = 1..N, with alpha_{N+1} = 0 appended.
class AlphaTable {
 public:
  AlphaTable() = default;
  explicit AlphaTable(std::vector<double> values);

  /// Number of sources N (the table holds N+1 entries).
  int n_sources() const { return static_cast<int>(values_.size()) - 1; }
  /// 1-based; n ranges over 1..N+1.
  double operator[](int n) const;
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

AlphaTable alpha_table(const SystemConfig& cfg);

/// Availability X_n(t) for t = 0..T and n = 1..N.
struct Trajectory {
  int horizon = 0;
  int n_sources = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> availability;  // row-major (T+1) x N

  std::uint8_t at(int t, int n) const {
    return availability[static_cast<std::size_t>(t) * n_sources + (n - 1)];
  }
};

Trajectory sample_trajectory(const SystemConfig& cfg, std::uint64_t seed);

/// Trajectory i is drawn from derive_seed(seed, i), so any subset can be
/// regenerated independently.
std::vector<Trajectory> sample_trajectories(const SystemConfig& cfg, int count,
                                            std::uint64_t seed);

}  // namespace remon
