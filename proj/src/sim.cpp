#include "remon/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "remon/rng.hpp"

namespace remon {

int decision_prefix_length(std::span<const std::uint8_t> x, int k) {
  int free_count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    free_count += x[i] != 0;
    if (free_count == k) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(x.size());
}

std::vector<int> top_k_free(std::span<const std::uint8_t> x, int k) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size() && static_cast<int>(out.size()) < k; ++i) {
    if (x[i] != 0) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

bool top_k_error_at(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y, int k) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y must have the same length");
  const auto v = static_cast<std::size_t>(decision_prefix_length(x, k));
  for (std::size_t i = 0; i < v; ++i) {
    if ((x[i] != 0) != (y[i] != 0)) return true;
  }
  return false;
}

EpisodeResult run_episode(const SystemConfig& cfg, const TabularPolicy& policy,
                          std::uint64_t seed) {
  if (policy.n_sources() != cfg.n_sources || policy.horizon() != cfg.horizon) {
    throw std::invalid_argument("policy shape does not match the config");
  }
  const Trajectory tr = sample_trajectory(cfg, seed);
  const auto n = static_cast<std::size_t>(cfg.n_sources);
  const auto horizon = static_cast<std::size_t>(cfg.horizon);

  EpisodeResult ep;
  ep.seed = seed;
  ep.per_t_error.assign(horizon, 0);
  ep.pair_states.assign((horizon + 1) * n, 0);
  ep.updates.assign(horizon * n, 0);

  std::vector<std::uint8_t> y(tr.availability.begin(), tr.availability.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ep.pair_states[i] = static_cast<std::uint8_t>(index_of(make_pair_state(y[i], y[i])));
  }
  for (int t = 1; t <= cfg.horizon; ++t) {
    const auto row = static_cast<std::size_t>(t);
    const std::uint8_t* x_prev = &tr.availability[(row - 1) * n];
    const std::uint8_t* x_now = &tr.availability[row * n];
    for (std::size_t i = 0; i < n; ++i) {
      if (policy.decide(static_cast<int>(i) + 1, t, x_prev[i], y[i])) {
        y[i] = x_prev[i];
        ep.updates[(row - 1) * n + i] = 1;
        ++ep.update_count;
      }
      ep.pair_states[row * n + i] = static_cast<std::uint8_t>(index_of(make_pair_state(x_now[i], y[i])));
    }
    ep.per_t_error[row - 1] = top_k_error_at({x_now, n}, y, cfg.k_select) ? 1 : 0;
  }
  return ep;
}

double McEstimate::frequency_se(double p) const {
  if (trials < 1) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / trials);
}

namespace {

// Integer tallies so that any split of the trials sums to the same result.
struct Tally {
  std::uint64_t error_sum = 0;
  std::uint64_t error_sq = 0;
  std::uint64_t update_sum = 0;
  std::uint64_t update_sq = 0;
  std::vector<std::uint64_t> per_t_error;
  std::vector<std::uint64_t> pair_counts;    // ((n * (T+1)) + t) * 4 + s
  std::vector<std::uint64_t> update_counts;  // n * (T+1) + t

  Tally(std::size_t n, std::size_t horizon)
      : per_t_error(horizon, 0),
        pair_counts(n * (horizon + 1) * 4, 0),
        update_counts(n * (horizon + 1), 0) {}

  void add(const EpisodeResult& ep, std::size_t n, std::size_t horizon) {
    std::uint64_t errors = 0;
    for (std::size_t t = 0; t < horizon; ++t) {
      errors += ep.per_t_error[t];
      per_t_error[t] += ep.per_t_error[t];
    }
    error_sum += errors;
    error_sq += errors * errors;
    const auto updates = static_cast<std::uint64_t>(ep.update_count);
    update_sum += updates;
    update_sq += updates * updates;
    for (std::size_t t = 0; t <= horizon; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        ++pair_counts[(i * (horizon + 1) + t) * 4 + ep.pair_states[t * n + i]];
        if (t >= 1) update_counts[i * (horizon + 1) + t] += ep.updates[(t - 1) * n + i];
      }
    }
  }

  void merge(const Tally& other) {
    error_sum += other.error_sum;
    error_sq += other.error_sq;
    update_sum += other.update_sum;
    update_sq += other.update_sq;
    for (std::size_t i = 0; i < per_t_error.size(); ++i) per_t_error[i] += other.per_t_error[i];
    for (std::size_t i = 0; i < pair_counts.size(); ++i) pair_counts[i] += other.pair_counts[i];
    for (std::size_t i = 0; i < update_counts.size(); ++i) update_counts[i] += other.update_counts[i];
  }
};

Estimate mean_and_se(std::uint64_t sum, std::uint64_t sq, int trials, double scale) {
  const double n = trials;
  const double mean = static_cast<double>(sum) / n;
  Estimate e;
  e.mean = mean * scale;
  if (trials > 1) {
    const double var = std::max(0.0, (static_cast<double>(sq) - n * mean * mean) / (n - 1.0));
    e.se = std::sqrt(var / n) * scale;
  }
  return e;
}

}  // namespace

McEstimate monte_carlo(const SystemConfig& cfg, const TabularPolicy& policy, int trials,
                       std::uint64_t seed, int workers) {
  validate_config(cfg);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, trials);
  const auto n = static_cast<std::size_t>(cfg.n_sources);
  const auto horizon = static_cast<std::size_t>(cfg.horizon);

  std::vector<Tally> tallies(static_cast<std::size_t>(workers), Tally(n, horizon));
  auto work = [&](int w) {
    const int begin = static_cast<int>(static_cast<long long>(trials) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(trials) * (w + 1) / workers);
    for (int i = begin; i < end; ++i) {
      const auto ep = run_episode(cfg, policy, derive_seed(seed, static_cast<std::uint64_t>(i)));
      tallies[static_cast<std::size_t>(w)].add(ep, n, horizon);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Tally total = std::move(tallies.front());
  for (std::size_t w = 1; w < tallies.size(); ++w) total.merge(tallies[w]);

  McEstimate est;
  est.trials = trials;
  const double per_slot = 1.0 / static_cast<double>(horizon);
  est.error_prob = mean_and_se(total.error_sum, total.error_sq, trials, per_slot);
  est.update_rate = mean_and_se(total.update_sum, total.update_sq, trials, per_slot);
  est.per_t_error_freq.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    est.per_t_error_freq[t] = static_cast<double>(total.per_t_error[t]) / trials;
  }
  est.pair_state_freq.assign(n, std::vector<PairDistribution>(horizon + 1));
  est.update_freq.assign(n, std::vector<double>(horizon + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t <= horizon; ++t) {
      for (std::size_t s = 0; s < 4; ++s) {
        est.pair_state_freq[i][t][s] =
            static_cast<double>(total.pair_counts[(i * (horizon + 1) + t) * 4 + s]) / trials;
      }
      est.update_freq[i][t] = static_cast<double>(total.update_counts[i * (horizon + 1) + t]) / trials;
    }
  }
  return est;
}

JointEvaluation exact_joint_evaluation(const SystemConfig& cfg, const TabularPolicy& policy) {
  validate_config(cfg);
  if (cfg.n_sources > 4 || cfg.horizon > 12) {
    throw std::invalid_argument("exact joint evaluation is limited to N <= 4 and T <= 12");
  }
  if (policy.n_sources() != cfg.n_sources || policy.horizon() != cfg.horizon) {
    throw std::invalid_argument("policy shape does not match the config");
  }
  const auto n = static_cast<std::size_t>(cfg.n_sources);
  const std::size_t states = std::size_t{1} << (2 * n);
  // Joint index: source i occupies bits 2i (y) and 2i+1 (x).
  auto x_bit = [](std::size_t code, std::size_t i) { return static_cast<std::uint8_t>((code >> (2 * i + 1)) & 1u); };
  auto y_bit = [](std::size_t code, std::size_t i) { return static_cast<std::uint8_t>((code >> (2 * i)) & 1u); };

  std::vector<double> dist(states, 0.0);
  for (std::size_t xs = 0; xs < (std::size_t{1} << n); ++xs) {
    double mass = 1.0;
    std::size_t code = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool free = ((xs >> i) & 1u) != 0;
      const double pi1 = steady_state_free_prob(cfg.sources[i]);
      mass *= free ? pi1 : 1.0 - pi1;
      if (free) code |= std::size_t{3} << (2 * i);
    }
    dist[code] += mass;
  }

  JointEvaluation out;
  const auto horizon = static_cast<std::size_t>(cfg.horizon);
  out.error_at.assign(horizon + 1, 0.0);
  out.expected_update.assign(horizon + 1, 0.0);
  std::vector<std::uint8_t> xv(n), yv(n);
  for (int t = 1; t <= cfg.horizon; ++t) {
    std::vector<double> next(states, 0.0);
    double updates = 0.0;
    for (std::size_t code = 0; code < states; ++code) {
      const double mass = dist[code];
      if (mass == 0.0) continue;
      std::size_t y_code = 0;
      std::array<double, 4> to_free{};
      for (std::size_t i = 0; i < n; ++i) {
        const int x = x_bit(code, i);
        int y = y_bit(code, i);
        if (policy.decide(static_cast<int>(i) + 1, t, x, y)) {
          y = x;
          updates += mass;
        }
        y_code |= static_cast<std::size_t>(y) << (2 * i);
        to_free[i] = transition_prob(cfg.sources[i], x, 1);
      }
      for (std::size_t xs = 0; xs < (std::size_t{1} << n); ++xs) {
        double p = mass;
        std::size_t target = y_code;
        for (std::size_t i = 0; i < n; ++i) {
          const bool free = ((xs >> i) & 1u) != 0;
          p *= free ? to_free[i] : 1.0 - to_free[i];
          if (free) target |= std::size_t{1} << (2 * i + 1);
        }
        next[target] += p;
      }
    }
    dist = std::move(next);
    double error = 0.0;
    for (std::size_t code = 0; code < states; ++code) {
      if (dist[code] == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        xv[i] = x_bit(code, i);
        yv[i] = y_bit(code, i);
      }
      if (top_k_error_at(xv, yv, cfg.k_select)) error += dist[code];
    }
    out.error_at[static_cast<std::size_t>(t)] = error;
    out.expected_update[static_cast<std::size_t>(t)] = updates;
    out.error_prob += error;
    out.update_rate += updates;
  }
  out.error_prob /= cfg.horizon;
  out.update_rate /= cfg.horizon;
  return out;
}

}  // namespace remon
