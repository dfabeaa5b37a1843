#include "remon/model.hpp"

#include <cmath>
#include <sstream>

#include "remon/rng.hpp"

namespace remon {

std::string to_string(PairState s) {
  return std::string{static_cast<char>('0' + x_of(s)), static_cast<char>('0' + y_of(s))};
}

const SourceParams& SystemConfig::source(int n) const {
  if (n < 1 || n > static_cast<int>(sources.size())) {
    throw std::out_of_range("source index " + std::to_string(n) + " outside 1.." +
                            std::to_string(sources.size()));
  }
  return sources[static_cast<std::size_t>(n - 1)];
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid config:";
  for (const auto& s : v) os << "\n  - " << s;
  return os.str();
}

void check_probability(std::vector<std::string>& out, const std::string& field, double v) {
  if (!std::isfinite(v)) {
    out.push_back(field + " must be finite");
    return;
  }
  if (v <= 0.0) out.push_back(field + " must be > 0");
  if (v >= 0.5) out.push_back(field + " must be < 0.5");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

const SystemConfig& validate_config(const SystemConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.n_sources < 1) bad.emplace_back("n_sources must be >= 1");
  if (cfg.k_select < 1) bad.emplace_back("k_select must be >= 1");
  if (cfg.n_sources >= 1 && cfg.k_select > cfg.n_sources) {
    bad.emplace_back("k_select exceeds n_sources");
  }
  if (cfg.horizon < 1) bad.emplace_back("horizon must be >= 1");
  if (!std::isfinite(cfg.rate_budget) || cfg.rate_budget < 0.0) {
    bad.emplace_back("rate_budget must be a finite value >= 0");
  }
  if (static_cast<int>(cfg.sources.size()) != cfg.n_sources) {
    bad.emplace_back("sources has " + std::to_string(cfg.sources.size()) +
                     " entries but n_sources is " + std::to_string(cfg.n_sources));
  }
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    const std::string prefix = "sources[" + std::to_string(i + 1) + "].";
    check_probability(bad, prefix + "mu", cfg.sources[i].mu);
    check_probability(bad, prefix + "lambda", cfg.sources[i].lambda);
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return cfg;
}

double steady_state_free_prob(const SourceParams& p) { return p.mu / p.zeta(); }

double transition_prob(const SourceParams& p, int from_state, int to_state) {
  if ((from_state != 0 && from_state != 1) || (to_state != 0 && to_state != 1)) {
    throw std::out_of_range("states must be 0 (busy) or 1 (free)");
  }
  if (from_state == 1) return to_state == 1 ? 1.0 - p.lambda : p.lambda;
  return to_state == 1 ? p.mu : 1.0 - p.mu;
}

AlphaTable::AlphaTable(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("alpha table needs at least one entry");
}

double AlphaTable::operator[](int n) const {
  if (n < 1 || n > static_cast<int>(values_.size())) {
    throw std::out_of_range("alpha index " + std::to_string(n) + " outside 1.." +
                            std::to_string(values_.size()));
  }
  return values_[static_cast<std::size_t>(n - 1)];
}

AlphaTable alpha_table(const SystemConfig& cfg) {
  validate_config(cfg);
  const int k = cfg.k_select;
  // count[c] = Pr(c of the sources seen so far are free), c < K only.
  std::vector<double> count(static_cast<std::size_t>(k), 0.0);
  count[0] = 1.0;
  std::vector<double> alpha;
  alpha.reserve(cfg.sources.size() + 1);
  for (const auto& src : cfg.sources) {
    double below = 0.0;
    for (double c : count) below += c;
    alpha.push_back(below);

    const double p = steady_state_free_prob(src);
    for (int c = k - 1; c >= 0; --c) {
      const double stay = count[static_cast<std::size_t>(c)] * (1.0 - p);
      const double from_below = c > 0 ? count[static_cast<std::size_t>(c - 1)] * p : 0.0;
      count[static_cast<std::size_t>(c)] = stay + from_below;
    }
  }
  alpha.push_back(0.0);
  return AlphaTable(std::move(alpha));
}

Trajectory sample_trajectory(const SystemConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  Trajectory tr;
  tr.horizon = cfg.horizon;
  tr.n_sources = cfg.n_sources;
  tr.seed = seed;
  const auto n = static_cast<std::size_t>(cfg.n_sources);
  tr.availability.resize((static_cast<std::size_t>(cfg.horizon) + 1) * n);

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    tr.availability[i] = rng.bernoulli(steady_state_free_prob(cfg.sources[i])) ? 1 : 0;
  }
  for (int t = 1; t <= cfg.horizon; ++t) {
    const std::size_t row = static_cast<std::size_t>(t) * n;
    for (std::size_t i = 0; i < n; ++i) {
      const int prev = tr.availability[row - n + i];
      tr.availability[row + i] =
          rng.bernoulli(transition_prob(cfg.sources[i], prev, 1)) ? 1 : 0;
    }
  }
  return tr;
}

std::vector<Trajectory> sample_trajectories(const SystemConfig& cfg, int count,
                                            std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("trajectory count must be positive");
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(sample_trajectory(cfg, derive_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

}  // namespace remon
