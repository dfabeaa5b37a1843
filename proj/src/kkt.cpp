#include "remon/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace remon {

namespace {

constexpr double kTol = 1e-12;

void check_shape(const SystemConfig& cfg, const AlphaTable& alpha) {
  validate_config(cfg);
  if (alpha.n_sources() != cfg.n_sources) {
    throw std::invalid_argument("alpha table does not match the config");
  }
}

double rate_weight(const SourceParams& p) { return p.change_rate(); }
double mismatch_weight(const SourceParams& p) { return p.nu() / p.zeta(); }

double breakpoint_tol(double bp) { return kTol * std::max(1.0, std::abs(bp)); }

// Evaluates tau(theta, m), Ntilde and the A/B sets at one theta.
struct ThetaState {
  std::vector<double> tau;
  std::vector<int> n_tilde;
  std::vector<int> set_a;
  std::vector<int> set_b;
  double rate_a = 0.0;
  double rate_b = 0.0;
};

class ThetaProblem {
 public:
  ThetaProblem(const SystemConfig& cfg, const AlphaTable& alpha, const KktOptions& options)
      : cfg_(cfg), alpha_(alpha), options_(options), bp_(compute_breakpoints(cfg, alpha)) {}

  int n() const { return cfg_.n_sources; }
  const std::vector<double>& breakpoints() const { return bp_; }

  double leading(int m) const {
    return alpha_[std::clamp(m + options_.tau_leading_offset, 1, n() + 1)];
  }

  double cost(int src, double theta) const {
    const SourceParams& p = cfg_.source(src);
    const double a = alpha_[src];
    return mismatch_weight(p) * std::min(a, (a + theta) * 2.0 * p.omega());
  }

  ThetaState evaluate(double theta) const {
    ThetaState st;
    st.tau.assign(static_cast<std::size_t>(n()) + 1, 0.0);
    double suffix = 0.0;
    for (int m = n() + 1; m >= 1; --m) {
      if (m <= n()) suffix += cost(m, theta);
      st.tau[static_cast<std::size_t>(m - 1)] = leading(m) - suffix;
    }
    const double lowest = *std::min_element(st.tau.begin(), st.tau.end());
    for (int m = 1; m <= n() + 1; ++m) {
      if (st.tau[static_cast<std::size_t>(m - 1)] <= lowest + kTol) st.n_tilde.push_back(m);
    }
    const int a_cut = st.n_tilde.front() - 1;
    const int b_cut = st.n_tilde.back() - 1;
    for (int src = 1; src <= n(); ++src) {
      const double bp = bp_[static_cast<std::size_t>(src - 1)];
      const double g = rate_weight(cfg_.source(src));
      if (src <= a_cut && theta < bp - breakpoint_tol(bp)) {
        st.set_a.push_back(src);
        st.rate_a += g;
      }
      if (src <= b_cut && theta <= bp + breakpoint_tol(bp)) {
        st.set_b.push_back(src);
        st.rate_b += g;
      }
    }
    return st;
  }

  // Breakpoints, plus the points between consecutive breakpoints where two
  // linear pieces of tau(., m) cross (Ntilde can change there), plus one
  // sentinel on each side. Sorted descending.
  std::vector<double> candidates() const {
    std::vector<double> sorted = bp_;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> out = sorted;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> edges{-kInf};
    edges.insert(edges.end(), sorted.begin(), sorted.end());
    edges.push_back(kInf);
    std::vector<double> slope(static_cast<std::size_t>(n()) + 1);
    std::vector<double> offset(slope.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double lo = edges[i];
      const double hi = edges[i + 1];
      double probe;
      if (std::isfinite(lo) && std::isfinite(hi)) {
        probe = 0.5 * (lo + hi);
      } else if (std::isfinite(hi)) {
        probe = hi - 1.0;
      } else {
        probe = lo + 1.0;
      }
      // On this interval tau(theta, m) = offset[m] + slope[m] * theta.
      for (int m = 1; m <= n() + 1; ++m) {
        double a = leading(m);
        double b = 0.0;
        for (int src = m; src <= n(); ++src) {
          const SourceParams& p = cfg_.source(src);
          const double al = alpha_[src];
          if (probe < bp_[static_cast<std::size_t>(src - 1)]) {
            a -= rate_weight(p) * al;
            b -= rate_weight(p);
          } else {
            a -= mismatch_weight(p) * al;
          }
        }
        offset[static_cast<std::size_t>(m - 1)] = a;
        slope[static_cast<std::size_t>(m - 1)] = b;
      }
      for (std::size_t m1 = 0; m1 < slope.size(); ++m1) {
        for (std::size_t m2 = m1 + 1; m2 < slope.size(); ++m2) {
          if (slope[m1] == slope[m2]) continue;
          const double x = (offset[m2] - offset[m1]) / (slope[m1] - slope[m2]);
          if (x >= lo && x <= hi) out.push_back(x);
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.insert(out.begin(), out.front() - 1.0);
    out.push_back(out.back() + 1.0);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  const SystemConfig& cfg_;
  const AlphaTable& alpha_;
  KktOptions options_;
  std::vector<double> bp_;
};

std::pair<double, ThetaState> search_theta(const ThetaProblem& problem, double r) {
  for (double theta : problem.candidates()) {
    ThetaState st = problem.evaluate(theta);
    if (st.rate_a <= r + kTol && r <= st.rate_b + kTol) return {theta, std::move(st)};
  }
  throw std::logic_error("no theta satisfies the rate sandwich for r = " + std::to_string(r));
}

}  // namespace

double epsilon_n(const SystemConfig& cfg, const AlphaTable& alpha, int n, std::span<const double> s,
                 std::span<const double> z) {
  const auto count = static_cast<std::size_t>(cfg.n_sources);
  if (s.size() != count || z.size() != count) throw std::invalid_argument("s and z need N entries");
  if (n < 1 || n > cfg.n_sources) throw std::out_of_range("source index out of range");
  const auto i = static_cast<std::size_t>(n - 1);
  const double prev = n == 1 ? static_cast<double>(cfg.horizon) : s[i - 1] + z[i - 1];
  const SourceParams& p = cfg.source(n);
  const double a = alpha[n];
  return a * mismatch_weight(p) * (2.0 * p.omega() * s[i] + z[i]) + a * (prev - s[i] - z[i]);
}

double lp_objective(const SystemConfig& cfg, const AlphaTable& alpha, std::span<const double> s,
                    std::span<const double> z) {
  double total = 0.0;
  for (int n = 1; n <= cfg.n_sources; ++n) total += epsilon_n(cfg, alpha, n, s, z);
  return total;
}

std::vector<double> compute_breakpoints(const SystemConfig& cfg, const AlphaTable& alpha) {
  check_shape(cfg, alpha);
  std::vector<double> bp;
  bp.reserve(static_cast<std::size_t>(cfg.n_sources));
  for (int n = 1; n <= cfg.n_sources; ++n) {
    bp.push_back(alpha[n] * (1.0 / (2.0 * cfg.source(n).omega()) - 1.0));
  }
  return bp;
}

double full_update_rate(const SystemConfig& cfg) {
  double total = 0.0;
  for (const auto& p : cfg.sources) total += rate_weight(p);
  return total;
}

double solve_theta(const SystemConfig& cfg, const AlphaTable& alpha, double r,
                   const KktOptions& options) {
  check_shape(cfg, alpha);
  if (!(r >= 0.0)) throw std::invalid_argument("rate budget must be >= 0");
  if (r > full_update_rate(cfg) + kTol) {
    throw std::invalid_argument("rate budget exceeds the full update rate");
  }
  ThetaProblem problem(cfg, alpha, options);
  return search_theta(problem, r).first;
}

KktSolution compute_Tn(const SystemConfig& cfg, const AlphaTable& alpha, double r,
                       const KktOptions& options) {
  check_shape(cfg, alpha);
  if (!(r >= 0.0)) throw std::invalid_argument("rate budget must be >= 0");
  const double full = full_update_rate(cfg);
  const double budget = std::min(r, full);

  ThetaProblem problem(cfg, alpha, options);
  auto [theta, st] = search_theta(problem, budget);

  KktSolution sol;
  sol.rate = r;
  sol.full_rate = full;
  sol.theta = theta;
  sol.set_a = st.set_a;
  sol.set_b = st.set_b;
  sol.n_tilde = st.n_tilde;
  sol.tau_of_m = st.tau;
  sol.breakpoints = problem.breakpoints();

  const double horizon = cfg.horizon;
  const double shared = st.rate_b - st.rate_a;
  if (shared > 0.0) {
    sol.t_prime = std::clamp(horizon * (budget - st.rate_a) / shared, 0.0, horizon);
  } else if (budget > st.rate_a + kTol) {
    throw std::logic_error("rate left over with no time-sharing sources");
  }

  const auto count = static_cast<std::size_t>(cfg.n_sources);
  sol.switch_times.assign(count, 0);
  const int shared_time = static_cast<int>(std::floor(sol.t_prime + 1e-9));
  for (int src : sol.set_b) sol.switch_times[static_cast<std::size_t>(src - 1)] = shared_time;
  for (int src : sol.set_a) sol.switch_times[static_cast<std::size_t>(src - 1)] = cfg.horizon;
  if (r >= full) std::fill(sol.switch_times.begin(), sol.switch_times.end(), cfg.horizon);
  return sol;
}

LpPoint embed_solution(const SystemConfig& cfg, const AlphaTable& alpha, const KktSolution& sol) {
  check_shape(cfg, alpha);
  if (sol.n_tilde.empty()) throw std::invalid_argument("solution has no Ntilde");
  const auto count = static_cast<std::size_t>(cfg.n_sources);
  const int first = sol.n_tilde.front();
  const int last = sol.n_tilde.back();
  LpPoint pt;
  pt.s.assign(count, 0.0);
  pt.z.assign(count, 0.0);
  for (int src = 1; src <= cfg.n_sources; ++src) {
    const auto i = static_cast<std::size_t>(src - 1);
    double budget = 0.0;
    if (src < first) {
      budget = cfg.horizon;
    } else if (src < last) {
      budget = sol.t_prime;
    }
    const bool in_a = std::find(sol.set_a.begin(), sol.set_a.end(), src) != sol.set_a.end();
    const bool in_b = std::find(sol.set_b.begin(), sol.set_b.end(), src) != sol.set_b.end();
    if (in_a) {
      pt.s[i] = budget;
    } else if (in_b) {
      pt.s[i] = sol.t_prime;
    }
    pt.z[i] = budget - pt.s[i];
  }
  pt.objective = lp_objective(cfg, alpha, pt.s, pt.z);
  return pt;
}

ThreeStageSpec to_three_stage_spec(const SystemConfig& cfg, const KktSolution& sol) {
  return make_three_stage_spec(cfg, sol.switch_times);
}

}  // namespace remon
