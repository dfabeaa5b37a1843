#include "remon/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <sstream>

#include "remon/analysis.hpp"
#include "remon/experiment.hpp"
#include "remon/rng.hpp"
#include "remon/sim.hpp"

namespace remon {

namespace {

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

int uniform_int(Rng& rng, int lo, int hi) {
  const int v = lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
  return std::min(v, hi);
}

SourceParams random_source(Rng& rng) { return {uniform(rng, 0.05, 0.45), uniform(rng, 0.05, 0.45)}; }

SystemConfig random_config(Rng& rng, int n, int k, int horizon) {
  SystemConfig cfg;
  cfg.n_sources = n;
  cfg.k_select = k;
  cfg.horizon = horizon;
  for (int i = 0; i < n; ++i) cfg.sources.push_back(random_source(rng));
  return cfg;
}

std::string fmt(double v) { return format12(v); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CheckResult finish(std::string name, bool passed, std::string summary, std::string witness,
                   const Timer& timer) {
  return CheckResult{std::move(name), passed, std::move(summary), std::move(witness), timer.seconds()};
}

std::string describe_config(const SystemConfig& cfg) {
  std::ostringstream os;
  os << "N=" << cfg.n_sources << " K=" << cfg.k_select << " T=" << cfg.horizon << " sources=[";
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    os << (i ? "," : "") << '(' << fmt(cfg.sources[i].mu) << ',' << fmt(cfg.sources[i].lambda) << ')';
  }
  os << ']';
  return os.str();
}

}  // namespace

CheckResult check_error_sandwich(int instances, std::uint64_t seed) {
  Timer timer;
  double min_lower_slack = 1e300;
  double min_upper_slack = 1e300;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = uniform_int(rng, 1, 4);
    SystemConfig cfg = random_config(rng, n, uniform_int(rng, 1, std::min(2, n)), uniform_int(rng, 1, 12));
    std::vector<int> times;
    for (int s = 0; s < n; ++s) times.push_back(uniform_int(rng, 0, cfg.horizon));
    const TabularPolicy policy = compile_three_stage(cfg, make_three_stage_spec(cfg, times));

    const JointEvaluation exact = exact_joint_evaluation(cfg, policy);
    const auto series = analyze_policy(cfg, policy);
    const AlphaTable alpha = alpha_table(cfg);
    for (int t = 1; t <= cfg.horizon; ++t) {
      std::vector<double> betas;
      for (const auto& s : series) betas.push_back(s.beta[static_cast<std::size_t>(t)]);
      const RhoResult rho = rho_at(alpha, betas);
      const double err = exact.error_at[static_cast<std::size_t>(t)];
      min_lower_slack = std::min(min_lower_slack, err - rho.lower);
      min_upper_slack = std::min(min_upper_slack, rho.upper - err);
      if (err < rho.lower - 1e-9 || err > rho.upper + 1e-9) {
        return finish("error_sandwich", false, "bound violated",
                      "instance " + std::to_string(i) + " " + describe_config(cfg) + " t=" +
                          std::to_string(t) + " error=" + fmt(err) + " rho=" + fmt(rho.rho),
                      timer);
      }
    }
  }
  return finish("error_sandwich", true,
                std::to_string(instances) + " instances, min slack lower " + fmt(min_lower_slack) +
                    " upper " + fmt(min_upper_slack),
                "", timer);
}

CheckResult check_pair_chain(int instances, int trials, std::uint64_t seed, int workers) {
  Timer timer;
  constexpr int kHorizon = 6;
  int comparisons = 0;
  double max_z = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    SystemConfig cfg = random_config(rng, 1, 1, kHorizon);
    const SourceParams& p = cfg.sources.front();

    const double full = p.change_rate();
    const auto always = propagate_pair_chain(p, always_update_policy(cfg).source(1));
    for (int t = 1; t <= kHorizon; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      const double expected_u = t == 1 ? 0.0 : full;
      if (std::abs(always.beta[ti] - full) > 1e-12 ||
          std::abs(always.expected_update[ti] - expected_u) > 1e-12) {
        return finish("pair_chain", false, "always-update identity broken",
                      describe_config(cfg) + " t=" + std::to_string(t) + " beta=" + fmt(always.beta[ti]) +
                          " E[U]=" + fmt(always.expected_update[ti]) + " expected " + fmt(full),
                      timer);
      }
    }

    TabularPolicy policy(1, kHorizon);
    for (int t = 1; t <= kHorizon; ++t) {
      policy.source(1).set_update(t, PairState::k01, rng.bernoulli(0.5));
      policy.source(1).set_update(t, PairState::k10, rng.bernoulli(0.5));
    }
    const auto chain = propagate_pair_chain(p, policy.source(1));
    const McEstimate mc = monte_carlo(cfg, policy, trials, derive_seed(seed, 1000003 + i), workers);

    auto compare = [&](const char* what, int t, double analytic, double empirical) -> std::string {
      ++comparisons;
      const double se = mc.frequency_se(analytic);
      const double diff = std::abs(empirical - analytic);
      if (se == 0.0) {
        return diff <= 1e-12 ? "" : std::string(what) + " is deterministic but differs";
      }
      max_z = std::max(max_z, diff / se);
      if (diff > 3.0 * se) {
        return std::string(what) + " t=" + std::to_string(t) + " analytic=" + fmt(analytic) +
               " simulated=" + fmt(empirical) + " z=" + fmt(diff / se);
      }
      return "";
    };
    for (int t = 1; t <= kHorizon; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      const auto& freq = mc.pair_state_freq[0][ti];
      std::string bad = compare("beta", t, chain.beta[ti], freq[1] + freq[2]);
      if (bad.empty()) bad = compare("E[U]", t, chain.expected_update[ti], mc.update_freq[0][ti]);
      if (!bad.empty()) {
        return finish("pair_chain", false, "simulation disagrees with the pair chain",
                      "instance " + std::to_string(i) + " " + describe_config(cfg) + " " + bad, timer);
      }
    }
  }
  return finish("pair_chain", true,
                std::to_string(instances) + " instances, " + std::to_string(comparisons) +
                    " comparisons, max |z| " + fmt(max_z),
                "", timer);
}

CheckResult check_pairwise_bound(int draws, std::uint64_t seed) {
  Timer timer;
  double max_gap = 0.0;
  for (int k = 2; k <= 4; ++k) {
    for (int i = 0; i < draws; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k * 100000 + i)));
      std::vector<double> alphas{1.0};
      while (static_cast<int>(alphas.size()) < k) alphas.push_back(alphas.back() * uniform(rng, 0.2, 1.0));
      const double w = uniform(rng, 0.0, alphas.back());
      const double closed = fk_closed_form(alphas, w);
      const double numeric = fk_numeric_max(alphas, w, 1e-3);
      max_gap = std::max(max_gap, std::abs(closed - numeric));
      if (std::abs(closed - numeric) > 1e-4 || closed > w / 2 + 1e-12 || numeric > w / 2 + 1e-12) {
        std::ostringstream os;
        os << "k=" << k << " alphas=[";
        for (std::size_t j = 0; j < alphas.size(); ++j) os << (j ? "," : "") << fmt(alphas[j]);
        os << "] w=" << fmt(w) << " closed=" << fmt(closed) << " numeric=" << fmt(numeric);
        return finish("pairwise_bound", false, "closed form disagrees with the grid maximum", os.str(), timer);
      }
    }
  }
  return finish("pairwise_bound", true,
                std::to_string(3 * draws) + " draws, max gap " + fmt(max_gap), "", timer);
}

namespace {

TailProfile random_tail(Rng& rng, int horizon, bool monotone) {
  const double alpha = uniform(rng, 0.05, 1.0);
  if (monotone) return TailProfile::monotone(alpha, horizon, uniform_int(rng, 0, horizon));
  std::vector<bool> active;
  for (int t = 0; t < horizon; ++t) active.push_back(rng.bernoulli(0.7));
  return TailProfile(alpha, active);
}

std::string describe_dp(const SourceParams& p, double gamma, const TailProfile& tail) {
  std::ostringstream os;
  os << "mu=" << fmt(p.mu) << " lambda=" << fmt(p.lambda) << " gamma=" << fmt(gamma)
     << " alpha=" << fmt(tail.alpha()) << " active=";
  for (int t = 1; t <= tail.horizon(); ++t) os << (tail.active(t) ? '1' : '0');
  return os.str();
}

}  // namespace

CheckResult check_dp_optimality(int instances, std::uint64_t seed, const DpOptions& options) {
  Timer timer;
  double max_gap = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const SourceParams p = random_source(rng);
    const int horizon = uniform_int(rng, 1, 6);
    const TailProfile tail = random_tail(rng, horizon, rng.bernoulli(0.5));
    const double gamma = uniform(rng, 0.0, 2.0 * tail.alpha() / p.zeta());
    const DpSolution dp = solve_single_source_dp(p, gamma, tail, options);
    const BruteForceResult brute = brute_force_single_source(p, gamma, tail);
    const double attained = single_source_cost(p, gamma, tail, dp.policy);
    const double gap = std::max(std::abs(dp.value - brute.value), std::abs(attained - dp.value));
    max_gap = std::max(max_gap, gap);
    if (gap > 1e-9) {
      return finish("dp_optimality", false, "dp value differs from exhaustive search",
                    "instance " + std::to_string(i) + " " + describe_dp(p, gamma, tail) + " dp=" +
                        fmt(dp.value) + " brute=" + fmt(brute.value) + " attained=" + fmt(attained),
                    timer);
    }
  }
  return finish("dp_optimality", true,
                std::to_string(instances) + " instances, max gap " + fmt(max_gap), "", timer);
}

CheckResult check_dp_structure(int instances, std::uint64_t seed, const DpOptions& options) {
  Timer timer;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const SourceParams p{uniform(rng, 0.01, 0.49), uniform(rng, 0.01, 0.49)};
    const int horizon = uniform_int(rng, 4, 50);
    const TailProfile tail = random_tail(rng, horizon, true);
    const double gamma = uniform(rng, 0.0, 2.0 * tail.alpha());
    const DpSolution dp = solve_single_source_dp(p, gamma, tail, options);
    const PropertyReport report = check_structural_properties(p, gamma, tail, dp);
    if (!report.ok) {
      std::string where = "t=" + std::to_string(report.t);
      if (report.state) where += " state=" + to_string(*report.state);
      return finish("dp_structure", false, report.property + " violated",
                    "instance " + std::to_string(i) + " " + describe_dp(p, gamma, tail) + " " + where +
                        " " + report.detail,
                    timer);
    }
  }
  return finish("dp_structure", true, std::to_string(instances) + " instances", "", timer);
}

CheckResult check_allocation_vs_lp(int instances, std::uint64_t seed, const KktOptions& options) {
  Timer timer;
  constexpr int kHorizon = 1000;
  double max_gap = 0.0;
  double max_rate_err = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = uniform_int(rng, 1, 6);
    SystemConfig cfg = random_config(rng, n, uniform_int(rng, 1, n), kHorizon);
    const double full = full_update_rate(cfg);
    const double r = uniform(rng, 0.0, full);
    cfg.rate_budget = r;
    const AlphaTable alpha = alpha_table(cfg);

    std::string bad;
    double gap = 0.0;
    double rate_err = 0.0;
    try {
      const KktSolution sol = compute_Tn(cfg, alpha, r, options);
      const LpPoint pt = embed_solution(cfg, alpha, sol);
      const LpPoint best = lp_oracle(cfg, alpha, r);
      double used = 0.0;
      double prev = kHorizon;
      for (int s = 0; s < n; ++s) {
        const auto si = static_cast<std::size_t>(s);
        used += cfg.sources[si].change_rate() * pt.s[si];
        const double d = pt.s[si] + pt.z[si];
        if (pt.s[si] < -1e-9 || pt.z[si] < -1e-9 || d > prev + 1e-9) bad = "embedded point infeasible";
        prev = d;
      }
      rate_err = std::abs(used - kHorizon * r);
      gap = std::abs(pt.objective - best.objective);
      if (bad.empty() && rate_err > 1e-9) bad = "rate equality off by " + fmt(rate_err);
      if (bad.empty() && gap > 1e-6 * kHorizon) {
        bad = "objective " + fmt(pt.objective) + " vs optimum " + fmt(best.objective);
      }
    } catch (const std::exception& e) {
      bad = std::string("exception: ") + e.what();
    }
    max_gap = std::max(max_gap, gap);
    max_rate_err = std::max(max_rate_err, rate_err);
    if (!bad.empty()) {
      return finish("allocation_vs_lp", false, "allocation disagrees with the exact optimum",
                    "instance " + std::to_string(i) + " " + describe_config(cfg) + " r=" + fmt(r) + " " + bad,
                    timer);
    }
  }
  return finish("allocation_vs_lp", true,
                std::to_string(instances) + " instances, max objective gap " + fmt(max_gap) +
                    ", max rate error " + fmt(max_rate_err),
                "", timer);
}

CheckResult check_rate_contract(int instances, std::uint64_t seed) {
  Timer timer;
  constexpr double kConstant = 2.0;
  double worst_c = -1e300;
  for (int horizon : {100, 1000, 10000}) {
    for (int i = 0; i < instances; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      const int n = uniform_int(rng, 1, 6);
      SystemConfig cfg = random_config(rng, n, uniform_int(rng, 1, n), horizon);
      const double r = uniform(rng, 0.0, full_update_rate(cfg));
      const KktSolution sol = compute_Tn(cfg, alpha_table(cfg), r);
      const TabularPolicy policy = compile_three_stage(cfg, to_three_stage_spec(cfg, sol));
      const double rate = total_update_rate(analyze_policy(cfg, policy));
      const double c = (rate - r) * horizon / n;
      worst_c = std::max(worst_c, c);
      if (c > kConstant) {
        return finish("rate_contract", false, "rate exceeds r + 2N/T",
                      describe_config(cfg) + " r=" + fmt(r) + " rate=" + fmt(rate), timer);
      }
    }
  }
  return finish("rate_contract", true,
                std::to_string(3 * instances) + " instances, worst (rate - r) T / N = " + fmt(worst_c), "",
                timer);
}

CheckResult check_top_k_example() {
  Timer timer;
  const std::vector<std::uint8_t> x{0, 1, 1, 0, 1, 1};
  const std::vector<std::uint8_t> y_bad{0, 1, 1, 0, 0, 1};
  const std::vector<std::uint8_t> y_ok{0, 1, 1, 0, 1, 0};
  const auto chosen = top_k_free(x, 3);
  const bool ok = chosen == std::vector<int>{2, 3, 5} && decision_prefix_length(x, 3) == 5 &&
                  top_k_error_at(x, y_bad, 3) && !top_k_error_at(x, y_ok, 3);
  std::string got = "top free set {";
  for (std::size_t i = 0; i < chosen.size(); ++i) got += (i ? "," : "") + std::to_string(chosen[i]);
  got += "}";
  return finish("top_k_example", ok, got, ok ? "" : got, timer);
}

CheckResult check_sweep_sanity(int instances, std::uint64_t seed) {
  Timer timer;
  for (int i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const int n = uniform_int(rng, 1, 4);
    ExperimentSpec spec;
    spec.config = random_config(rng, n, uniform_int(rng, 1, n), uniform_int(rng, 20, 300));
    spec.mode = Mode::kSweep;
    spec.sweep_rates = even_rates(spec.config, 10);
    spec.trials = 0;
    const SweepOutput out = run_sweep(spec);

    auto objective = [&](double r, const std::string& policy) {
      for (const auto& row : out.rows) {
        if (row.rate == r && row.policy == policy) return row.approx_objective;
      }
      return std::nan("");
    };
    const double lo = spec.sweep_rates.front();
    const double hi = spec.sweep_rates.back();
    std::string bad;
    if (!out.three_stage_monotone) bad = "objective increases with r";
    if (bad.empty() && !(std::abs(objective(hi, "three_stage") - objective(hi, "always")) <= 1e-9)) {
      bad = "full rate differs from always-update";
    }
    if (bad.empty() && !(std::abs(objective(lo, "three_stage") - objective(lo, "never")) <= 1e-9)) {
      bad = "zero rate differs from never-update";
    }
    if (!bad.empty()) {
      return finish("sweep_sanity", false, bad, describe_config(spec.config) + "\n" + out.csv, timer);
    }
  }
  return finish("sweep_sanity", true, std::to_string(instances) + " ten-point sweeps", "", timer);
}

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  const VerifySizes& sz = options.sizes;
  auto seed = [&](std::uint64_t stream) { return derive_seed(options.seed, stream); };
  return {
      check_error_sandwich(sz.sandwich_instances, seed(1)),
      check_pair_chain(sz.chain_instances, sz.chain_trials, seed(2), options.workers),
      check_pairwise_bound(sz.pairwise_draws, seed(3)),
      check_dp_optimality(sz.dp_brute_instances, seed(4), options.dp),
      check_dp_structure(sz.dp_structure_instances, seed(5), options.dp),
      check_allocation_vs_lp(sz.lp_instances, seed(6), options.kkt),
      check_rate_contract(sz.rate_instances, seed(7)),
      check_top_k_example(),
      check_sweep_sanity(sz.sweep_instances, seed(9)),
  };
}

Json verdict_to_json(const std::vector<CheckResult>& results) {
  Json checks = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    Json entry{{"name", r.name}, {"passed", r.passed}, {"summary", r.summary}};
    if (!r.witness.empty()) entry["witness"] = r.witness;
    checks.push_back(entry);
  }
  return Json{{"passed", all}, {"checks", checks}};
}

}  // namespace remon
