#include "remon/experiment.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "remon/analysis.hpp"
#include "remon/rng.hpp"

namespace remon {

Mode parse_mode(const std::string& name) {
  if (name == "solve") return Mode::kSolve;
  if (name == "analyze") return Mode::kAnalyze;
  if (name == "simulate") return Mode::kSimulate;
  if (name == "sweep") return Mode::kSweep;
  if (name == "verify") return Mode::kVerify;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kSolve: return "solve";
    case Mode::kAnalyze: return "analyze";
    case Mode::kSimulate: return "simulate";
    case Mode::kSweep: return "sweep";
    case Mode::kVerify: return "verify";
  }
  return "unknown";
}

void validate_spec(const ExperimentSpec& spec) {
  validate_config(spec.config);
  if (spec.trials < 0) throw std::invalid_argument("trials must be >= 0");
  if ((spec.mode == Mode::kSweep) != !spec.sweep_rates.empty()) {
    throw std::invalid_argument("sweep rates are required in sweep mode and only there");
  }
  const double full = full_update_rate(spec.config);
  for (double r : spec.sweep_rates) {
    if (!(r >= 0.0) || r > full + 1e-12) {
      throw std::invalid_argument("sweep rate " + format12(r) + " outside [0, " + format12(full) + "]");
    }
  }
}

TabularPolicy synthesize_policy(const SystemConfig& cfg, double r) {
  if (r <= 0.0) return never_update_policy(cfg);
  const KktSolution sol = compute_Tn(cfg, alpha_table(cfg), r);
  return compile_three_stage(cfg, to_three_stage_spec(cfg, sol));
}

namespace {

TabularPolicy spec_policy(const ExperimentSpec& spec) {
  if (spec.policy_path) return load_policy(spec.config, *spec.policy_path);
  return synthesize_policy(spec.config, spec.config.rate_budget);
}

void maybe_write(const std::filesystem::path& path, const std::string& text) {
  if (!path.empty()) write_text_file(path, text);
}

std::vector<double> betas_at(const std::vector<PairChainSeries>& series, int t) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(s.beta[static_cast<std::size_t>(t)]);
  return out;
}

}  // namespace

SolveOutput run_solve(const ExperimentSpec& spec) {
  validate_spec(spec);
  const SystemConfig& cfg = spec.config;
  const AlphaTable alpha = alpha_table(cfg);
  SolveOutput out;
  out.solution = compute_Tn(cfg, alpha, cfg.rate_budget);
  out.spec = to_three_stage_spec(cfg, out.solution);
  out.embedded = embed_solution(cfg, alpha, out.solution);
  out.document["config"] = config_to_json(cfg);
  out.document["solution"] = kkt_solution_to_json(out.solution);
  out.document["relaxed_objective"] = round12(out.embedded.objective);
  out.document["policy"] = three_stage_to_json(out.spec);
  maybe_write(spec.output_path, out.document.dump(2) + "\n");
  return out;
}

std::string analysis_csv(const SystemConfig& cfg, const TabularPolicy& policy) {
  const auto series = analyze_policy(cfg, policy);
  const AlphaTable alpha = alpha_table(cfg);
  std::ostringstream os;
  os << "t";
  for (int n = 1; n <= cfg.n_sources; ++n) os << ",beta_" << n;
  for (int n = 1; n <= cfg.n_sources; ++n) os << ",expected_update_" << n;
  os << ",rho,m_star,lower,upper\n";
  for (int t = 1; t <= cfg.horizon; ++t) {
    const auto betas = betas_at(series, t);
    const RhoResult rho = rho_at(alpha, betas);
    os << t;
    for (double b : betas) os << ',' << format12(b);
    for (const auto& s : series) os << ',' << format12(s.expected_update[static_cast<std::size_t>(t)]);
    os << ',' << format12(rho.rho) << ',' << rho.m_star << ',' << format12(rho.lower) << ','
       << format12(rho.upper) << '\n';
  }
  return os.str();
}

std::string run_analyze(const ExperimentSpec& spec) {
  validate_spec(spec);
  std::string csv = analysis_csv(spec.config, spec_policy(spec));
  maybe_write(spec.output_path, csv);
  return csv;
}

SimulateOutput run_simulate(const ExperimentSpec& spec) {
  validate_spec(spec);
  if (spec.trials < 1) throw std::invalid_argument("simulate needs trials >= 1");
  const SystemConfig& cfg = spec.config;
  const TabularPolicy policy = spec_policy(spec);
  SimulateOutput out;
  out.estimate = monte_carlo(cfg, policy, spec.trials, spec.seed, spec.workers);

  const auto series = analyze_policy(cfg, policy);
  const AlphaTable alpha = alpha_table(cfg);
  std::ostringstream os;
  os << "t,error_freq,rho_lower,rho_upper\n";
  for (int t = 1; t <= cfg.horizon; ++t) {
    const RhoResult rho = rho_at(alpha, betas_at(series, t));
    os << t << ',' << format12(out.estimate.per_t_error_freq[static_cast<std::size_t>(t - 1)]) << ','
       << format12(rho.lower) << ',' << format12(rho.upper) << '\n';
  }
  out.csv = os.str();

  const auto& est = out.estimate;
  out.summary["trials"] = est.trials;
  out.summary["seed"] = format_seed(spec.seed);
  out.summary["error_prob"] = {{"mean", round12(est.error_prob.mean)}, {"se", round12(est.error_prob.se)}};
  out.summary["update_rate"] = {{"mean", round12(est.update_rate.mean)}, {"se", round12(est.update_rate.se)}};
  out.summary["approx_objective"] = round12(approx_objective(alpha, series));
  out.summary["analytic_update_rate"] = round12(total_update_rate(series));
  maybe_write(spec.output_path, out.csv);
  maybe_write(spec.summary_path, out.summary.dump(2) + "\n");
  return out;
}

std::vector<double> even_rates(const SystemConfig& cfg, int points) {
  if (points < 2) throw std::invalid_argument("a sweep needs at least two points");
  const double full = full_update_rate(cfg);
  std::vector<double> rates;
  for (int i = 0; i < points; ++i) rates.push_back(i + 1 == points ? full : full * i / (points - 1));
  return rates;
}

SweepOutput run_sweep(const ExperimentSpec& spec) {
  validate_spec(spec);
  const SystemConfig& cfg = spec.config;
  const AlphaTable alpha = alpha_table(cfg);
  const TabularPolicy always = always_update_policy(cfg);
  const TabularPolicy never = never_update_policy(cfg);

  SweepOutput out;
  std::vector<std::pair<double, double>> three_stage;  // (rate, objective)
  for (std::size_t i = 0; i < spec.sweep_rates.size(); ++i) {
    const double r = spec.sweep_rates[i];
    const std::uint64_t mc_seed = derive_seed(spec.seed, i);
    const TabularPolicy synthesized = synthesize_policy(cfg, r);
    for (const auto& [name, policy] : {std::pair<const char*, const TabularPolicy*>{"three_stage", &synthesized},
                                       {"always", &always},
                                       {"never", &never}}) {
      const auto series = analyze_policy(cfg, *policy);
      SweepRow row;
      row.rate = r;
      row.policy = name;
      row.approx_objective = approx_objective(alpha, series);
      row.analytic_rate = total_update_rate(series);
      if (spec.trials > 0) row.mc = monte_carlo(cfg, *policy, spec.trials, mc_seed, spec.workers);
      if (row.policy == "three_stage") three_stage.emplace_back(r, row.approx_objective);
      out.rows.push_back(std::move(row));
    }
  }

  std::sort(three_stage.begin(), three_stage.end());
  for (std::size_t i = 1; i < three_stage.size(); ++i) {
    if (three_stage[i].second > three_stage[i - 1].second + 1e-9) out.three_stage_monotone = false;
  }

  std::ostringstream os;
  os << "r,policy,approx_objective,analytic_rate,mc_error,mc_error_se,mc_rate,mc_rate_se\n";
  for (const auto& row : out.rows) {
    os << format12(row.rate) << ',' << row.policy << ',' << format12(row.approx_objective) << ','
       << format12(row.analytic_rate);
    if (row.mc) {
      os << ',' << format12(row.mc->error_prob.mean) << ',' << format12(row.mc->error_prob.se) << ','
         << format12(row.mc->update_rate.mean) << ',' << format12(row.mc->update_rate.se);
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
  out.csv = os.str();
  maybe_write(spec.output_path, out.csv);
  return out;
}

}  // namespace remon
