#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "remon/experiment.hpp"
#include "remon/io.hpp"
#include "remon/verify.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::string seed;
  std::string rates;
  std::string policy;
  std::string summary;
  std::vector<std::string> inject;
  int trials = 10000;
  int workers = 1;
};

std::vector<double> parse_rates(const std::string& list) {
  std::vector<double> rates;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double r = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad rate '" + item + "'");
    rates.push_back(r);
  }
  if (rates.empty()) throw std::invalid_argument("--rates needs at least one value");
  return rates;
}

remon::ExperimentSpec make_spec(const Args& args, remon::Mode mode) {
  remon::ExperimentSpec spec;
  spec.mode = mode;
  spec.config = remon::load_config(args.config);
  spec.seed = args.seed.empty() ? spec.config.seed : remon::parse_seed(args.seed);
  spec.trials = args.trials;
  spec.workers = args.workers;
  spec.output_path = args.out;
  spec.summary_path = args.summary;
  if (!args.policy.empty()) spec.policy_path = args.policy;
  if (mode == remon::Mode::kSweep) {
    spec.sweep_rates = args.rates.empty() ? remon::even_rates(spec.config, 10) : parse_rates(args.rates);
  }
  return spec;
}

void emit(const Args& args, const std::string& text) {
  if (args.out.empty()) std::cout << text;
}

int run_verify_command(const Args& args) {
  remon::VerifyOptions options;
  if (!args.seed.empty()) options.seed = remon::parse_seed(args.seed);
  options.workers = args.workers;
  for (const auto& fault : args.inject) {
    if (fault == "tau_index") {
      options.kkt.tau_leading_offset = 1;
    } else if (fault == "dp_terminal") {
      options.dp.charge_terminal_mismatch = false;
    } else {
      throw std::invalid_argument("unknown fault '" + fault + "' (tau_index, dp_terminal)");
    }
  }
  const auto results = remon::run_verify(options);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.summary << '\n';
    if (!r.passed) std::cerr << "  witness: " << r.witness << '\n';
  }
  const std::string doc = remon::verdict_to_json(results).dump(2) + "\n";
  if (args.out.empty()) {
    std::cout << doc;
  } else {
    remon::write_text_file(args.out, doc);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-constrained update policies for top-K monitoring of Markov sources"};
  app.require_subcommand(1);
  Args args;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", args.config, "SystemConfig JSON file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "Output file (stdout when omitted)");
    cmd->add_option("--seed", args.seed, "Master seed, hex (0x...) or decimal");
    cmd->add_option("--workers", args.workers, "Simulation threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  };

  auto* solve = app.add_subcommand("solve", "Switch times for the config's rate budget");
  add_common(solve, true);

  auto* analyze = app.add_subcommand("analyze", "Exact per-slot mismatch and update table");
  add_common(analyze, true);
  analyze->add_option("--policy", args.policy, "Policy JSON file (default: synthesized)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo error and rate estimate");
  add_common(simulate, true);
  simulate->add_option("--policy", args.policy, "Policy JSON file (default: synthesized)");
  simulate->add_option("--trials", args.trials, "Episodes")->check(CLI::PositiveNumber);
  simulate->add_option("--summary", args.summary, "Summary JSON file (stdout when omitted)");

  auto* sweep = app.add_subcommand("sweep", "Compare policies over a list of rate budgets");
  add_common(sweep, true);
  sweep->add_option("--rates", args.rates, "Comma-separated budgets (default: 10 even points)");
  sweep->add_option("--trials", args.trials, "Episodes per row, 0 = analytic only")
      ->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Run the oracle and property suite");
  add_common(verify, false);
  verify->add_option("--inject", args.inject, "Fault to inject: tau_index, dp_terminal");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const auto out = remon::run_solve(make_spec(args, remon::Mode::kSolve));
      emit(args, out.document.dump(2) + "\n");
    } else if (*analyze) {
      emit(args, remon::run_analyze(make_spec(args, remon::Mode::kAnalyze)));
    } else if (*simulate) {
      const auto out = remon::run_simulate(make_spec(args, remon::Mode::kSimulate));
      emit(args, out.csv);
      if (args.summary.empty()) std::cout << out.summary.dump(2) << '\n';
    } else if (*sweep) {
      const auto out = remon::run_sweep(make_spec(args, remon::Mode::kSweep));
      emit(args, out.csv);
      if (!out.three_stage_monotone) {
        std::cerr << "warning: three_stage objective is not non-increasing in r\n";
        return 1;
      }
    } else if (*verify) {
      return run_verify_command(args);
    }
  } catch (const remon::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
