#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "remon/io.hpp"
#include "remon/kkt.hpp"
#include "remon/model.hpp"
#include "remon/policy.hpp"
#include "remon/sim.hpp"

namespace remon {

enum class Mode { kSolve, kAnalyze, kSimulate, kSweep, kVerify };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct ExperimentSpec {
  SystemConfig config;
  Mode mode = Mode::kSolve;
  std::vector<double> sweep_rates;
  int trials = 10000;
  std::uint64_t seed = 0x5eedULL;
  std::filesystem::path output_path;         // empty: do not write
  std::optional<std::filesystem::path> policy_path;  // analyze/simulate only
  std::filesystem::path summary_path;        // simulate only; empty: do not write
  int workers = 1;
};

/// Throws std::invalid_argument unless sweep_rates is non-empty exactly in
/// sweep mode with every rate in [0, full rate], and trials >= 0.
void validate_spec(const ExperimentSpec& spec);

/// Switch-time policy for budget r. r = 0 gives never-update: the one-sided
/// stage still spends O(1) updates per source, which a zero budget cannot
/// afford.
TabularPolicy synthesize_policy(const SystemConfig& cfg, double r);

struct SolveOutput {
  KktSolution solution;
  ThreeStageSpec spec;
  LpPoint embedded;
  Json document;
};

SolveOutput run_solve(const ExperimentSpec& spec);

/// Per-t CSV: t, beta_n..., expected_update_n..., rho, m_star, lower, upper.
std::string analysis_csv(const SystemConfig& cfg, const TabularPolicy& policy);
std::string run_analyze(const ExperimentSpec& spec);

struct SimulateOutput {
  McEstimate estimate;
  std::string csv;  // t, error_freq, rho_lower, rho_upper
  Json summary;
};

SimulateOutput run_simulate(const ExperimentSpec& spec);

struct SweepRow {
  double rate = 0.0;
  std::string policy;  // three_stage, always or never
  double approx_objective = 0.0;
  double analytic_rate = 0.0;
  std::optional<McEstimate> mc;  // absent when trials == 0
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  bool three_stage_monotone = true;
  std::string csv;
};

/// Rows are ordered by rate, then three_stage, always, never. All policies at a
/// given rate share the Monte Carlo seed derive_seed(seed, rate index).
SweepOutput run_sweep(const ExperimentSpec& spec);

/// `points` evenly spaced rates from 0 to the full rate, both included.
std::vector<double> even_rates(const SystemConfig& cfg, int points);

}  // namespace remon
