// One line per acceptance criterion; exit status 1 if any line is FAIL.
#include <cstdio>
#include <string>

#include "remon/io.hpp"
#include "remon/rng.hpp"
#include "remon/verify.hpp"

namespace {

int failures = 0;

void report(int id, remon::CheckResult r, double time_limit = 0.0) {
  if (time_limit > 0.0 && r.seconds >= time_limit) {
    r.passed = false;
    r.summary += ", over the " + remon::format12(time_limit) + " s budget";
  }
  std::printf("criterion %d %s %s: %s (%.2f s)\n", id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
              r.summary.c_str(), r.seconds);
  if (!r.passed) {
    std::printf("  witness: %s\n", r.witness.c_str());
    ++failures;
  }
  std::fflush(stdout);
}

}  // namespace

int main() {
  const remon::VerifyOptions opt;
  const remon::VerifySizes& sz = opt.sizes;
  auto seed = [&](std::uint64_t stream) { return remon::derive_seed(opt.seed, stream); };

  report(1, remon::check_error_sandwich(sz.sandwich_instances, seed(1)), 60.0);
  report(2, remon::check_pair_chain(sz.chain_instances, sz.chain_trials, seed(2)));
  report(3, remon::check_pairwise_bound(sz.pairwise_draws, seed(3)));
  report(4, remon::check_dp_optimality(sz.dp_brute_instances, seed(4)), 120.0);
  report(5, remon::check_dp_structure(sz.dp_structure_instances, seed(5)));
  report(6, remon::check_allocation_vs_lp(sz.lp_instances, seed(6)));
  report(7, remon::check_rate_contract(sz.rate_instances, seed(7)));
  report(8, remon::check_top_k_example());
  report(9, remon::check_sweep_sanity(sz.sweep_instances, seed(9)));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
