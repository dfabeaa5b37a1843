#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "remon/kkt.hpp"

namespace remon {

LpPoint lp_oracle(const SystemConfig& cfg, const AlphaTable& alpha, double r) {
  validate_config(cfg);
  const int n = cfg.n_sources;
  if (n > 6) throw std::invalid_argument("lp oracle supports at most 6 sources");
  if (alpha.n_sources() != n) throw std::invalid_argument("alpha table does not match the config");
  if (!(r >= 0.0) || r > full_update_rate(cfg) + 1e-12) {
    throw std::invalid_argument("rate budget is infeasible");
  }

  // Variables x = (s_1..s_N, z_1..z_N). Inequalities G x <= h:
  // -s_n <= 0, -z_n <= 0, d_n - d_{n-1} <= 0 (d_1 <= T).
  const int vars = 2 * n;
  const int rows = 3 * n;
  const double horizon = cfg.horizon;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows, vars);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < n; ++i) {
    g(i, i) = -1.0;
    g(n + i, n + i) = -1.0;
    g(2 * n + i, i) = 1.0;
    g(2 * n + i, n + i) = 1.0;
    if (i == 0) {
      h(2 * n) = horizon;
    } else {
      g(2 * n + i, i - 1) = -1.0;
      g(2 * n + i, n + i - 1) = -1.0;
    }
  }
  Eigen::RowVectorXd eq = Eigen::RowVectorXd::Zero(vars);
  for (int i = 0; i < n; ++i) eq(i) = cfg.source(i + 1).change_rate();
  const double eq_rhs = horizon * r;

  const double feas_tol = 1e-9 * std::max(1.0, horizon);
  LpPoint best;
  best.objective = std::numeric_limits<double>::infinity();

  std::vector<bool> chosen(static_cast<std::size_t>(rows), false);
  std::fill_n(chosen.begin(), vars - 1, true);
  Eigen::MatrixXd system(vars, vars);
  Eigen::VectorXd rhs(vars);
  std::vector<double> s(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n));
  do {
    int k = 0;
    for (int row = 0; row < rows; ++row) {
      if (!chosen[static_cast<std::size_t>(row)]) continue;
      system.row(k) = g.row(row);
      rhs(k) = h(row);
      ++k;
    }
    system.row(k) = eq;
    rhs(k) = eq_rhs;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (lu.rank() < vars) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (((g * x - h).array() > feas_tol).any()) continue;
    if (std::abs(eq.dot(x) - eq_rhs) > feas_tol) continue;

    for (int i = 0; i < n; ++i) {
      s[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
      z[static_cast<std::size_t>(i)] = std::max(0.0, x(n + i));
    }
    const double value = lp_objective(cfg, alpha, s, z);
    if (value < best.objective) best = LpPoint{s, z, value};
  } while (std::prev_permutation(chosen.begin(), chosen.end()));

  if (!std::isfinite(best.objective)) throw std::runtime_error("no feasible vertex found");
  return best;
}

}  // namespace remon
