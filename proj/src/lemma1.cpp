#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "remon/analysis.hpp"

namespace remon {

std::vector<double> concavity_coefficients(std::span<const double> alphas) {
  std::vector<double> c;
  if (alphas.size() < 2) return c;
  c.push_back(4.0 * alphas[1]);
  for (std::size_t i = 2; i < alphas.size(); ++i) {
    if (!(c.back() > 0.0)) break;
    c.push_back(4.0 * alphas[i] * (1.0 - alphas[i] / c.back()));
  }
  if (c.size() != alphas.size() - 1 || !(c.back() > 0.0)) {
    throw std::domain_error("concavity coefficients are not positive for these alphas");
  }
  return c;
}

double fk_closed_form(std::span<const double> alphas, double w) {
  if (alphas.empty()) throw std::invalid_argument("need at least one alpha");
  const double alpha_k = alphas.back();
  if (!(w >= 0.0) || w > alpha_k) {
    throw std::domain_error("w must lie in [0, alpha_k]");
  }
  if (alphas.size() == 1) return 0.0;  // no pairs to count
  const auto c = concavity_coefficients(alphas);
  return w * w / c.back();
}

double fk_numeric_max(std::span<const double> alphas, double w, double grid_resolution) {
  const std::size_t k = alphas.size();
  if (k == 0 || k > 4) throw std::invalid_argument("numeric oracle supports 1 <= k <= 4");
  if (!(grid_resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  for (double a : alphas) {
    if (!(a > 0.0) || a > 1.0) throw std::invalid_argument("alphas must lie in (0, 1]");
  }
  if (!(w >= 0.0)) throw std::domain_error("w must be non-negative");

  // Free coordinates are the prefix sums v_1..v_{k-1}; v_0 = 0 and v_k = w.
  const std::size_t dims = k - 1;
  std::vector<double> v(k + 1, 0.0);
  v[k] = w;
  constexpr double kSlack = 1e-12;

  auto evaluate = [&](double& value) {
    double total = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      const double step = v[i] - v[i - 1];
      if (step < -kSlack) return false;
      const double b = step / alphas[i - 1];
      if (b > 1.0 + kSlack) return false;
      if (v[i - 1] > alphas[i - 1] + kSlack) return false;
      if (i >= 2) total += b * v[i - 1];
    }
    value = total;
    return true;
  };

  if (dims == 0) {
    double value = 0.0;
    if (!evaluate(value)) throw std::domain_error("w is infeasible");
    return value;
  }

  constexpr int kPoints = 41;
  std::vector<double> lo(dims, 0.0), hi(dims, w), best_point(dims, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  double step = w / (kPoints - 1);

  while (true) {
    std::function<void(std::size_t)> sweep = [&](std::size_t d) {
      if (d == dims) {
        double value = 0.0;
        if (evaluate(value) && value > best) {
          best = value;
          for (std::size_t i = 0; i < dims; ++i) best_point[i] = v[i + 1];
        }
        return;
      }
      for (int j = 0; j < kPoints; ++j) {
        const double x = lo[d] + j * step;
        if (x > hi[d] + kSlack) break;
        v[d + 1] = std::min(x, w);
        sweep(d + 1);
      }
    };
    sweep(0);
    if (!std::isfinite(best)) throw std::domain_error("w is infeasible");
    if (step <= grid_resolution || w == 0.0) break;
    // Zoom into a box of +-4 steps around the incumbent.
    const double half = 4.0 * step;
    for (std::size_t i = 0; i < dims; ++i) {
      lo[i] = std::max(0.0, best_point[i] - half);
      hi[i] = std::min(w, best_point[i] + half);
    }
    step = std::max(grid_resolution, 2.0 * half / (kPoints - 1));
  }
  return best;
}

}  // namespace remon
