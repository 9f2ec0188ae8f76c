#pragma once

// Slow reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "stratsim/ftrl_solver.hpp"

namespace stratsim::oracle {

/// Euclidean projection onto { p : p_i >= eps, sum p = 1 }.
inline Eigen::VectorXd project_shrunk_simplex(const Eigen::VectorXd& v, double eps) {
  const Eigen::Index n = v.size();
  const double budget = 1.0 - static_cast<double>(n) * eps;
  std::vector<double> u(v.data(), v.data() + n);
  for (auto& x : u) x -= eps;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += u[static_cast<std::size_t>(k)];
    const double t = (cumsum - budget) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0) theta = t;
  }
  return ((v.array() - eps - theta).max(0.0) + eps).matrix();
}

inline Eigen::VectorXd ftrl_gradient(const Eigen::VectorXd& d, const Eigen::VectorXd& p, const FtrlParams<double>& prm) {
  return (d.array() + (p.array().log() + 1.0) / prm.eta - 1.0 / (prm.nu * p.array())).matrix();
}

/// Accelerated projected gradient (FISTA) with backtracking on the step and
/// adaptive momentum restart. Extrapolated points are projected back so the
/// objective stays finite.
inline Eigen::VectorXd projected_gradient(const Eigen::VectorXd& d, const FtrlParams<double>& prm,
                                          int iterations = 20000) {
  const Eigen::Index n = d.size();
  const double eps = prm.epsilon;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd y = x;
  double fx = ftrl_objective(d, x, prm);
  double lipschitz = 1.0;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const double fy = ftrl_objective(d, y, prm);
    const Eigen::VectorXd g = ftrl_gradient(d, y, prm);
    Eigen::VectorXd next;
    for (;;) {
      next = project_shrunk_simplex(y - g / lipschitz, eps);
      const Eigen::VectorXd step = next - y;
      if (ftrl_objective(d, next, prm) <= fy + g.dot(step) + 0.5 * lipschitz * step.squaredNorm() + 1e-15) break;
      lipschitz *= 2.0;
    }
    const double fn = ftrl_objective(d, next, prm);
    if (fn > fx) {
      t = 1.0;
      y = x;
      continue;
    }
    const double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    y = project_shrunk_simplex(next + ((t - 1.0) / tn) * (next - x), eps);
    x = next;
    fx = fn;
    t = tn;
    lipschitz *= 0.9;
  }
  return x;
}

/// Exhaustive grid over p_0 in [eps, 1 - eps] for n = 2.
inline Eigen::VectorXd grid_two(const Eigen::Vector2d& d, const FtrlParams<double>& prm, double resolution = 1e-6) {
  double best = std::numeric_limits<double>::infinity();
  double arg = prm.epsilon;
  const double lo = prm.epsilon;
  const double hi = 1.0 - prm.epsilon;
  const auto count = static_cast<long>(std::floor((hi - lo) / resolution));
  for (long k = 0; k <= count; ++k) {
    const double p0 = std::min(hi, lo + static_cast<double>(k) * resolution);
    const Eigen::Vector2d p(p0, 1.0 - p0);
    const double f = ftrl_objective(d, p, prm);
    if (f < best) {
      best = f;
      arg = p0;
    }
  }
  return Eigen::Vector2d(arg, 1.0 - arg);
}

}  // namespace stratsim::oracle
