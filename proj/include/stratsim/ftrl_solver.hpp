#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stratsim/types.hpp"

namespace stratsim {

/// Regularization and feasible-region parameters of the log-barrier FTRL step.
template <typename Scalar>
struct FtrlParams {
  Scalar eta;      // entropy weight 1/eta
  Scalar nu;       // log-barrier weight 1/nu
  Scalar epsilon;  // floor of the shrunk simplex

  void validate(Eigen::Index n) const {
    if (!(eta > 0) || !(nu > 0) || !(epsilon > 0) || !std::isfinite(eta) || !std::isfinite(nu)) {
      throw std::invalid_argument("FTRL parameters must be positive and finite");
    }
    if (!(static_cast<Scalar>(n) * epsilon < 1)) throw std::invalid_argument("FTRL needs n * epsilon < 1");
  }
};

/// Minimizer of
///
///   <D, p> + (1/eta) sum_i p_i ln p_i - (1/nu) sum_i ln p_i
///
/// over { p : sum_i p_i = 1, p_i >= epsilon }.
///
/// The objective is separable and strictly convex. For a multiplier lambda on
/// the equality constraint each coordinate solves
///
///   D_i + phi(p_i) + lambda = 0,   phi(p) = (ln p + 1)/eta - 1/(nu p),
///
/// clamped below at epsilon. phi is strictly increasing, so the clamped sum
/// S(lambda) is strictly decreasing and S(lambda) = 1 is found by safeguarded
/// Newton inside a bisection bracket. Coordinates are solved in u = ln p,
/// where phi(e^u) is concave and increasing.
///
/// The solver keeps the last lambda and per-coordinate roots as a warm start;
/// results do not depend on the warm start beyond solver tolerance.
template <typename Scalar>
class LogBarrierFtrl {
 public:
  using Vector = VectorX<Scalar>;

  static constexpr int kMaxOuterIterations = 200;
  static constexpr int kMaxInnerIterations = 200;

  explicit LogBarrierFtrl(FtrlParams<Scalar> params) : params_(params) {}

  const FtrlParams<Scalar>& params() const { return params_; }
  int last_iterations() const { return last_iterations_; }
  Scalar last_multiplier() const { return lambda_; }

  template <typename Derived>
  Vector solve(const Eigen::MatrixBase<Derived>& cumulative) {
    const Eigen::Index n = cumulative.size();
    if (n < 1) throw std::invalid_argument("FTRL needs at least one coordinate");
    params_.validate(n);
    if (!cumulative.allFinite()) throw std::invalid_argument("FTRL cumulative loss must be finite");

    const Vector d = cumulative.template cast<Scalar>();
    if (log_p_.size() != n) {
      log_p_ = Vector::Constant(n, -std::log(static_cast<Scalar>(n)));
      have_lambda_ = false;
    }

    // S(lo) >= 1 >= S(hi): at lo every coordinate is at least 1/n, at hi at most 1/n.
    const Scalar phi_uniform = phi(Scalar(1) / static_cast<Scalar>(n));
    Scalar lo = -d.maxCoeff() - phi_uniform;
    Scalar hi = -d.minCoeff() - phi_uniform;
    Vector p(n);
    Vector slope(n);

    auto evaluate = [&](Scalar lambda, Scalar& sum, Scalar& dsum) {
      sum = 0;
      dsum = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar target = -d[i] - lambda;
        if (phi(params_.epsilon) >= target) {
          p[i] = params_.epsilon;
          slope[i] = 0;
        } else {
          log_p_[i] = solve_coordinate(target, log_p_[i]);
          p[i] = std::exp(log_p_[i]);
          slope[i] = -Scalar(1) / phi_derivative(p[i]);
        }
        sum += p[i];
        dsum += slope[i];
      }
    };

    if (hi - lo <= 0) {
      // All cumulative losses equal: the uniform point is optimal.
      lambda_ = lo;
      have_lambda_ = true;
      last_iterations_ = 0;
      log_p_.setConstant(-std::log(static_cast<Scalar>(n)));
      return Vector::Constant(n, Scalar(1) / static_cast<Scalar>(n));
    }

    Scalar lambda = have_lambda_ && lambda_ > lo && lambda_ < hi ? lambda_ : (lo + hi) / 2;
    const Scalar tol = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
    Scalar previous = std::numeric_limits<Scalar>::infinity();
    for (int it = 1; it <= kMaxOuterIterations; ++it) {
      Scalar sum;
      Scalar dsum;
      evaluate(lambda, sum, dsum);
      const Scalar residual = sum - 1;
      if (std::abs(residual) <= tol) {
        lambda_ = lambda;
        have_lambda_ = true;
        last_iterations_ = it;
        return p;
      }
      if (residual > 0) {
        lo = lambda;
      } else {
        hi = lambda;
      }
      if (hi - lo <= tol * std::max(Scalar(1), std::abs(lambda))) {
        lambda_ = lambda;
        have_lambda_ = true;
        last_iterations_ = it;
        return p;
      }
      // Newton on ln S(lambda), which is close to linear both where the
      // entropy term dominates (S ~ e^{-eta lambda}) and near the root.
      // Bisect whenever the residual failed to halve.
      Scalar next = dsum < 0 ? lambda - std::log(sum) * sum / dsum : (lo + hi) / 2;
      if (!(next > lo && next < hi) || std::abs(residual) > previous / 2) next = (lo + hi) / 2;
      previous = std::abs(residual);
      lambda = next;
    }
    throw std::runtime_error("FTRL multiplier search did not converge");
  }

  Scalar phi(Scalar p) const {
    return (std::log(p) + 1) / params_.eta - Scalar(1) / (params_.nu * p);
  }

  Scalar phi_derivative(Scalar p) const {
    return Scalar(1) / (params_.eta * p) + Scalar(1) / (params_.nu * p * p);
  }

 private:
  // Root u of f(u) = (u + 1)/eta - e^{-u}/nu - target, known to lie above ln(epsilon).
  Scalar solve_coordinate(Scalar target, Scalar guess) const {
    const Scalar eta = params_.eta;
    const Scalar nu = params_.nu;
    auto f = [&](Scalar u) { return (u + 1) / eta - std::exp(-u) / nu - target; };
    Scalar lo = std::log(params_.epsilon);
    // For u >= 0, e^{-u}/nu <= 1/nu, so f >= 0 once (u + 1)/eta >= target + 1/nu.
    Scalar hi = std::max(Scalar(0), eta * (target + Scalar(1) / nu) - 1);
    Scalar u = std::clamp(guess, lo, hi);
    for (int it = 0; it < kMaxInnerIterations; ++it) {
      const Scalar fu = f(u);
      if (fu == 0) return u;
      if (fu < 0) {
        lo = u;
      } else {
        hi = u;
      }
      const Scalar df = Scalar(1) / eta + std::exp(-u) / nu;
      Scalar next = u - fu / df;
      if (!(next > lo && next < hi)) next = (lo + hi) / 2;
      if (std::abs(next - u) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), std::abs(u))) {
        return next;
      }
      u = next;
    }
    return u;
  }

  FtrlParams<Scalar> params_;
  Vector log_p_;
  Scalar lambda_ = 0;
  bool have_lambda_ = false;
  int last_iterations_ = 0;
};

/// One-shot solve without warm start.
template <typename Derived>
VectorX<typename Derived::Scalar> ftrl_solve(const Eigen::MatrixBase<Derived>& cumulative,
                                             FtrlParams<typename Derived::Scalar> params) {
  LogBarrierFtrl<typename Derived::Scalar> solver(params);
  return solver.solve(cumulative);
}

/// Objective value <D, p> + R(p); used by oracles and tests.
template <typename DerivedD, typename DerivedP>
typename DerivedD::Scalar ftrl_objective(const Eigen::MatrixBase<DerivedD>& cumulative,
                                         const Eigen::MatrixBase<DerivedP>& p,
                                         const FtrlParams<typename DerivedD::Scalar>& params) {
  const auto logs = p.array().log();
  return cumulative.dot(p) + (p.array() * logs).sum() / params.eta - logs.sum() / params.nu;
}

}  // namespace stratsim
