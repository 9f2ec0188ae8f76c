#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stratsim/ftrl_solver.hpp"
#include "stratsim/learner.hpp"
#include "stratsim/realizable.hpp"

namespace stratsim {

/// Membership mask of R = { i : h^i labels all of N[x] negative }.
Eigen::Array<bool, Eigen::Dynamic, 1> negative_region(const ManipulationGraph& g, const HypothesisClass& cls,
                                                      VertexId x);

/// d(i) = y * 1{h^i in R}: strategic loss shifted by 1{y = -1}.
Eigen::VectorXi shifted_loss(const ManipulationGraph& g, const HypothesisClass& cls, VertexId x, Label y);

/// Importance-weighted estimate supported on R:
///   d_hat(i) = 1{sampled in R} 1{i in R} y / q,   q = sum_{i in R} p(i).
/// Throws if the sampled member is in R but q is not positive.
Eigen::VectorXd shifted_loss_estimate(const Eigen::Ref<const Eigen::VectorXd>& p,
                                      const Eigen::Array<bool, Eigen::Dynamic, 1>& in_region, Label y,
                                      bool sampled_in_region);

/// True iff next(i) <= 2 prev(i) + tol for every i.
bool multiplicative_stability(const Eigen::Ref<const Eigen::VectorXd>& prev,
                              const Eigen::Ref<const Eigen::VectorXd>& next, double tol = 1e-8);

struct FtrlOverrides {
  std::optional<double> eta;
  std::optional<double> nu;
  std::optional<double> epsilon;
};

/// Proper agnostic learner: FTRL with entropy plus log-barrier regularizer
/// over the epsilon-shrunk simplex, fed the shifted-loss estimate. Defaults:
/// eta = sqrt(ln n / T), nu = 1/16, epsilon = 1/(nT).
class FtrlLogBarrier final : public Learner {
 public:
  FtrlLogBarrier(GraphPtr graph, ClassPtr cls, std::size_t horizon, FtrlOverrides overrides = {});

  std::string name() const override { return "ftrl"; }
  const ClassifierDistribution& announce() override;
  void observe(std::size_t atom, VertexId z, Label y) override;
  void audit(const AuditContext& ctx, InvariantLog& log) const override;

  const FtrlParams<double>& params() const { return solver_.params(); }
  const Eigen::VectorXd& probabilities() const { return p_; }
  const Eigen::VectorXd& cumulative() const { return cumulative_; }

  struct RoundDiagnostics {
    bool informative = false;  // sampled member labeled z negative
    std::size_t sampled = 0;
    VertexId z = 0;
    double q = 0.0;
    Eigen::VectorXd p_before;
    Eigen::VectorXd estimate;
  };
  const RoundDiagnostics& last_round() const { return last_; }

 private:
  GraphPtr graph_;
  ClassPtr cls_;
  LogBarrierFtrl<double> solver_;
  Eigen::VectorXd cumulative_;
  Eigen::VectorXd p_;
  ClassifierDistribution dist_;
  bool dirty_ = true;
  RoundDiagnostics last_;
};

/// Bandit baseline: loss-based EXP3 with importance-weighted loss
/// loss / p(sampled) and rate sqrt(ln n / (n T)). No uniform mixing.
class Exp3 final : public Learner {
 public:
  Exp3(ClassPtr cls, std::size_t horizon, std::optional<double> rate = {});

  std::string name() const override { return "exp3"; }
  const ClassifierDistribution& announce() override;
  void observe(std::size_t atom, VertexId z, Label y) override;

  double rate() const { return rate_; }
  const Eigen::VectorXd& probabilities() const { return p_; }
  const Eigen::VectorXd& log_weights() const { return log_weights_; }

  /// Weight update for an observed 0/1 loss of the sampled member.
  void update(std::size_t sampled, int observed_loss);

 private:
  void refresh();

  ClassPtr cls_;
  double rate_;
  Eigen::VectorXd log_weights_;
  Eigen::VectorXd p_;
  ClassifierDistribution dist_;
  bool dirty_ = true;
};

/// Improper baseline: plays h+ with probability rho (default T^{-1/4}); those
/// rounds reveal x_t, so every member's strategic loss feeds a Hedge
/// aggregator with rate sqrt(ln n / (rho T)). Other rounds sample from Hedge
/// and do not update.
class ExplorePositiveHedge final : public Learner {
 public:
  ExplorePositiveHedge(GraphPtr graph, ClassPtr cls, std::size_t horizon, std::optional<double> rho = {},
                       std::optional<double> rate = {});

  std::string name() const override { return "explore_positive"; }
  const ClassifierDistribution& announce() override;
  void observe(std::size_t atom, VertexId z, Label y) override;
  void audit(const AuditContext& ctx, InvariantLog& log) const override;

  double rho() const { return rho_; }
  double rate() const { return rate_; }
  const Eigen::VectorXd& hedge_probabilities() const { return hedge_; }
  std::size_t exploration_rounds() const { return explorations_; }

 private:
  GraphPtr graph_;
  ClassPtr cls_;
  double rho_;
  double rate_;
  Hypothesis all_positive_;
  Eigen::VectorXd log_weights_;
  Eigen::VectorXd hedge_;
  ClassifierDistribution dist_;
  bool dirty_ = true;
  std::size_t explorations_ = 0;
  struct LastRound {
    bool explored = false;
    VertexId z = 0;
  } last_;
};

}  // namespace stratsim
