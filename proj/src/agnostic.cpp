#include "stratsim/agnostic.hpp"

#include <cmath>
#include <stdexcept>

namespace stratsim {

Eigen::Array<bool, Eigen::Dynamic, 1> negative_region(const ManipulationGraph& g, const HypothesisClass& cls,
                                                      VertexId x) {
  Eigen::Array<bool, Eigen::Dynamic, 1> in(static_cast<Eigen::Index>(cls.size()));
  for (std::size_t i = 0; i < cls.size(); ++i) in[static_cast<Eigen::Index>(i)] = labels_all_negative(g, cls[i], x);
  return in;
}

Eigen::VectorXi shifted_loss(const ManipulationGraph& g, const HypothesisClass& cls, VertexId x, Label y) {
  return negative_region(g, cls, x).cast<int>().matrix() * to_int(y);
}

Eigen::VectorXd shifted_loss_estimate(const Eigen::Ref<const Eigen::VectorXd>& p,
                                      const Eigen::Array<bool, Eigen::Dynamic, 1>& in_region, Label y,
                                      bool sampled_in_region) {
  if (p.size() != in_region.size()) throw std::invalid_argument("estimate: size mismatch");
  Eigen::VectorXd estimate = Eigen::VectorXd::Zero(p.size());
  if (!sampled_in_region) return estimate;
  const double q = in_region.select(p.array(), 0.0).sum();
  if (!(q > 0.0)) throw std::logic_error("sampled member lies in R but R has no probability mass");
  estimate = in_region.select(Eigen::ArrayXd::Constant(p.size(), to_int(y) / q), 0.0).matrix();
  return estimate;
}

bool multiplicative_stability(const Eigen::Ref<const Eigen::VectorXd>& prev,
                              const Eigen::Ref<const Eigen::VectorXd>& next, double tol) {
  return prev.size() == next.size() && (next.array() <= 2.0 * prev.array() + tol).all();
}

// ----------------------------------------------------------------------- FTRL

namespace {

FtrlParams<double> default_ftrl_params(std::size_t n, std::size_t horizon, const FtrlOverrides& o) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  const double nd = static_cast<double>(n);
  const double td = static_cast<double>(horizon);
  // n = 1 makes ln n vanish; any positive eta gives the same (unique) point.
  const double eta = n > 1 ? std::sqrt(std::log(nd) / td) : 1.0;
  return {o.eta.value_or(eta), o.nu.value_or(1.0 / 16.0), o.epsilon.value_or(1.0 / (nd * td))};
}

}  // namespace

FtrlLogBarrier::FtrlLogBarrier(GraphPtr graph, ClassPtr cls, std::size_t horizon, FtrlOverrides overrides)
    : graph_(std::move(graph)),
      cls_(std::move(cls)),
      solver_(default_ftrl_params(cls_->size(), horizon, overrides)),
      cumulative_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cls_->size()))) {
  if (graph_->vertex_count() != cls_->vertex_count()) throw std::invalid_argument("graph/class size mismatch");
  p_ = solver_.solve(cumulative_);
}

const ClassifierDistribution& FtrlLogBarrier::announce() {
  if (dirty_) {
    dist_.clear();
    for (std::size_t i = 0; i < cls_->size(); ++i) {
      dist_.add((*cls_)[i], p_[static_cast<Eigen::Index>(i)], static_cast<std::int64_t>(i));
    }
    dirty_ = false;
  }
  return dist_;
}

void FtrlLogBarrier::observe(std::size_t atom, VertexId z, Label y) {
  const auto sampled = static_cast<std::size_t>(dist_[atom].member);
  last_.informative = (*cls_)[sampled](z) == Label::Negative;
  last_.sampled = sampled;
  last_.z = z;
  last_.p_before = p_;
  if (!last_.informative) {
    last_.q = 0.0;
    last_.estimate.setZero(p_.size());
    return;
  }
  // A negative label at z certifies the agent did not move, so z = x_t and
  // the whole region R_t can be reconstructed.
  const auto region = negative_region(*graph_, *cls_, z);
  last_.q = region.select(p_.array(), 0.0).sum();
  last_.estimate = shifted_loss_estimate(p_, region, y, true);
  cumulative_ += last_.estimate;
  p_ = solver_.solve(cumulative_);
  dirty_ = true;
}

void FtrlLogBarrier::audit(const AuditContext& ctx, InvariantLog& log) const {
  log.record("ftrl.stability", multiplicative_stability(last_.p_before, p_, 1e-8));
  log.record("ftrl.simplex", std::abs(p_.sum() - 1.0) <= 1e-9 &&
                                 (p_.array() >= params().epsilon * (1.0 - 1e-12)).all());

  const bool sampled_in_region = labels_all_negative(ctx.graph, ctx.cls[last_.sampled], ctx.agent.x);
  log.record("ftrl.region_detection", last_.informative == (sampled_in_region && last_.z == ctx.agent.x));
  if (last_.informative) {
    const double second = (last_.p_before.array() * last_.estimate.array().square()).sum();
    log.record("ftrl.second_moment", std::abs(second - 1.0 / last_.q) <= 1e-9 * (1.0 / last_.q));
  }
}

// ----------------------------------------------------------------------- EXP3

Exp3::Exp3(ClassPtr cls, std::size_t horizon, std::optional<double> rate) : cls_(std::move(cls)) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  const double n = static_cast<double>(cls_->size());
  rate_ = rate.value_or(std::sqrt(std::log(n) / (n * static_cast<double>(horizon))));
  log_weights_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cls_->size()));
  refresh();
}

void Exp3::refresh() {
  const double top = log_weights_.maxCoeff();
  p_ = (log_weights_.array() - top).exp().matrix();
  p_ /= p_.sum();
  dirty_ = true;
}

const ClassifierDistribution& Exp3::announce() {
  if (dirty_) {
    dist_.clear();
    for (std::size_t i = 0; i < cls_->size(); ++i) {
      dist_.add((*cls_)[i], p_[static_cast<Eigen::Index>(i)], static_cast<std::int64_t>(i));
    }
    dirty_ = false;
  }
  return dist_;
}

void Exp3::update(std::size_t sampled, int observed_loss) {
  if (observed_loss == 0) return;
  const auto i = static_cast<Eigen::Index>(sampled);
  log_weights_[i] -= rate_ * observed_loss / p_[i];
  refresh();
}

void Exp3::observe(std::size_t atom, VertexId z, Label y) {
  const auto sampled = static_cast<std::size_t>(dist_[atom].member);
  update(sampled, (*cls_)[sampled](z) != y ? 1 : 0);
}

// ---------------------------------------------------------- explore-positive

ExplorePositiveHedge::ExplorePositiveHedge(GraphPtr graph, ClassPtr cls, std::size_t horizon,
                                           std::optional<double> rho, std::optional<double> rate)
    : graph_(std::move(graph)),
      cls_(std::move(cls)),
      all_positive_(Hypothesis::constant(cls_->vertex_count(), Label::Positive)) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  const double td = static_cast<double>(horizon);
  rho_ = rho.value_or(std::pow(td, -0.25));
  if (!(rho_ > 0.0 && rho_ <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  rate_ = rate.value_or(std::sqrt(std::log(static_cast<double>(cls_->size())) / (rho_ * td)));
  log_weights_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cls_->size()));
  hedge_ = Eigen::VectorXd::Constant(log_weights_.size(), 1.0 / static_cast<double>(cls_->size()));
}

const ClassifierDistribution& ExplorePositiveHedge::announce() {
  if (dirty_) {
    dist_.clear();
    dist_.add(all_positive_, rho_);
    for (std::size_t i = 0; i < cls_->size(); ++i) {
      dist_.add((*cls_)[i], (1.0 - rho_) * hedge_[static_cast<Eigen::Index>(i)], static_cast<std::int64_t>(i));
    }
    dirty_ = false;
  }
  return dist_;
}

void ExplorePositiveHedge::observe(std::size_t atom, VertexId z, Label y) {
  last_ = {};
  if (dist_[atom].classifier != &all_positive_) return;
  last_ = {true, z};
  ++explorations_;
  for (std::size_t i = 0; i < cls_->size(); ++i) {
    log_weights_[static_cast<Eigen::Index>(i)] -= rate_ * strategic_loss(*graph_, (*cls_)[i], z, y);
  }
  const double top = log_weights_.maxCoeff();
  hedge_ = (log_weights_.array() - top).exp().matrix();
  hedge_ /= hedge_.sum();
  dirty_ = true;
}

void ExplorePositiveHedge::audit(const AuditContext& ctx, InvariantLog& log) const {
  if (last_.explored) log.record("explore_positive.no_manipulation", last_.z == ctx.agent.x);
}

}  // namespace stratsim
