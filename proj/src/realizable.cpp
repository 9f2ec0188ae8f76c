#include "stratsim/realizable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stratsim {

double uniform_mix_probability(std::size_t n, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  return std::min(1.0, std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(horizon)));
}

double expert_mix_probability(int mistake_bound, std::size_t max_degree, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  const double delta = static_cast<double>(std::max<std::size_t>(max_degree, 1));
  return std::min(1.0, std::sqrt(mistake_bound * std::log(2.0 * delta) / static_cast<double>(horizon)));
}

namespace {

double checked_probability(std::optional<double> p, double fallback) {
  const double v = p.value_or(fallback);
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("exploration probability must lie in [0, 1]");
  return v;
}

void check_compatible(const ManipulationGraph& g, const HypothesisClass& c) {
  if (g.vertex_count() != c.vertex_count()) {
    throw std::invalid_argument("class labels " + std::to_string(c.vertex_count()) + " vertices, graph has " +
                                std::to_string(g.vertex_count()));
  }
}

}  // namespace

// ---------------------------------------------------------------- Uniform-Mix

UniformMix::UniformMix(GraphPtr graph, ClassPtr cls, std::size_t horizon, std::optional<double> explore_probability)
    : graph_(std::move(graph)),
      cls_(std::move(cls)),
      p_(checked_probability(explore_probability, uniform_mix_probability(cls_->size(), horizon))),
      all_positive_(Hypothesis::constant(cls_->vertex_count(), Label::Positive)),
      version_(full_version(*cls_)) {
  check_compatible(*graph_, *cls_);
}

const ClassifierDistribution& UniformMix::announce() {
  if (version_.empty()) throw std::logic_error("Uniform-Mix version space is empty: sequence not realizable");
  if (dirty_) {
    dist_.clear();
    dist_.add(all_positive_, p_);
    const double each = (1.0 - p_) / static_cast<double>(version_.size());
    for (auto i : version_) dist_.add((*cls_)[i], each, i);
    dirty_ = false;
  }
  return dist_;
}

void UniformMix::observe(std::size_t atom, VertexId z, Label y) {
  update(dist_[atom].classifier == &all_positive_, z, y);
}

void UniformMix::update(bool played_all_positive, VertexId z, Label y) {
  last_ = {};
  if (!played_all_positive) return;
  last_.explored = true;
  last_.before = version_;
  std::erase_if(version_, [&](std::uint32_t i) { return strategic_loss(*graph_, (*cls_)[i], z, y) == 1; });
  dirty_ = true;
}

void UniformMix::audit(const AuditContext& ctx, InvariantLog& log) const {
  if (ctx.target) {
    log.record("uniform_mix.target_survives", std::binary_search(version_.begin(), version_.end(),
                                                                 static_cast<std::uint32_t>(*ctx.target)));
  }
  if (last_.explored) {
    // |V_{t+1}| = (1 - delta_t)|V_t| with delta_t measured at the true agent.
    const auto erring = std::count_if(last_.before.begin(), last_.before.end(), [&](std::uint32_t i) {
      return strategic_loss(ctx.graph, ctx.cls[i], ctx.agent.x, ctx.agent.y) == 1;
    });
    log.record("uniform_mix.shrink_identity",
               version_.size() == last_.before.size() - static_cast<std::size_t>(erring));
  }
}

// ----------------------------------------------------------------- Expert-Mix

double replay_weight(const Expert& e) {
  double w = 1.0;
  for (const auto& s : e.lineage) {
    w = s.y == Label::Negative ? w / 2.0 : w / (2.0 * static_cast<double>(s.neighborhood_size));
  }
  return w;
}

ExpertMix::ExpertMix(GraphPtr graph, ClassPtr cls, std::size_t horizon, std::optional<double> explore_probability)
    : graph_(std::move(graph)),
      cls_(std::move(cls)),
      oracle_(std::make_shared<LittlestoneOracle>(cls_)),
      mistake_bound_(oracle_->dimension(full_version(*cls_))),
      max_degree_(stratsim::max_degree(*graph_)),
      p_(checked_probability(explore_probability, expert_mix_probability(mistake_bound_, max_degree_, horizon))),
      all_positive_(Hypothesis::constant(cls_->vertex_count(), Label::Positive)) {
  check_compatible(*graph_, *cls_);
  Expert root{SoaState(oracle_), nullptr, 1.0, {}};
  root.deployed = std::make_shared<const Hypothesis>(root.soa.hypothesis());
  experts_.push_back(std::move(root));
}

double ExpertMix::total_weight() const {
  double total = 0.0;
  for (const auto& e : experts_) total += e.weight;
  return total;
}

const ClassifierDistribution& ExpertMix::announce() {
  if (dirty_) {
    dist_.clear();
    dist_.add(all_positive_, p_);
    const double total = total_weight();
    for (const auto& e : experts_) dist_.add(*e.deployed, (1.0 - p_) * e.weight / total);
    dirty_ = false;
  }
  return dist_;
}

void ExpertMix::observe(std::size_t atom, VertexId z, Label y) {
  update(dist_[atom].classifier == &all_positive_, z, y);
}

Expert ExpertMix::spawn(const Expert& parent, VertexId x, Label y, double factor, std::size_t nbhd) const {
  Expert child{parent.soa.fed(x, y), nullptr, parent.weight * factor, parent.lineage};
  child.lineage.push_back({x, y, nbhd});
  child.deployed = std::make_shared<const Hypothesis>(child.soa.hypothesis());
  return child;
}

void ExpertMix::update(bool played_all_positive, VertexId z, Label y) {
  last_ = {};
  if (!played_all_positive) return;

  // h+ was played, so the agent did not move: z = x_t.
  const VertexId xt = z;
  const auto nbhd = graph_->closed_neighborhood(xt);
  last_.explored = true;
  last_.weight_before = total_weight();

  std::vector<Expert> next;
  next.reserve(experts_.size());
  double erring_weight = 0.0;
  for (auto& e : experts_) {
    if (strategic_loss(*graph_, *e.deployed, xt, y) == 0) {
      next.push_back(std::move(e));
      continue;
    }
    erring_weight += e.weight;
    if (y == Label::Negative) {
      // Erring on (x_t, -1) means the expert labels some vertex of N[x_t] positive.
      const auto it = std::find_if(nbhd.begin(), nbhd.end(), [&](VertexId v) { return (*e.deployed)(v) == Label::Positive; });
      if (e.soa.consistent_with(*it, Label::Negative)) {
        next.push_back(spawn(e, *it, Label::Negative, 0.5, nbhd.size()));
      } else {
        last_.dropped_weight += e.weight / 2.0;
        ++last_.dropped_children;
      }
    } else {
      const double factor = 1.0 / (2.0 * static_cast<double>(nbhd.size()));
      for (VertexId v : nbhd) {
        if (e.soa.consistent_with(v, Label::Positive)) {
          next.push_back(spawn(e, v, Label::Positive, factor, nbhd.size()));
        } else {
          last_.dropped_weight += e.weight * factor;
          ++last_.dropped_children;
        }
      }
    }
  }

  // Merge experts with identical histories.
  std::map<std::vector<std::pair<VertexId, int>>, std::size_t> seen;
  std::vector<Expert> merged;
  merged.reserve(next.size());
  for (auto& e : next) {
    std::vector<std::pair<VertexId, int>> key;
    key.reserve(e.soa.history().size());
    for (const auto& ex : e.soa.history()) key.emplace_back(ex.x, to_int(ex.y));
    auto [it, inserted] = seen.try_emplace(std::move(key), merged.size());
    if (inserted) {
      merged.push_back(std::move(e));
    } else {
      merged[it->second].weight += e.weight;
    }
  }
  experts_ = std::move(merged);
  if (experts_.empty()) throw std::logic_error("Expert-Mix lost every expert: sequence not realizable by the class");

  forcing_cache_.reset();
  last_.delta = last_.weight_before > 0.0 ? erring_weight / last_.weight_before : 0.0;
  last_.weight_after = total_weight();
  dirty_ = true;
}

bool ExpertMix::has_realizable_forcing_expert(const Hypothesis& target) const {
  for (const auto& e : experts_) {
    const auto& hist = e.soa.history();
    if (!std::all_of(hist.begin(), hist.end(), [&](const Example& ex) { return target(ex.x) == ex.y; })) continue;
    SoaState replay(oracle_);
    bool forcing = true;
    for (const auto& ex : hist) {
      if (replay.predict(ex.x) == ex.y) {
        forcing = false;
        break;
      }
      replay = replay.fed(ex.x, ex.y);
    }
    if (forcing) return true;
  }
  return false;
}

void ExpertMix::audit(const AuditContext& ctx, InvariantLog& log) const {
  constexpr double kTol = 1e-12;
  if (last_.explored) {
    const double expected = last_.weight_before * (1.0 - last_.delta / 2.0);
    log.record("expert_mix.weight_identity", std::abs(last_.weight_after + last_.dropped_weight - expected) <= kTol);
    log.record("expert_mix.weight_upper_bound", last_.weight_after <= expected + kTol);
    if (last_.dropped_children == 0) {
      log.record("expert_mix.weight_identity_strict", std::abs(last_.weight_after - expected) <= kTol);
    }
  }
  bool replay_ok = true;
  bool positive = true;
  for (const auto& e : experts_) {
    positive = positive && e.weight > 0.0;
    replay_ok = replay_ok && std::abs(e.weight - replay_weight(e)) <= kTol * std::max(1.0, e.weight);
  }
  log.record("expert_mix.weight_replay", replay_ok);
  log.record("expert_mix.weight_positive", positive);
  if (ctx.target) {
    if (!forcing_cache_) forcing_cache_ = has_realizable_forcing_expert(ctx.cls[*ctx.target]);
    log.record("expert_mix.realizable_expert", *forcing_cache_);
  }
}

double ExpertMix::weight_floor() const {
  return std::pow(2.0 * static_cast<double>(std::max<std::size_t>(max_degree_, 1)), -mistake_bound_);
}

double ExpertMix::neighborhood_weight_floor() const {
  return std::pow(2.0 * static_cast<double>(max_degree_ + 1), -mistake_bound_);
}

void ExpertMix::finish(const AuditContext&, InvariantLog& log) const {
  // Relative slack for products of factors that equal the floor exactly.
  constexpr double kRel = 1e-12;
  const double w = total_weight();
  log.record("expert_mix.weight_floor", w >= weight_floor() * (1.0 - kRel));
  log.record("expert_mix.weight_floor_neighborhood", w >= neighborhood_weight_floor() * (1.0 - kRel));
}

// ---------------------------------------------------------------------- naive

NaiveDeterministic::NaiveDeterministic(ClassPtr cls) : cls_(std::move(cls)) {}

const ClassifierDistribution& NaiveDeterministic::announce() {
  if (cursor_ >= cls_->size()) throw std::logic_error("naive learner exhausted the class: sequence not realizable");
  dist_.clear();
  dist_.add((*cls_)[cursor_], 1.0, static_cast<std::int64_t>(cursor_));
  return dist_;
}

void NaiveDeterministic::observe(std::size_t atom, VertexId z, Label y) {
  if ((*dist_[atom].classifier)(z) != y) ++cursor_;
}

bool combined_prefers_uniform_mix(std::size_t n, std::size_t horizon) {
  return std::sqrt(static_cast<double>(horizon) * std::log(static_cast<double>(n))) <= static_cast<double>(n);
}

std::unique_ptr<Learner> make_combined_min_learner(GraphPtr graph, ClassPtr cls, std::size_t horizon) {
  if (combined_prefers_uniform_mix(cls->size(), horizon)) {
    return std::make_unique<UniformMix>(std::move(graph), std::move(cls), horizon);
  }
  return std::make_unique<NaiveDeterministic>(std::move(cls));
}

}  // namespace stratsim
