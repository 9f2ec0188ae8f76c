#include "stratsim/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stratsim {

namespace {

// True iff some positive vertex lies in [lo, hi].
bool positive_in(std::span<const VertexId> positives, VertexId lo, VertexId hi) {
  auto it = std::lower_bound(positives.begin(), positives.end(), lo);
  return it != positives.end() && *it <= hi;
}

double erring_mass(const ManipulationGraph& g, const ClassifierDistribution& d, Agent agent) {
  double mass = 0.0;
  for (const auto& a : d.atoms()) {
    if (strategic_loss(g, *a.classifier, agent.x, agent.y) == 1) mass += a.mass;
  }
  return mass;
}

// Member whose restriction to each component is the singleton at p_{hidden[b]}.
std::optional<std::size_t> find_realizing_member(const HypothesisClass& cls, const std::vector<Figure1Layout>& copies,
                                                 const std::vector<std::size_t>& hidden) {
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const auto pos = cls[i].positives();
    bool match = true;
    for (std::size_t b = 0; b < copies.size() && match; ++b) {
      const auto& f = copies[b];
      auto lo = std::lower_bound(pos.begin(), pos.end(), f.u(0));
      auto hi = std::upper_bound(pos.begin(), pos.end(), f.sink());
      match = hi - lo == 1 && *lo == f.p(hidden[b]);
    }
    if (match) return i;
  }
  return std::nullopt;
}

std::size_t realizing_member(const Instance& inst, const std::vector<Figure1Layout>& copies,
                             const std::vector<std::size_t>& hidden) {
  auto i = find_realizing_member(*inst.cls, copies, hidden);
  if (!i) throw std::invalid_argument("class has no member realizing the hidden index");
  return *i;
}

const Figure1Layout& single_component(const Instance& inst) {
  if (inst.figure1.size() != 1) {
    throw std::invalid_argument("adversary needs exactly one hidden-index component, instance has " +
                                std::to_string(inst.figure1.size()));
  }
  return inst.figure1.front();
}

}  // namespace

SetMembership classify_sets(const Hypothesis& f, const Figure1Layout& layout) {
  const auto pos = f.positives();
  const std::size_t n = layout.n;
  SetMembership m;
  m.a = positive_in(pos, layout.u(0), layout.u(n - 1)) || f(layout.left()) == Label::Positive;
  m.b = f(layout.right()) == Label::Positive || f(layout.sink()) == Label::Positive;
  m.c = !m.b && !positive_in(pos, layout.p(0), layout.p(n - 1));
  return m;
}

std::optional<std::size_t> smallest_positive_p(const Hypothesis& f, const Figure1Layout& layout) {
  const auto pos = f.positives();
  auto it = std::lower_bound(pos.begin(), pos.end(), layout.p(0));
  if (it == pos.end() || *it > layout.p(layout.n - 1)) return std::nullopt;
  return static_cast<std::size_t>(*it - layout.p(0));
}

double lower_bound_gamma(std::size_t horizon, double scale) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("gamma scale must be positive");
  return std::min(1.0, scale / std::sqrt(static_cast<double>(horizon)));
}

std::size_t lower_bound_tau(std::size_t n, std::size_t horizon) {
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(horizon)) / 6.0));
  return std::min({n / 2, root, horizon / 2});
}

// ------------------------------------------------------------------- general

GeneralAdversary::GeneralAdversary(GraphPtr graph, Figure1Layout layout, std::size_t hidden, double gamma,
                                   std::optional<std::size_t> target)
    : graph_(std::move(graph)), layout_(layout), hidden_(hidden), gamma_(gamma), target_(target) {
  if (layout_.n < 2) throw std::invalid_argument("hidden-index component needs n >= 2");
  if (hidden_ >= layout_.n) throw std::invalid_argument("hidden index out of range");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (layout_.sink() >= graph_->vertex_count()) throw std::invalid_argument("component exceeds the graph");
}

Agent GeneralAdversary::respond(const ClassifierDistribution& announced) {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  for (const auto& atom : announced.atoms()) {
    const auto m = classify_sets(*atom.classifier, layout_);
    if (m.a) a += atom.mass;
    if (m.b) b += atom.mass;
    if (m.c) c += atom.mass;
  }
  if (a >= gamma_) {
    last_case_ = Case::LeftNegative;
    return {layout_.left(), Label::Negative};
  }
  if (b >= gamma_) {
    last_case_ = Case::SinkNegative;
    return {layout_.sink(), Label::Negative};
  }
  if (c >= gamma_) {
    last_case_ = Case::RightPositive;
    return {layout_.right(), Label::Positive};
  }
  last_case_ = Case::Hidden;
  return {layout_.u(hidden_), Label::Negative};
}

Agent GeneralAdversary::next(const ClassifierDistribution& announced, std::size_t, Rng&) {
  announced.validate();
  return respond(announced);
}

void GeneralAdversary::audit(const RoundView& view, InvariantLog& log) const {
  if (last_case_ != Case::Hidden) {
    log.record("general_adversary.case_mass",
               erring_mass(*graph_, view.announced, view.agent) >= gamma_ * (1.0 - 1e-12));
    return;
  }
  const auto m = classify_sets(view.sampled, layout_);
  if (!m.good()) return;
  const auto k = smallest_positive_p(view.sampled, layout_);
  if (k && *k != hidden_) {
    log.record("general_adversary.hidden_trap", view.outcome.landed == layout_.p(*k) && view.loss == 1);
  }
}

// --------------------------------------------------------------------- block

BlockAdversary::BlockAdversary(GraphPtr graph, std::vector<Figure1Layout> copies, std::vector<std::size_t> hidden,
                               std::size_t horizon, double gamma_scale)
    : hidden_(std::move(hidden)), horizon_(horizon) {
  if (copies.empty() || copies.size() != hidden_.size()) throw std::invalid_argument("one hidden index per copy");
  if (horizon_ == 0) throw std::invalid_argument("horizon must be positive");
  const std::size_t d = copies.size();
  target_ = 0;
  for (std::size_t b = 0; b < d; ++b) {
    // Block b starts at the first t with t d >= b T.
    const std::size_t start = (b * horizon_ + d - 1) / d;
    const std::size_t stop = ((b + 1) * horizon_ + d - 1) / d;
    const std::size_t length = std::max<std::size_t>(stop - start, 1);
    blocks_.emplace_back(graph, copies[b], hidden_[b], lower_bound_gamma(length, gamma_scale));
    target_ = target_ * copies[b].n + hidden_[b];
  }
}

std::size_t BlockAdversary::block_of(std::size_t round) const {
  return std::min(blocks_.size() - 1, round * blocks_.size() / horizon_);
}

Agent BlockAdversary::next(const ClassifierDistribution& announced, std::size_t round, Rng& rng) {
  active_ = block_of(round);
  return blocks_[active_].next(announced, round, rng);
}

void BlockAdversary::audit(const RoundView& view, InvariantLog& log) const { blocks_[active_].audit(view, log); }

// ---------------------------------------------------------------- stochastic

StochasticAdversary::StochasticAdversary(std::vector<VertexId> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("stochastic adversary needs at least one point");
}

Agent StochasticAdversary::next(const ClassifierDistribution&, std::size_t, Rng& rng) {
  const VertexId x = points_[uniform_index(rng, points_.size())];
  const Label y = (rng() >> 63) != 0 ? Label::Positive : Label::Negative;
  return {x, y};
}

// ---------------------------------------------------------------- realizable

RandomRealizableAdversary::RandomRealizableAdversary(GraphPtr graph, ClassPtr cls, std::size_t target,
                                                     std::optional<std::uint64_t> sequence_seed)
    : graph_(std::move(graph)), cls_(std::move(cls)), target_(target) {
  if (target_ >= cls_->size()) throw std::invalid_argument("target index out of range");
  if (sequence_seed) own_.emplace(make_stream(*sequence_seed, 1, StreamRole::Adversary));
}

Agent RandomRealizableAdversary::next(const ClassifierDistribution&, std::size_t, Rng& rng) {
  Rng& r = own_ ? *own_ : rng;
  const auto x = static_cast<VertexId>(uniform_index(r, graph_->vertex_count()));
  const auto& h = (*cls_)[target_];
  return {x, h(best_response(*graph_, h, x).landed)};
}

// ------------------------------------------------------------------- factory

std::string default_adversary(const Instance& inst) {
  if (inst.builder == "figure1") return "general";
  if (inst.builder == "d_copies") return "d_copies";
  if (inst.builder == "composite") return "composite";
  if (inst.builder == "stochastic") return "stochastic";
  return "random_realizable";
}

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const Instance& inst, std::size_t horizon,
                                          Rng& rng) {
  const std::string name = spec.name.empty() ? default_adversary(inst) : spec.name;

  if (name == "general" || name == "proper" ||
      (name == "composite" && inst.arm == CompositeArm::Realizable)) {
    if (name == "composite" && inst.figure1.empty()) throw std::invalid_argument("composite instance lacks G1");
    const auto& layout = name == "composite" ? inst.figure1.front() : single_component(inst);
    const auto hidden = static_cast<std::size_t>(uniform_index(rng, layout.n));
    const auto target = realizing_member(inst, {layout}, {hidden});
    if (name == "proper") {
      if (target != hidden) throw std::invalid_argument("proper adversary needs members indexed by hidden index");
      return std::make_unique<ProperAdversary>(layout, hidden);
    }
    return std::make_unique<GeneralAdversary>(inst.graph, layout, hidden, lower_bound_gamma(horizon, spec.gamma_scale),
                                              target);
  }
  if (name == "d_copies") {
    if (inst.figure1.empty()) throw std::invalid_argument("d_copies adversary needs hidden-index components");
    std::vector<std::size_t> hidden;
    for (const auto& f : inst.figure1) hidden.push_back(static_cast<std::size_t>(uniform_index(rng, f.n)));
    auto adv = std::make_unique<BlockAdversary>(inst.graph, inst.figure1, hidden, horizon, spec.gamma_scale);
    if (realizing_member(inst, inst.figure1, hidden) != *adv->target()) {
      throw std::invalid_argument("d_copies adversary needs the product class ordering");
    }
    return adv;
  }
  if (name == "stochastic" || name == "composite") {
    std::vector<VertexId> points = inst.isolated;
    if (points.empty()) {
      if (inst.graph->edge_count() != 0) throw std::invalid_argument("stochastic adversary needs isolated points");
      points.resize(inst.graph->vertex_count());
      for (std::size_t v = 0; v < points.size(); ++v) points[v] = static_cast<VertexId>(v);
    }
    return std::make_unique<StochasticAdversary>(std::move(points));
  }
  if (name == "random_realizable") {
    std::size_t target;
    if (spec.target) {
      target = *spec.target;
    } else if (spec.sequence_seed) {
      Rng seq = make_stream(*spec.sequence_seed, 0, StreamRole::Adversary);
      target = static_cast<std::size_t>(uniform_index(seq, inst.cls->size()));
    } else {
      target = static_cast<std::size_t>(uniform_index(rng, inst.cls->size()));
    }
    return std::make_unique<RandomRealizableAdversary>(inst.graph, inst.cls, target, spec.sequence_seed);
  }
  throw std::invalid_argument("unknown adversary '" + name + "'");
}

}  // namespace stratsim
