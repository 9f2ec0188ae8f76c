#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stratsim/learner.hpp"
#include "stratsim/littlestone.hpp"

namespace stratsim {

using GraphPtr = std::shared_ptr<const ManipulationGraph>;

/// p = min{1, sqrt(ln n / T)}.
double uniform_mix_probability(std::size_t n, std::size_t horizon);

/// p = min{1, sqrt(M ln(2 Delta) / T)}; Delta is floored at 1.
double expert_mix_probability(int mistake_bound, std::size_t max_degree, std::size_t horizon);

/// Randomized learner for finite classes: with probability p plays the
/// all-positive classifier h+ (the agent never moves, so every member's
/// strategic loss is observable) and removes erring members from the version
/// space; otherwise plays a uniform member of the version space.
class UniformMix final : public Learner {
 public:
  UniformMix(GraphPtr graph, ClassPtr cls, std::size_t horizon, std::optional<double> explore_probability = {});

  std::string name() const override { return "uniform_mix"; }
  const ClassifierDistribution& announce() override;
  void observe(std::size_t atom, VertexId z, Label y) override;
  void audit(const AuditContext& ctx, InvariantLog& log) const override;

  double explore_probability() const { return p_; }
  const VersionSpace& version() const { return version_; }
  const Hypothesis& all_positive() const { return all_positive_; }

  /// Version-space update given which classifier was played. On an
  /// exploration round z = x_t; otherwise the version space is unchanged.
  void update(bool played_all_positive, VertexId z, Label y);

 private:
  GraphPtr graph_;
  ClassPtr cls_;
  double p_;
  Hypothesis all_positive_;
  VersionSpace version_;
  ClassifierDistribution dist_;
  bool dirty_ = true;

  struct LastRound {
    bool explored = false;
    VersionSpace before;
  } last_;
};

/// One weighted expert: an SOA instance fed a sequence of mistake-forcing
/// examples. `lineage` records the per-spawn weight factors' inputs.
struct Expert {
  struct Spawn {
    VertexId x;
    Label y;
    std::size_t neighborhood_size;  // |N[x_t]| of the spawning round
  };

  SoaState soa;
  std::shared_ptr<const Hypothesis> deployed;
  double weight = 1.0;
  std::vector<Spawn> lineage;

  std::size_t sequence_length() const { return soa.history().size(); }
};

/// Product of the per-spawn factors: 1/2 for y = -1, 1/(2|N[x_t]|) for y = +1.
double replay_weight(const Expert& e);

/// Randomized learner driven by a pool of SOA experts. Exploration rounds
/// play h+ and replace every erring expert by mistake-forcing children that
/// carry half its weight in total.
class ExpertMix final : public Learner {
 public:
  ExpertMix(GraphPtr graph, ClassPtr cls, std::size_t horizon, std::optional<double> explore_probability = {});

  std::string name() const override { return "expert_mix"; }
  const ClassifierDistribution& announce() override;
  void observe(std::size_t atom, VertexId z, Label y) override;
  void audit(const AuditContext& ctx, InvariantLog& log) const override;
  void finish(const AuditContext& ctx, InvariantLog& log) const override;

  double explore_probability() const { return p_; }
  int mistake_bound() const { return mistake_bound_; }
  std::size_t max_degree() const { return max_degree_; }
  const std::vector<Expert>& experts() const { return experts_; }
  double total_weight() const;
  const Hypothesis& all_positive() const { return all_positive_; }

  /// Expert-pool update given which classifier was played.
  void update(bool played_all_positive, VertexId z, Label y);

  /// (2 max{Delta, 1})^{-Ldim}.
  double weight_floor() const;

  /// (2 (Delta + 1))^{-Ldim}: every y = +1 spawn divides by |N[x_t]| <= Delta + 1,
  /// so this floor holds on every realizable run.
  double neighborhood_weight_floor() const;

  /// True iff some expert's fed sequence is labeled consistently by `target`
  /// and forces an SOA mistake at every step.
  bool has_realizable_forcing_expert(const Hypothesis& target) const;

  struct RoundDiagnostics {
    bool explored = false;
    double weight_before = 0.0;
    double delta = 0.0;  // weighted fraction of erring experts
    double weight_after = 0.0;
    double dropped_weight = 0.0;
    std::size_t dropped_children = 0;
  };
  const RoundDiagnostics& last_round() const { return last_; }

 private:
  Expert spawn(const Expert& parent, VertexId x, Label y, double factor, std::size_t nbhd) const;

  GraphPtr graph_;
  ClassPtr cls_;
  std::shared_ptr<LittlestoneOracle> oracle_;
  int mistake_bound_;
  std::size_t max_degree_;
  double p_;
  Hypothesis all_positive_;
  std::vector<Expert> experts_;
  ClassifierDistribution dist_;
  bool dirty_ = true;
  RoundDiagnostics last_;
  // The pool only changes on exploration rounds, so the forcing-expert
  // search is reused until then.
  mutable std::optional<bool> forcing_cache_;
};

/// Deterministic learner that plays h^i until it errs, then moves to h^{i+1}.
/// At most n - 1 mistakes on realizable sequences.
class NaiveDeterministic final : public Learner {
 public:
  explicit NaiveDeterministic(ClassPtr cls);

  std::string name() const override { return "naive"; }
  const ClassifierDistribution& announce() override;
  void observe(std::size_t atom, VertexId z, Label y) override;

  std::size_t cursor() const { return cursor_; }

 private:
  ClassPtr cls_;
  std::size_t cursor_ = 0;
  ClassifierDistribution dist_;
};

/// Uniform-Mix when sqrt(T ln n) <= n, naive deterministic otherwise.
bool combined_prefers_uniform_mix(std::size_t n, std::size_t horizon);
std::unique_ptr<Learner> make_combined_min_learner(GraphPtr graph, ClassPtr cls, std::size_t horizon);

}  // namespace stratsim
