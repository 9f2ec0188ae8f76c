#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratsim/distribution.hpp"
#include "stratsim/instance.hpp"
#include "stratsim/invariants.hpp"

namespace stratsim {

/// God-view summary of one round, handed to adversary audits before the
/// learner is updated (so the announced atoms are still valid).
struct RoundView {
  std::size_t round;
  const ClassifierDistribution& announced;
  const Hypothesis& sampled;
  Agent agent;
  BestResponseOutcome outcome;
  int loss;
};

class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string name() const = 0;

  /// Whether next() inspects the announced distribution. Oblivious
  /// adversaries ignore it.
  virtual bool reads_distribution() const = 0;

  virtual Agent next(const ClassifierDistribution& announced, std::size_t round, Rng& rng) = 0;

  /// Class index with zero strategic loss on every emitted sequence, if any.
  virtual std::optional<std::size_t> target() const { return std::nullopt; }

  /// Hidden index drawn at construction (lower-bound adversaries).
  virtual std::optional<std::int64_t> hidden_index() const { return std::nullopt; }

  virtual void audit(const RoundView& /*view*/, InvariantLog& /*log*/) const {}
};

struct SetMembership {
  bool a = false;  // f(L) = +1 or some f(u_i) = +1
  bool b = false;  // f(R) = +1 or f(z) = +1
  bool c = false;  // f = -1 on all of P, R, z

  bool good() const { return !a && !b && !c; }
  friend bool operator==(const SetMembership&, const SetMembership&) = default;
};

SetMembership classify_sets(const Hypothesis& f, const Figure1Layout& layout);

/// Smallest k with f(p_k) = +1, if any.
std::optional<std::size_t> smallest_positive_p(const Hypothesis& f, const Figure1Layout& layout);

/// The four-case adversary for arbitrary (improper) learners on one
/// hidden-index component:
///   D(A) >= gamma -> (L, -1); else D(B) >= gamma -> (z, -1);
///   else D(C) >= gamma -> (R, +1); else (u_{i*}, -1).
/// Every emitted agent is realized by the member labeling p_{i*} positive.
class GeneralAdversary final : public Adversary {
 public:
  enum class Case { LeftNegative = 1, SinkNegative = 2, RightPositive = 3, Hidden = 4 };

  /// `target` is the class index of the realizing member, when the
  /// component's class is indexed by hidden index.
  GeneralAdversary(GraphPtr graph, Figure1Layout layout, std::size_t hidden, double gamma,
                   std::optional<std::size_t> target = std::nullopt);

  std::string name() const override { return "general"; }
  bool reads_distribution() const override { return true; }
  Agent next(const ClassifierDistribution& announced, std::size_t round, Rng& rng) override;
  std::optional<std::size_t> target() const override { return target_; }
  std::optional<std::int64_t> hidden_index() const override { return static_cast<std::int64_t>(hidden_); }
  void audit(const RoundView& view, InvariantLog& log) const override;

  /// Case rule alone, for a validated distribution.
  Agent respond(const ClassifierDistribution& announced);

  double gamma() const { return gamma_; }
  Case last_case() const { return last_case_; }
  const Figure1Layout& layout() const { return layout_; }

 private:
  GraphPtr graph_;
  Figure1Layout layout_;
  std::size_t hidden_;
  double gamma_;
  std::optional<std::size_t> target_;
  Case last_case_ = Case::Hidden;
};

/// Lower-bound adversary for proper learners: always (u_{i*}, -1).
class ProperAdversary final : public Adversary {
 public:
  ProperAdversary(Figure1Layout layout, std::size_t hidden) : layout_(layout), hidden_(hidden) {}

  std::string name() const override { return "proper"; }
  bool reads_distribution() const override { return false; }
  Agent next(const ClassifierDistribution&, std::size_t, Rng&) override {
    return {layout_.u(hidden_), Label::Negative};
  }
  std::optional<std::size_t> target() const override { return hidden_; }
  std::optional<std::int64_t> hidden_index() const override { return static_cast<std::int64_t>(hidden_); }

 private:
  Figure1Layout layout_;
  std::size_t hidden_;
};

/// Runs an independent general adversary in copy b during block b of the
/// horizon; block b covers rounds t with floor(t d / T) = b. Each block uses
/// gamma = scale / sqrt(block length).
class BlockAdversary final : public Adversary {
 public:
  BlockAdversary(GraphPtr graph, std::vector<Figure1Layout> copies, std::vector<std::size_t> hidden,
                 std::size_t horizon, double gamma_scale);

  std::string name() const override { return "d_copies"; }
  bool reads_distribution() const override { return true; }
  Agent next(const ClassifierDistribution& announced, std::size_t round, Rng& rng) override;
  std::optional<std::size_t> target() const override { return target_; }
  void audit(const RoundView& view, InvariantLog& log) const override;

  std::size_t block_of(std::size_t round) const;
  const std::vector<std::size_t>& hidden() const { return hidden_; }

 private:
  std::vector<GeneralAdversary> blocks_;
  std::vector<std::size_t> hidden_;
  std::size_t horizon_;
  std::size_t target_;
  std::size_t active_ = 0;
};

/// Fair-coin labels on uniformly drawn isolated points.
class StochasticAdversary final : public Adversary {
 public:
  explicit StochasticAdversary(std::vector<VertexId> points);

  std::string name() const override { return "stochastic"; }
  bool reads_distribution() const override { return false; }
  Agent next(const ClassifierDistribution&, std::size_t, Rng& rng) override;

 private:
  std::vector<VertexId> points_;
};

/// Uniform vertices labeled by a fixed target's strategic label, so the
/// target has zero loss. With a sequence seed the sequence ignores the
/// trial stream and is identical across trials.
class RandomRealizableAdversary final : public Adversary {
 public:
  RandomRealizableAdversary(GraphPtr graph, ClassPtr cls, std::size_t target,
                            std::optional<std::uint64_t> sequence_seed = std::nullopt);

  std::string name() const override { return "random_realizable"; }
  bool reads_distribution() const override { return false; }
  Agent next(const ClassifierDistribution&, std::size_t, Rng& rng) override;
  std::optional<std::size_t> target() const override { return target_; }

 private:
  GraphPtr graph_;
  ClassPtr cls_;
  std::size_t target_;
  std::optional<Rng> own_;
};

/// gamma = scale / sqrt(T).
double lower_bound_gamma(std::size_t horizon, double scale = 1.0);

/// tau = min{floor(n/2), floor(sqrt(T)/6), floor(T/2)}; the expected-mistake floor is tau/4.
std::size_t lower_bound_tau(std::size_t n, std::size_t horizon);

struct AdversarySpec {
  /// general, proper, d_copies, composite, stochastic, random_realizable.
  std::string name;
  double gamma_scale = 1.0;
  std::optional<std::uint64_t> sequence_seed;
  /// Fixed target for random_realizable; drawn from the stream otherwise.
  std::optional<std::size_t> target;
};

/// Default adversary for an instance builder.
std::string default_adversary(const Instance& inst);

/// Builds the adversary for one trial; hidden indices and targets are drawn
/// from `rng` unless fixed by the spec.
std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const Instance& inst, std::size_t horizon,
                                          Rng& rng);

}  // namespace stratsim
