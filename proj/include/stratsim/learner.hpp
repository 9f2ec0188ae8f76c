#pragma once

#include <optional>
#include <string>

#include "stratsim/distribution.hpp"
#include "stratsim/graph.hpp"
#include "stratsim/invariants.hpp"

namespace stratsim {

/// God-view information available to invariant hooks after a round. Never
/// passed to learning logic.
struct AuditContext {
  const ManipulationGraph& graph;
  const HypothesisClass& cls;
  Agent agent;
  /// Class index of a hypothesis with zero strategic loss on the whole
  /// sequence, when the adversary guarantees one.
  std::optional<std::size_t> target;
};

/// An online learner in the revealed-realization model: it announces a
/// distribution, one atom is sampled and revealed to the agent, and the
/// learner then observes the manipulated feature z and the true label y.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string name() const = 0;

  /// Distribution D_t for this round. The reference and its atoms remain
  /// valid until the next call to observe().
  virtual const ClassifierDistribution& announce() = 0;

  /// Feedback for the sampled atom of the last announced distribution.
  virtual void observe(std::size_t atom, VertexId z, Label y) = 0;

  /// Per-round invariant checks; called after observe().
  virtual void audit(const AuditContext& /*ctx*/, InvariantLog& /*log*/) const {}

  /// End-of-run checks; called once after the last round.
  virtual void finish(const AuditContext& /*ctx*/, InvariantLog& /*log*/) const {}
};

}  // namespace stratsim
