#pragma once

#include <memory>
#include <span>
#include <vector>

#include "stratsim/types.hpp"

namespace stratsim {

/// Total +-1 labeling of the vertex set, stored densely. The sorted list of
/// positive vertices is cached for fast neighborhood queries.
class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(LabelVector labels);

  static Hypothesis constant(std::size_t vertex_count, Label y);
  static Hypothesis from_positives(std::size_t vertex_count, std::span<const VertexId> positives);

  std::size_t size() const { return static_cast<std::size_t>(labels_.size()); }
  Label operator()(VertexId x) const { return static_cast<Label>(labels_[x]); }
  const LabelVector& labels() const { return labels_; }
  std::span<const VertexId> positives() const { return positives_; }
  bool all_positive() const { return positives_.size() == size(); }

  friend bool operator==(const Hypothesis& a, const Hypothesis& b) { return a.labels_ == b.labels_; }

 private:
  LabelVector labels_;
  std::vector<VertexId> positives_;
};

/// Concatenation a (+) b: a on [0, |a|), b on [|a|, |a|+|b|).
Hypothesis concat(const Hypothesis& a, const Hypothesis& b);

/// Finite indexed family h^0..h^{n-1} of distinct labelings over one vertex set.
class HypothesisClass {
 public:
  /// Throws if empty, if labelings differ in length, or if two are equal.
  HypothesisClass(std::size_t vertex_count, std::vector<Hypothesis> members);

  std::size_t size() const { return members_.size(); }
  std::size_t vertex_count() const { return vertex_count_; }
  const Hypothesis& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Hypothesis>& members() const { return members_; }

  /// Row i is h^i.
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> label_matrix() const;

 private:
  std::size_t vertex_count_;
  std::vector<Hypothesis> members_;
};

using ClassPtr = std::shared_ptr<const HypothesisClass>;

// Class builders. Member ordering is the construction index.

/// One member per point, labeling only that point positive.
HypothesisClass singletons_over(std::size_t vertex_count, std::span<const VertexId> points);

/// All 2^k labelings of `points` (other vertices negative), in lexicographic
/// order with -1 < +1 and the first point most significant.
HypothesisClass all_labelings(std::size_t vertex_count, std::span<const VertexId> points);

/// First `count` labelings of all_labelings(points).
HypothesisClass first_labelings(std::size_t vertex_count, std::span<const VertexId> points, std::size_t count);

/// Singletons over P of the lower-bound graph with n hidden indices.
HypothesisClass figure1_class(std::size_t n);

/// Product class over d disjoint copies of c's domain; |result| = |c|^d.
/// Member index is the mixed-radix number with copy 0 most significant.
HypothesisClass product_copies(const HypothesisClass& c, std::size_t d);

/// Index-matched extension onto the disjoint union: member i = c1[i] (+) c2[i].
HypothesisClass union_extend(const HypothesisClass& c1, const HypothesisClass& c2);

}  // namespace stratsim
