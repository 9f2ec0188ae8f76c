#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stratsim/hypothesis.hpp"

namespace stratsim {

/// Sorted indices into a HypothesisClass.
using VersionSpace = std::vector<std::uint32_t>;

VersionSpace full_version(const HypothesisClass& c);

/// Memoized Littlestone-dimension evaluator for subsets of one class over a
/// fixed finite domain.
///
/// Ldim(S) = max over x with both restrictions nonempty of
///           1 + min(Ldim(S|x=+1), Ldim(S|x=-1)), and 0 if no x splits S.
///
/// The search is pruned with Ldim(S) <= floor(log2 |S|) and evaluates the
/// smaller branch first, capping the larger branch at the smaller's value.
/// Not thread-safe; give each trial its own oracle.
class LittlestoneOracle {
 public:
  /// Domain defaults to every vertex of the class.
  explicit LittlestoneOracle(ClassPtr cls);
  LittlestoneOracle(ClassPtr cls, std::vector<VertexId> domain);

  const HypothesisClass& hypothesis_class() const { return *cls_; }
  const ClassPtr& class_ptr() const { return cls_; }

  /// Ldim of the version space; throws std::invalid_argument if empty.
  int dimension(std::span<const std::uint32_t> version);

  /// Ldim of the subset of `version` labeling x as y, or -1 if that subset is empty.
  int restricted_dimension(std::span<const std::uint32_t> version, VertexId x, Label y);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Entry {
    int value;
    bool exact;  // false: value is only a lower bound
  };
  int capped(const VersionSpace& version, int cap);
  static std::string key(std::span<const std::uint32_t> version);

  ClassPtr cls_;
  std::vector<VertexId> domain_;
  std::unordered_map<std::string, Entry> memo_;
};

/// Littlestone dimension of a whole class; throws on an empty domain vertex.
int ldim(const HypothesisClass& c);
int ldim(const HypothesisClass& c, std::span<const VertexId> domain);

struct Example {
  VertexId x;
  Label y;
  friend bool operator==(const Example&, const Example&) = default;
};

/// State of the Standard Optimal Algorithm after a history of examples.
/// Value type: feeding returns a new state. States created from the same
/// oracle share its memo table.
class SoaState {
 public:
  explicit SoaState(std::shared_ptr<LittlestoneOracle> oracle);

  /// Label whose consistent subclass has the larger Ldim; ties go to -1.
  Label predict(VertexId x) const;

  /// Total labeling x -> predict(x).
  Hypothesis hypothesis() const;

  /// New state with (x, y) appended; throws if no member of the version
  /// space labels x as y.
  SoaState fed(VertexId x, Label y) const;

  /// True iff some member of the version space labels x as y.
  bool consistent_with(VertexId x, Label y) const;

  const std::vector<Example>& history() const { return history_; }
  const VersionSpace& version() const { return version_; }
  const std::shared_ptr<LittlestoneOracle>& oracle() const { return oracle_; }

 private:
  std::shared_ptr<LittlestoneOracle> oracle_;
  std::vector<Example> history_;
  VersionSpace version_;
};

}  // namespace stratsim
