#pragma once

#include <functional>
#include <vector>

#include "stratsim/hypothesis.hpp"
#include "stratsim/rng.hpp"

namespace stratsim {

/// One support point of an announced distribution. `classifier` is a
/// non-owning view that stays valid until the announcing learner is updated.
struct Atom {
  const Hypothesis* classifier = nullptr;
  double mass = 0.0;
  /// Index into the learner's hypothesis class, or kNotMember for
  /// improper classifiers (h+, expert-deployed SOA labelings).
  std::int64_t member = kNotMember;

  static constexpr std::int64_t kNotMember = -1;
};

/// Finite-support distribution over explicit classifiers.
class ClassifierDistribution {
 public:
  static constexpr double kMassTolerance = 1e-9;

  void clear() { atoms_.clear(); }
  void add(const Hypothesis& h, double mass, std::int64_t member = Atom::kNotMember) {
    atoms_.push_back({&h, mass, member});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  double total_mass() const;

  /// Total mass on atoms satisfying `pred`.
  double mass_where(const std::function<bool(const Hypothesis&)>& pred) const;

  /// Throws std::invalid_argument on an empty support, negative or
  /// non-finite mass, or total mass off 1 by more than kMassTolerance.
  void validate() const;

  /// Inverse-CDF draw of an atom index.
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace stratsim
