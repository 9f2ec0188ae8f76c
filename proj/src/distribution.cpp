#include "stratsim/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stratsim {

double ClassifierDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.mass;
  return total;
}

double ClassifierDistribution::mass_where(const std::function<bool(const Hypothesis&)>& pred) const {
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (pred(*a.classifier)) total += a.mass;
  }
  return total;
}

void ClassifierDistribution::validate() const {
  if (atoms_.empty()) throw std::invalid_argument("announced distribution has empty support");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (a.classifier == nullptr) throw std::invalid_argument("atom " + std::to_string(i) + " has no classifier");
    if (!std::isfinite(a.mass) || a.mass < 0.0) {
      throw std::invalid_argument("atom " + std::to_string(i) + " has invalid mass " + std::to_string(a.mass));
    }
  }
  const double total = total_mass();
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("announced masses sum to " + std::to_string(total));
  }
}

std::size_t ClassifierDistribution::sample(Rng& rng) const {
  const double u = uniform01(rng) * total_mass();
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    acc += atoms_[i].mass;
    if (u < acc) return i;
  }
  // Rounding at the top end: last atom with positive mass.
  for (std::size_t i = atoms_.size(); i-- > 0;) {
    if (atoms_[i].mass > 0.0) return i;
  }
  return 0;
}

}  // namespace stratsim
