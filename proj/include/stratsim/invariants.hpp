#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stratsim {

struct CheckTally {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
};

/// Named pass/fail counters filled by invariant hooks. Recording is on the
/// per-round hot path, so names live in a small flat list.
class InvariantLog {
 public:
  void record(std::string_view name, bool ok) {
    auto& t = slot(name);
    ++t.checks;
    if (!ok) ++t.violations;
  }

  void merge(const InvariantLog& other) {
    for (const auto& [name, t] : other.entries_) {
      auto& mine = slot(name);
      mine.checks += t.checks;
      mine.violations += t.violations;
    }
  }

  std::int64_t total_violations() const {
    std::int64_t total = 0;
    for (const auto& [name, t] : entries_) total += t.violations;
    return total;
  }

  std::int64_t checks(std::string_view name) const { return find(name).checks; }
  std::int64_t violations(std::string_view name) const { return find(name).violations; }

  /// Tallies sorted by name.
  std::map<std::string, CheckTally> tallies() const {
    std::map<std::string, CheckTally> out;
    for (const auto& [name, t] : entries_) out[name] = t;
    return out;
  }

 private:
  CheckTally& slot(std::string_view name) {
    for (auto& [n, t] : entries_) {
      if (n == name) return t;
    }
    return entries_.emplace_back(std::string(name), CheckTally{}).second;
  }

  CheckTally find(std::string_view name) const {
    for (const auto& [n, t] : entries_) {
      if (n == name) return t;
    }
    return {};
  }

  std::vector<std::pair<std::string, CheckTally>> entries_;
};

}  // namespace stratsim
