#include "stratsim/littlestone.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace stratsim {

VersionSpace full_version(const HypothesisClass& c) {
  VersionSpace v(c.size());
  std::iota(v.begin(), v.end(), 0U);
  return v;
}

namespace {

int floor_log2(std::size_t k) { return static_cast<int>(std::bit_width(k)) - 1; }

std::vector<VertexId> all_vertices(const HypothesisClass& c) {
  std::vector<VertexId> d(c.vertex_count());
  std::iota(d.begin(), d.end(), 0U);
  return d;
}

}  // namespace

LittlestoneOracle::LittlestoneOracle(ClassPtr cls) : LittlestoneOracle(cls, all_vertices(*cls)) {}

LittlestoneOracle::LittlestoneOracle(ClassPtr cls, std::vector<VertexId> domain)
    : cls_(std::move(cls)), domain_(std::move(domain)) {
  for (VertexId x : domain_) {
    if (x >= cls_->vertex_count()) throw std::invalid_argument("domain vertex out of range");
  }
  std::sort(domain_.begin(), domain_.end());
  domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
}

std::string LittlestoneOracle::key(std::span<const std::uint32_t> version) {
  return std::string(reinterpret_cast<const char*>(version.data()), version.size_bytes());
}

int LittlestoneOracle::dimension(std::span<const std::uint32_t> version) {
  if (version.empty()) throw std::invalid_argument("Littlestone dimension of an empty class is undefined");
  VersionSpace v(version.begin(), version.end());
  return capped(v, floor_log2(v.size()));
}

int LittlestoneOracle::restricted_dimension(std::span<const std::uint32_t> version, VertexId x, Label y) {
  VersionSpace sub;
  for (auto i : version) {
    if ((*cls_)[i](x) == y) sub.push_back(i);
  }
  if (sub.empty()) return -1;
  return capped(sub, floor_log2(sub.size()));
}

// Returns min(Ldim(version), cap). version is nonempty.
int LittlestoneOracle::capped(const VersionSpace& version, int cap) {
  const int limit = std::min(cap, floor_log2(version.size()));
  if (limit <= 0) return 0;

  const std::string k = key(version);
  if (auto it = memo_.find(k); it != memo_.end()) {
    if (it->second.exact || it->second.value >= limit) return std::min(it->second.value, limit);
  }

  int best = 0;
  VersionSpace pos;
  VersionSpace neg;
  for (VertexId x : domain_) {
    pos.clear();
    neg.clear();
    for (auto i : version) ((*cls_)[i](x) == Label::Positive ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) continue;
    const VersionSpace& small = pos.size() <= neg.size() ? pos : neg;
    const VersionSpace& large = pos.size() <= neg.size() ? neg : pos;
    if (1 + floor_log2(small.size()) <= best) continue;
    const int a = capped(small, limit - 1);
    if (1 + a <= best) continue;
    const int b = capped(large, a);
    best = std::max(best, 1 + std::min(a, b));
    if (best >= limit) break;
  }

  // best = min(Ldim, limit); it is the exact dimension whenever best < limit
  // or limit is the log2 ceiling.
  const bool exact = best < limit || limit == floor_log2(version.size());
  auto [it, inserted] = memo_.try_emplace(k, Entry{best, exact});
  if (!inserted && !it->second.exact) {
    if (exact) {
      it->second = Entry{best, true};
    } else {
      it->second.value = std::max(it->second.value, best);
    }
  }
  return best;
}

int ldim(const HypothesisClass& c) {
  LittlestoneOracle oracle(std::make_shared<const HypothesisClass>(c));
  return oracle.dimension(full_version(c));
}

int ldim(const HypothesisClass& c, std::span<const VertexId> domain) {
  LittlestoneOracle oracle(std::make_shared<const HypothesisClass>(c), {domain.begin(), domain.end()});
  return oracle.dimension(full_version(c));
}

SoaState::SoaState(std::shared_ptr<LittlestoneOracle> oracle)
    : oracle_(std::move(oracle)), version_(full_version(oracle_->hypothesis_class())) {}

Label SoaState::predict(VertexId x) const {
  if (version_.empty()) throw std::logic_error("SOA version space is empty: history not realizable");
  if (x >= oracle_->hypothesis_class().vertex_count()) throw std::invalid_argument("vertex out of range");
  const int plus = oracle_->restricted_dimension(version_, x, Label::Positive);
  const int minus = oracle_->restricted_dimension(version_, x, Label::Negative);
  return plus > minus ? Label::Positive : Label::Negative;
}

Hypothesis SoaState::hypothesis() const {
  const auto n = oracle_->hypothesis_class().vertex_count();
  LabelVector labels(static_cast<Eigen::Index>(n));
  for (VertexId x = 0; x < n; ++x) labels[x] = static_cast<std::int8_t>(predict(x));
  return Hypothesis(std::move(labels));
}

bool SoaState::consistent_with(VertexId x, Label y) const {
  const auto& cls = oracle_->hypothesis_class();
  return std::any_of(version_.begin(), version_.end(), [&](std::uint32_t i) { return cls[i](x) == y; });
}

SoaState SoaState::fed(VertexId x, Label y) const {
  const auto& cls = oracle_->hypothesis_class();
  if (x >= cls.vertex_count()) throw std::invalid_argument("vertex out of range");
  SoaState next(*this);
  next.history_.push_back({x, y});
  std::erase_if(next.version_, [&](std::uint32_t i) { return cls[i](x) != y; });
  if (next.version_.empty()) throw std::invalid_argument("feeding example empties the SOA version space");
  return next;
}

}  // namespace stratsim
