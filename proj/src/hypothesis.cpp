#include "stratsim/hypothesis.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "stratsim/figure1_layout.hpp"

namespace stratsim {

Hypothesis::Hypothesis(LabelVector labels) : labels_(std::move(labels)) {
  for (Eigen::Index v = 0; v < labels_.size(); ++v) {
    const auto y = labels_[v];
    if (y != 1 && y != -1) {
      throw std::invalid_argument("label at vertex " + std::to_string(v) + " is not +-1");
    }
    if (y == 1) positives_.push_back(static_cast<VertexId>(v));
  }
}

Hypothesis Hypothesis::constant(std::size_t vertex_count, Label y) {
  return Hypothesis(LabelVector::Constant(static_cast<Eigen::Index>(vertex_count), static_cast<std::int8_t>(y)));
}

Hypothesis Hypothesis::from_positives(std::size_t vertex_count, std::span<const VertexId> positives) {
  LabelVector labels = LabelVector::Constant(static_cast<Eigen::Index>(vertex_count), -1);
  for (VertexId v : positives) {
    if (v >= vertex_count) throw std::invalid_argument("positive vertex out of range");
    labels[v] = 1;
  }
  return Hypothesis(std::move(labels));
}

Hypothesis concat(const Hypothesis& a, const Hypothesis& b) {
  LabelVector labels(a.labels().size() + b.labels().size());
  labels << a.labels(), b.labels();
  return Hypothesis(std::move(labels));
}

HypothesisClass::HypothesisClass(std::size_t vertex_count, std::vector<Hypothesis> members)
    : vertex_count_(vertex_count), members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("hypothesis class must be nonempty");
  std::set<std::vector<std::int8_t>> seen;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& h = members_[i];
    if (h.size() != vertex_count_) {
      throw std::invalid_argument("member " + std::to_string(i) + " labels " + std::to_string(h.size()) +
                                  " vertices, expected " + std::to_string(vertex_count_));
    }
    std::vector<std::int8_t> key(h.labels().data(), h.labels().data() + h.labels().size());
    if (!seen.insert(std::move(key)).second) {
      throw std::invalid_argument("duplicate labeling at member " + std::to_string(i));
    }
  }
}

Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> HypothesisClass::label_matrix() const {
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> m(members_.size(), vertex_count_);
  for (std::size_t i = 0; i < members_.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = members_[i].labels().transpose();
  return m;
}

HypothesisClass singletons_over(std::size_t vertex_count, std::span<const VertexId> points) {
  std::vector<Hypothesis> members;
  members.reserve(points.size());
  for (VertexId v : points) members.push_back(Hypothesis::from_positives(vertex_count, std::span(&v, 1)));
  return HypothesisClass(vertex_count, std::move(members));
}

HypothesisClass first_labelings(std::size_t vertex_count, std::span<const VertexId> points, std::size_t count) {
  const std::size_t k = points.size();
  if (k >= 63) throw std::invalid_argument("too many points for exhaustive labelings");
  const std::size_t total = std::size_t{1} << k;
  if (count == 0 || count > total) throw std::invalid_argument("labeling count out of range");
  std::vector<Hypothesis> members;
  members.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    LabelVector labels = LabelVector::Constant(static_cast<Eigen::Index>(vertex_count), -1);
    for (std::size_t j = 0; j < k; ++j) {
      if ((code >> (k - 1 - j)) & 1U) labels[points[j]] = 1;
    }
    members.emplace_back(std::move(labels));
  }
  return HypothesisClass(vertex_count, std::move(members));
}

HypothesisClass all_labelings(std::size_t vertex_count, std::span<const VertexId> points) {
  return first_labelings(vertex_count, points, std::size_t{1} << points.size());
}

HypothesisClass figure1_class(std::size_t n) {
  if (n < 1) throw std::invalid_argument("figure1_class needs n >= 1");
  const Figure1Layout layout{n, 0};
  std::vector<VertexId> p_vertices;
  for (std::size_t i = 0; i < n; ++i) p_vertices.push_back(layout.p(i));
  return singletons_over(layout.vertex_count(), p_vertices);
}

HypothesisClass product_copies(const HypothesisClass& c, std::size_t d) {
  if (d < 1) throw std::invalid_argument("product_copies needs d >= 1");
  const std::size_t n = c.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (total > (std::size_t{1} << 24) / n) throw std::invalid_argument("product class too large");
    total *= n;
  }
  const std::size_t block = c.vertex_count();
  std::vector<Hypothesis> members;
  members.reserve(total);
  std::vector<std::size_t> digits(d, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t k = d; k-- > 0;) {
      digits[k] = rest % n;
      rest /= n;
    }
    LabelVector labels(static_cast<Eigen::Index>(block * d));
    for (std::size_t k = 0; k < d; ++k) {
      labels.segment(static_cast<Eigen::Index>(k * block), static_cast<Eigen::Index>(block)) = c[digits[k]].labels();
    }
    members.emplace_back(std::move(labels));
  }
  return HypothesisClass(block * d, std::move(members));
}

HypothesisClass union_extend(const HypothesisClass& c1, const HypothesisClass& c2) {
  if (c1.size() != c2.size()) {
    throw std::invalid_argument("union_extend needs equal class sizes, got " + std::to_string(c1.size()) + " and " +
                                std::to_string(c2.size()));
  }
  std::vector<Hypothesis> members;
  members.reserve(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i) members.push_back(concat(c1[i], c2[i]));
  return HypothesisClass(c1.vertex_count() + c2.vertex_count(), std::move(members));
}

}  // namespace stratsim
