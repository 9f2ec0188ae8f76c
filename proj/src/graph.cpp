#include "stratsim/graph.hpp"

#include <algorithm>
#include <string>

namespace stratsim {

ManipulationGraph::ManipulationGraph(std::size_t vertex_count) : adjacency_(vertex_count) {}

ManipulationGraph ManipulationGraph::from_edges(std::size_t vertex_count, std::span<const Edge> edges) {
  ManipulationGraph g(vertex_count);
  for (const auto& [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count) {
      throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") out of range for " + std::to_string(vertex_count) + " vertices");
    }
    if (a == b) throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw std::invalid_argument("duplicate edge in edge list");
    }
  }
  return g;
}

ManipulationGraph ManipulationGraph::from_adjacency(std::vector<std::vector<VertexId>> adjacency) {
  ManipulationGraph g;
  g.adjacency_ = std::move(adjacency);
  g.validate();
  return g;
}

void ManipulationGraph::validate() const {
  const auto n = adjacency_.size();
  for (std::size_t v = 0; v < n; ++v) {
    const auto& list = adjacency_[v];
    for (std::size_t k = 0; k < list.size(); ++k) {
      const VertexId w = list[k];
      if (w >= n) throw std::invalid_argument("neighbor id out of range at vertex " + std::to_string(v));
      if (w == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(v));
      if (k > 0 && list[k - 1] >= w) {
        throw std::invalid_argument("adjacency of vertex " + std::to_string(v) + " not strictly ascending");
      }
      if (!std::binary_search(adjacency_[w].begin(), adjacency_[w].end(), static_cast<VertexId>(v))) {
        throw std::invalid_argument("adjacency not symmetric between " + std::to_string(v) + " and " +
                                    std::to_string(w));
      }
    }
  }
}

std::size_t ManipulationGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

void ManipulationGraph::check_vertex(VertexId x) const {
  if (x >= adjacency_.size()) {
    throw std::invalid_argument("vertex " + std::to_string(x) + " out of range for " +
                                std::to_string(adjacency_.size()) + " vertices");
  }
}

std::span<const VertexId> ManipulationGraph::neighbors(VertexId x) const {
  check_vertex(x);
  return adjacency_[x];
}

std::vector<VertexId> ManipulationGraph::closed_neighborhood(VertexId x) const {
  const auto nb = neighbors(x);
  std::vector<VertexId> out;
  out.reserve(nb.size() + 1);
  auto it = std::lower_bound(nb.begin(), nb.end(), x);
  out.insert(out.end(), nb.begin(), it);
  out.push_back(x);
  out.insert(out.end(), it, nb.end());
  return out;
}

bool ManipulationGraph::adjacent(VertexId a, VertexId b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<ManipulationGraph::Edge> ManipulationGraph::edges() const {
  std::vector<Edge> out;
  for (VertexId a = 0; a < adjacency_.size(); ++a) {
    for (VertexId b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::size_t max_degree(const ManipulationGraph& g) {
  std::size_t best = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) best = std::max(best, g.degree(v));
  return best;
}

std::vector<VertexId> closed_neighborhood(const ManipulationGraph& g, VertexId x) {
  return g.closed_neighborhood(x);
}

ManipulationGraph disjoint_union(const ManipulationGraph& g1, const ManipulationGraph& g2) {
  const auto offset = static_cast<VertexId>(g1.vertex_count());
  std::vector<std::vector<VertexId>> adjacency;
  adjacency.reserve(g1.vertex_count() + g2.vertex_count());
  for (VertexId v = 0; v < g1.vertex_count(); ++v) {
    const auto nb = g1.neighbors(v);
    adjacency.emplace_back(nb.begin(), nb.end());
  }
  for (VertexId v = 0; v < g2.vertex_count(); ++v) {
    std::vector<VertexId> list;
    for (VertexId w : g2.neighbors(v)) list.push_back(w + offset);
    adjacency.push_back(std::move(list));
  }
  return ManipulationGraph::from_adjacency(std::move(adjacency));
}

namespace {

void check_sizes(const ManipulationGraph& g, const Hypothesis& h, VertexId x) {
  g.check_vertex(x);
  if (h.size() != g.vertex_count()) {
    throw std::invalid_argument("hypothesis labels " + std::to_string(h.size()) + " vertices, graph has " +
                                std::to_string(g.vertex_count()));
  }
}

}  // namespace

BestResponseOutcome best_response(const ManipulationGraph& g, const Hypothesis& h, VertexId x) {
  check_sizes(g, h, x);
  if (h(x) == Label::Positive) return {x, false};
  for (VertexId w : g.neighbors(x)) {
    if (h(w) == Label::Positive) return {w, true};
  }
  return {x, false};
}

bool labels_all_negative(const ManipulationGraph& g, const Hypothesis& h, VertexId x) {
  check_sizes(g, h, x);
  const auto pos = h.positives();
  const auto nb = g.neighbors(x);
  // Scan whichever side is shorter.
  if (pos.size() <= nb.size() + 1) {
    for (VertexId v : pos) {
      if (v == x || std::binary_search(nb.begin(), nb.end(), v)) return false;
    }
    return true;
  }
  if (h(x) == Label::Positive) return false;
  for (VertexId w : nb) {
    if (h(w) == Label::Positive) return false;
  }
  return true;
}

int strategic_loss(const ManipulationGraph& g, const Hypothesis& h, VertexId x, Label y) {
  // The agent lands on a positive vertex iff some vertex of N[x] is positive.
  const bool negative_everywhere = labels_all_negative(g, h, x);
  return y == Label::Positive ? static_cast<int>(negative_everywhere) : static_cast<int>(!negative_everywhere);
}

}  // namespace stratsim
