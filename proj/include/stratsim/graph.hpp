#pragma once

#include <span>
#include <utility>
#include <vector>

#include "stratsim/hypothesis.hpp"
#include "stratsim/types.hpp"

namespace stratsim {

/// Undirected manipulation graph. An edge (x, x') means an agent at x may
/// present itself as x'. Immutable after construction.
///
/// Invariants: adjacency lists are strictly ascending, symmetric, free of
/// self-loops, and every entry is < vertex_count().
class ManipulationGraph {
 public:
  using Edge = std::pair<VertexId, VertexId>;

  /// Edgeless graph on `vertex_count` vertices.
  explicit ManipulationGraph(std::size_t vertex_count);

  /// Builds from an unordered edge list. Rejects self-loops, out-of-range
  /// endpoints and duplicate edges.
  static ManipulationGraph from_edges(std::size_t vertex_count, std::span<const Edge> edges);

  /// Builds from explicit adjacency lists, validating every invariant.
  static ManipulationGraph from_adjacency(std::vector<std::vector<VertexId>> adjacency);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const;

  /// Open neighborhood N(x), ascending.
  std::span<const VertexId> neighbors(VertexId x) const;

  /// Closed neighborhood N[x] = {x} U N(x), ascending.
  std::vector<VertexId> closed_neighborhood(VertexId x) const;

  std::size_t degree(VertexId x) const { return neighbors(x).size(); }
  bool adjacent(VertexId a, VertexId b) const;
  bool in_closed_neighborhood(VertexId x, VertexId v) const { return x == v || adjacent(x, v); }

  /// Edges (a, b) with a < b, sorted.
  std::vector<Edge> edges() const;

  void check_vertex(VertexId x) const;

  friend bool operator==(const ManipulationGraph&, const ManipulationGraph&) = default;

 private:
  ManipulationGraph() = default;
  void validate() const;

  std::vector<std::vector<VertexId>> adjacency_;
};

/// Max open-neighborhood size over all vertices (0 for an empty graph).
std::size_t max_degree(const ManipulationGraph& g);

std::vector<VertexId> closed_neighborhood(const ManipulationGraph& g, VertexId x);

/// Vertices of g2 are shifted by g1.vertex_count(); no cross edges.
ManipulationGraph disjoint_union(const ManipulationGraph& g1, const ManipulationGraph& g2);

struct BestResponseOutcome {
  VertexId landed = 0;
  bool moved = false;

  friend bool operator==(const BestResponseOutcome&, const BestResponseOutcome&) = default;
};

/// Agent best response: stay if h(x) = +1 or no vertex of N[x] is positive,
/// otherwise move to the smallest-id positive neighbor.
BestResponseOutcome best_response(const ManipulationGraph& g, const Hypothesis& h, VertexId x);

/// True iff h labels every vertex of N[x] negative (h is in R_t for x_t = x).
bool labels_all_negative(const ManipulationGraph& g, const Hypothesis& h, VertexId x);

/// 1{h(z) != y} where z is the best response of x to h.
int strategic_loss(const ManipulationGraph& g, const Hypothesis& h, VertexId x, Label y);

}  // namespace stratsim
