#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratsim/figure1_layout.hpp"
#include "stratsim/graph.hpp"
#include "stratsim/realizable.hpp"

namespace stratsim {

/// Which component the composite adversary plays in, fixed at construction.
enum class CompositeArm { Realizable, Stochastic };

/// A graph, a class over its vertices, and the structural metadata the
/// adversaries need. Immutable and shareable across trials.
struct Instance {
  std::string builder;
  GraphPtr graph;
  ClassPtr cls;
  /// Embedded hidden-index components (one per copy).
  std::vector<Figure1Layout> figure1;
  /// Isolated points of an edgeless component.
  std::vector<VertexId> isolated;
  std::optional<CompositeArm> arm;
};

/// Hidden-index lower-bound graph on n indices (n >= 2):
/// u_i ~ p_j for i != j, L ~ every u_i, R ~ every p_j, z ~ R only.
ManipulationGraph figure1_graph(std::size_t n);

Instance build_figure1(std::size_t n);

/// d disjoint copies of build_figure1(n) with the product class (n^d members).
Instance build_d_copies(std::size_t n, std::size_t d);

/// m = ceil(log2 n) isolated points with the first n labelings of them.
Instance build_stochastic(std::size_t n);

/// Disjoint union of build_figure1(n) and build_stochastic(n), class matched by
/// index. The arm is Realizable iff min{n, T} >= sqrt(T ln n).
Instance build_agnostic_composite(std::size_t n, std::size_t horizon);

CompositeArm composite_arm(std::size_t n, std::size_t horizon);

/// Random graph with degree at most max_deg (edges drawn by rejection) and
/// `class_size` distinct random labelings, each vertex positive w.p. 1/4.
Instance build_random_graph(std::size_t vertex_count, std::size_t max_deg, std::size_t class_size,
                            std::uint64_t seed);

/// ceil(log2 n) for n >= 1.
std::size_t ceil_log2(std::size_t n);

}  // namespace stratsim
