#pragma once

#include <cstddef>

#include "stratsim/types.hpp"

namespace stratsim {

/// Vertex-id layout of the hidden-index lower-bound graph on n indices,
/// optionally shifted by `offset` when embedded in a larger graph.
///
///   u_i = offset + i          (i in [0, n))
///   p_i = offset + n + i      (ascending, so smallest-id tie-break = smallest index over P)
///   L   = offset + 2n
///   R   = offset + 2n + 1
///   z   = offset + 2n + 2
struct Figure1Layout {
  std::size_t n = 0;
  VertexId offset = 0;

  static constexpr std::size_t vertex_count(std::size_t n) { return 2 * n + 3; }
  std::size_t vertex_count() const { return vertex_count(n); }

  VertexId u(std::size_t i) const { return offset + static_cast<VertexId>(i); }
  VertexId p(std::size_t i) const { return offset + static_cast<VertexId>(n + i); }
  VertexId left() const { return offset + static_cast<VertexId>(2 * n); }
  VertexId right() const { return offset + static_cast<VertexId>(2 * n + 1); }
  VertexId sink() const { return offset + static_cast<VertexId>(2 * n + 2); }
};

}  // namespace stratsim
