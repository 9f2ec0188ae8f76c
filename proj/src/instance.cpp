#include "stratsim/instance.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "stratsim/rng.hpp"

namespace stratsim {

std::size_t ceil_log2(std::size_t n) {
  if (n < 1) throw std::invalid_argument("ceil_log2 needs n >= 1");
  std::size_t m = 0;
  while ((std::size_t{1} << m) < n) ++m;
  return m;
}

ManipulationGraph figure1_graph(std::size_t n) {
  if (n < 2) throw std::invalid_argument("the lower-bound graph needs n >= 2");
  const Figure1Layout f{n, 0};
  std::vector<ManipulationGraph::Edge> edges;
  edges.reserve(n * (n - 1) + 2 * n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) edges.emplace_back(f.u(i), f.p(j));
    }
    edges.emplace_back(f.left(), f.u(i));
    edges.emplace_back(f.right(), f.p(i));
  }
  edges.emplace_back(f.right(), f.sink());
  return ManipulationGraph::from_edges(f.vertex_count(), edges);
}

Instance build_figure1(std::size_t n) {
  Instance inst;
  inst.builder = "figure1";
  inst.graph = std::make_shared<const ManipulationGraph>(figure1_graph(n));
  inst.cls = std::make_shared<const HypothesisClass>(figure1_class(n));
  inst.figure1 = {Figure1Layout{n, 0}};
  return inst;
}

Instance build_d_copies(std::size_t n, std::size_t d) {
  if (d < 1) throw std::invalid_argument("d-copies needs d >= 1");
  const auto single = figure1_graph(n);
  ManipulationGraph g = single;
  for (std::size_t c = 1; c < d; ++c) g = disjoint_union(g, single);

  Instance inst;
  inst.builder = d == 1 ? "figure1" : "d_copies";
  inst.graph = std::make_shared<const ManipulationGraph>(std::move(g));
  inst.cls = std::make_shared<const HypothesisClass>(product_copies(figure1_class(n), d));
  for (std::size_t c = 0; c < d; ++c) {
    inst.figure1.push_back(Figure1Layout{n, static_cast<VertexId>(c * Figure1Layout::vertex_count(n))});
  }
  return inst;
}

Instance build_stochastic(std::size_t n) {
  if (n < 2) throw std::invalid_argument("stochastic instance needs n >= 2");
  const std::size_t m = ceil_log2(n);
  std::vector<VertexId> points(m);
  std::iota(points.begin(), points.end(), VertexId{0});

  Instance inst;
  inst.builder = "stochastic";
  inst.graph = std::make_shared<const ManipulationGraph>(m);
  inst.cls = std::make_shared<const HypothesisClass>(first_labelings(m, points, n));
  inst.isolated = std::move(points);
  return inst;
}

CompositeArm composite_arm(std::size_t n, std::size_t horizon) {
  const double lhs = static_cast<double>(std::min(n, horizon));
  const double rhs = std::sqrt(static_cast<double>(horizon) * std::log(static_cast<double>(n)));
  return lhs >= rhs ? CompositeArm::Realizable : CompositeArm::Stochastic;
}

Instance build_agnostic_composite(std::size_t n, std::size_t horizon) {
  const auto left = build_figure1(n);
  const auto right = build_stochastic(n);
  const auto offset = static_cast<VertexId>(left.graph->vertex_count());

  Instance inst;
  inst.builder = "composite";
  inst.graph = std::make_shared<const ManipulationGraph>(disjoint_union(*left.graph, *right.graph));
  inst.cls = std::make_shared<const HypothesisClass>(union_extend(*left.cls, *right.cls));
  inst.figure1 = left.figure1;
  for (VertexId v : right.isolated) inst.isolated.push_back(offset + v);
  inst.arm = composite_arm(n, horizon);
  return inst;
}

Instance build_random_graph(std::size_t vertex_count, std::size_t max_deg, std::size_t class_size,
                            std::uint64_t seed) {
  if (vertex_count < 1 || class_size < 1) throw std::invalid_argument("random graph needs vertices and members");
  if (vertex_count < 63 && class_size > (std::uint64_t{1} << vertex_count)) {
    throw std::invalid_argument("class_size exceeds the number of labelings");
  }
  Rng rng = make_stream(seed, 0, StreamRole::Instance);

  std::vector<std::size_t> degree(vertex_count, 0);
  std::set<ManipulationGraph::Edge> edges;
  const std::size_t attempts = 4 * vertex_count * max_deg;
  for (std::size_t k = 0; k < attempts && vertex_count > 1; ++k) {
    auto a = static_cast<VertexId>(uniform_index(rng, vertex_count));
    auto b = static_cast<VertexId>(uniform_index(rng, vertex_count));
    if (a == b || degree[a] >= max_deg || degree[b] >= max_deg) continue;
    if (a > b) std::swap(a, b);
    if (edges.emplace(a, b).second) {
      ++degree[a];
      ++degree[b];
    }
  }
  const std::vector<ManipulationGraph::Edge> edge_list(edges.begin(), edges.end());

  std::set<std::vector<std::int8_t>> seen;
  std::vector<Hypothesis> members;
  while (members.size() < class_size) {
    std::vector<std::int8_t> labels(vertex_count);
    for (auto& l : labels) l = uniform01(rng) < 0.25 ? 1 : -1;
    if (!seen.insert(labels).second) continue;
    members.emplace_back(Eigen::Map<const LabelVector>(labels.data(), static_cast<Eigen::Index>(vertex_count)));
  }

  Instance inst;
  inst.builder = "random_graph";
  inst.graph = std::make_shared<const ManipulationGraph>(ManipulationGraph::from_edges(vertex_count, edge_list));
  inst.cls = std::make_shared<const HypothesisClass>(vertex_count, std::move(members));
  return inst;
}

}  // namespace stratsim
