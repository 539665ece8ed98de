#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gibbscert/caps.hpp"
#include "gibbscert/graph.hpp"

namespace gibbscert {

/// Self-avoiding vertex sequence x_0 ... x_n with consecutive vertices adjacent.
struct SimplePath {
  std::vector<Vertex> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  Vertex origin() const { return vertices.front(); }
  Vertex terminus() const { return vertices.back(); }
};

/// True if consecutive vertices are adjacent in g and no vertex repeats.
bool is_simple_path(const Graph& g, std::span<const Vertex> path);

/// Finite connected subgraph of a host graph.
struct Animal {
  VertexSet vertices;
  std::vector<Edge> edges;
};

/// The animal spanned by a vertex set with every host edge between its members.
Animal induced_animal(const Graph& g, VertexSet vertices);

/// The graph G_theta of a path: its vertices and traversed edges.
Animal path_animal(std::span<const Vertex> path);

/// Checks that the edges are host edges inside the vertex set and connect it.
bool is_animal(const Graph& g, const Animal& a);

using PathVisitor = std::function<void(std::span<const Vertex>)>;
using VertexSetVisitor = std::function<void(std::span<const Vertex>)>;

/// Streams every simple path inside the subgraph induced on `domain` that
/// starts at `origin`, ends in `targets`, and has length 1..max_len. Paths
/// are emitted once each in lexicographic order of their vertex sequences.
/// Cycles are never produced, so targets == {origin} yields nothing.
EnumerationStatus enumerate_simple_paths(const Graph& g, const VertexSet& domain,
                                         Vertex origin, const VertexSet& targets,
                                         std::size_t max_len, const Caps& caps,
                                         const PathVisitor& visit);

/// Convenience wrapper that collects the stream.
struct PathCollection {
  std::vector<SimplePath> paths;
  EnumerationStatus status;
};
PathCollection collect_simple_paths(const Graph& g, const VertexSet& domain,
                                    Vertex origin, const VertexSet& targets,
                                    std::size_t max_len, const Caps& caps = {});

/// Streams every connected vertex subset of `host` whose size lies in
/// [min_vertices, max_vertices], each exactly once, as a sorted vertex list.
/// Each subset stands for the induced animal on it. Order is deterministic:
/// grouped by smallest member, then by extension order.
EnumerationStatus enumerate_animals(const Graph& g, const VertexSet& host,
                                    std::size_t min_vertices,
                                    std::size_t max_vertices, const Caps& caps,
                                    const VertexSetVisitor& visit);

}  // namespace gibbscert
