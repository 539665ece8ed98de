#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gibbscert {

using Vertex = std::uint32_t;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

/// Canonical undirected edge, `u < v`.
struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorts and deduplicates in place, returning the canonical set.
VertexSet make_vertex_set(std::vector<Vertex> vertices);

bool contains(const VertexSet& set, Vertex v);

/// Simple undirected graph with dense vertex ids. Immutable after
/// construction; neighbor lists are strictly sorted and edges are indexed
/// in lexicographic order of their canonical (u, v) pairs.
class Graph {
 public:
  Graph() = default;

  /// Builds the canonical graph from an edge list. Duplicate and reversed
  /// pairs collapse to one edge; a loop throws InvalidInput naming the pair.
  /// The vertex count is max(id) + 1, or `min_vertices` if larger.
  static Graph from_edges(std::span<const std::pair<Vertex, Vertex>> edges,
                          std::size_t min_vertices = 0);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }

  /// Edge indices parallel to neighbors(v).
  std::span<const std::size_t> incident_edges(Vertex v) const {
    return incident_.at(v);
  }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_.at(index); }

  bool adjacent(Vertex x, Vertex y) const;
  std::optional<std::size_t> edge_index(Vertex x, Vertex y) const;

  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<Edge> edges_;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Breadth-first distances from `source`; kUnreachable where no path exists.
/// When `max_radius` is given the search stops at that depth.
std::vector<std::size_t> bfs_distances(const Graph& g, Vertex source,
                                       std::size_t max_radius = kUnreachable);

/// Graph distance. Throws Unreachable for vertices in different components.
std::size_t distance(const Graph& g, Vertex x, Vertex y);

/// Vertex set of the ball of radius r around x.
VertexSet ball_vertices(const Graph& g, Vertex x, std::size_t r);

/// Induced subgraph with local ids 0..n-1; local id i is host vertex
/// `host_vertices[i]`.
struct InducedSubgraph {
  Graph graph;
  VertexSet host_vertices;
};

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& vertices);

/// The ball G_r(x): all vertices within distance r and every host edge with
/// both endpoints inside.
InducedSubgraph ball(const Graph& g, Vertex x, std::size_t r);

/// A finite volume with its vertex boundaries and the host edges that the
/// local Hamiltonian touches.
struct Volume {
  VertexSet delta;
  VertexSet inner;     ///< vertices of delta with a neighbor outside
  VertexSet outer;     ///< vertices outside delta with a neighbor inside
  VertexSet interior;  ///< delta minus inner
  std::vector<std::size_t> interior_edges;  ///< host edges inside delta
  std::vector<std::size_t> boundary_edges;  ///< host edges delta -> outer

  bool closed() const { return outer.empty(); }

  /// Index of v in `delta`, or nullopt.
  std::optional<std::size_t> position(Vertex v) const;
  /// Index of v in `outer`, or nullopt.
  std::optional<std::size_t> outer_position(Vertex v) const;
};

/// Computes both vertex boundaries of a nonempty subset of the vertices.
/// Delta equal to the whole vertex set is legal and yields a closed volume.
Volume boundaries(const Graph& g, const VertexSet& delta);

}  // namespace gibbscert
