#include "gibbscert/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "gibbscert/errors.hpp"

namespace gibbscert {

VertexSet make_vertex_set(std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

bool contains(const VertexSet& set, Vertex v) {
  return std::binary_search(set.begin(), set.end(), v);
}

Graph Graph::from_edges(std::span<const std::pair<Vertex, Vertex>> edges,
                        std::size_t min_vertices) {
  std::vector<Edge> canonical;
  canonical.reserve(edges.size());
  std::size_t n = min_vertices;
  for (const auto& [a, b] : edges) {
    if (a == b) {
      throw InvalidInput("loop edge (" + std::to_string(a) + "," +
                         std::to_string(b) + ")");
    }
    canonical.push_back(Edge{std::min(a, b), std::max(a, b)});
    n = std::max<std::size_t>(n, std::size_t{std::max(a, b)} + 1);
  }
  std::sort(canonical.begin(), canonical.end());
  canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());

  Graph g;
  g.adjacency_.resize(n);
  g.incident_.resize(n);
  g.edges_ = std::move(canonical);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  for (Vertex v = 0; v < n; ++v) {
    std::sort(g.adjacency_[v].begin(), g.adjacency_[v].end());
    g.incident_[v].reserve(g.adjacency_[v].size());
    for (Vertex w : g.adjacency_[v]) {
      g.incident_[v].push_back(*g.edge_index(v, w));
    }
  }
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& nbrs : adjacency_) best = std::max(best, nbrs.size());
  return best;
}

bool Graph::adjacent(Vertex x, Vertex y) const {
  if (x >= adjacency_.size() || y >= adjacency_.size()) return false;
  const auto& nbrs = adjacency_[x];
  return std::binary_search(nbrs.begin(), nbrs.end(), y);
}

std::optional<std::size_t> Graph::edge_index(Vertex x, Vertex y) const {
  const Edge key{std::min(x, y), std::max(x, y)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::is_connected() const {
  if (adjacency_.empty()) return true;
  const auto dist = bfs_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == kUnreachable; });
}

std::vector<std::size_t> bfs_distances(const Graph& g, Vertex source,
                                       std::size_t max_radius) {
  if (source >= g.num_vertices()) {
    throw InvalidInput("vertex " + std::to_string(source) + " not in graph");
  }
  std::vector<std::size_t> dist(g.num_vertices(), kUnreachable);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    if (dist[v] >= max_radius) continue;
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::size_t distance(const Graph& g, Vertex x, Vertex y) {
  if (y >= g.num_vertices()) {
    throw InvalidInput("vertex " + std::to_string(y) + " not in graph");
  }
  const std::size_t d = bfs_distances(g, x)[y];
  if (d == kUnreachable) {
    throw Unreachable("vertices " + std::to_string(x) + " and " +
                      std::to_string(y) + " are unreachable from each other");
  }
  return d;
}

VertexSet ball_vertices(const Graph& g, Vertex x, std::size_t r) {
  const auto dist = bfs_distances(g, x, r);
  VertexSet out;
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v] <= r) out.push_back(v);
  }
  return out;
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& vertices) {
  std::vector<std::pair<Vertex, Vertex>> local_edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex w : g.neighbors(vertices[i])) {
      if (w <= vertices[i]) continue;
      auto it = std::lower_bound(vertices.begin(), vertices.end(), w);
      if (it != vertices.end() && *it == w) {
        local_edges.emplace_back(static_cast<Vertex>(i),
                                 static_cast<Vertex>(it - vertices.begin()));
      }
    }
  }
  return InducedSubgraph{Graph::from_edges(local_edges, vertices.size()), vertices};
}

InducedSubgraph ball(const Graph& g, Vertex x, std::size_t r) {
  return induced_subgraph(g, ball_vertices(g, x, r));
}

std::optional<std::size_t> Volume::position(Vertex v) const {
  auto it = std::lower_bound(delta.begin(), delta.end(), v);
  if (it == delta.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - delta.begin());
}

std::optional<std::size_t> Volume::outer_position(Vertex v) const {
  auto it = std::lower_bound(outer.begin(), outer.end(), v);
  if (it == outer.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - outer.begin());
}

Volume boundaries(const Graph& g, const VertexSet& delta) {
  if (delta.empty()) throw InvalidInput("volume must be nonempty");
  if (!std::is_sorted(delta.begin(), delta.end()) ||
      std::adjacent_find(delta.begin(), delta.end()) != delta.end()) {
    throw InvalidInput("volume vertex set must be sorted and duplicate-free");
  }
  if (delta.back() >= g.num_vertices()) {
    throw InvalidInput("vertex " + std::to_string(delta.back()) + " not in graph");
  }
  std::vector<char> in_delta(g.num_vertices(), 0);
  for (Vertex v : delta) in_delta[v] = 1;

  Volume vol;
  vol.delta = delta;
  std::vector<Vertex> outer;
  for (Vertex x : delta) {
    bool touches_outside = false;
    const auto nbrs = g.neighbors(x);
    const auto inc = g.incident_edges(x);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Vertex y = nbrs[k];
      if (in_delta[y]) {
        if (x < y) vol.interior_edges.push_back(inc[k]);
      } else {
        touches_outside = true;
        outer.push_back(y);
        vol.boundary_edges.push_back(inc[k]);
      }
    }
    (touches_outside ? vol.inner : vol.interior).push_back(x);
  }
  vol.outer = make_vertex_set(std::move(outer));
  std::sort(vol.interior_edges.begin(), vol.interior_edges.end());
  std::sort(vol.boundary_edges.begin(), vol.boundary_edges.end());
  return vol;
}

}  // namespace gibbscert
