#include "gibbscert/enumerate.hpp"

#include <algorithm>
#include <string>

#include "gibbscert/errors.hpp"

namespace gibbscert {

bool is_simple_path(const Graph& g, std::span<const Vertex> path) {
  if (path.empty()) return false;
  std::vector<Vertex> seen(path.begin(), path.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!g.adjacent(path[i], path[i + 1])) return false;
  }
  return true;
}

Animal induced_animal(const Graph& g, VertexSet vertices) {
  vertices = make_vertex_set(std::move(vertices));
  Animal a;
  for (Vertex x : vertices) {
    for (Vertex y : g.neighbors(x)) {
      if (x < y && contains(vertices, y)) a.edges.push_back(Edge{x, y});
    }
  }
  a.vertices = std::move(vertices);
  return a;
}

Animal path_animal(std::span<const Vertex> path) {
  Animal a;
  a.vertices = make_vertex_set(std::vector<Vertex>(path.begin(), path.end()));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    a.edges.push_back(Edge{std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
  }
  std::sort(a.edges.begin(), a.edges.end());
  a.edges.erase(std::unique(a.edges.begin(), a.edges.end()), a.edges.end());
  return a;
}

bool is_animal(const Graph& g, const Animal& a) {
  if (a.vertices.empty()) return false;
  for (const Edge& e : a.edges) {
    if (!g.adjacent(e.u, e.v) || !contains(a.vertices, e.u) || !contains(a.vertices, e.v)) {
      return false;
    }
  }
  // Union-find over the animal's own edges.
  std::vector<std::size_t> parent(a.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index = [&](Vertex v) {
    return static_cast<std::size_t>(
        std::lower_bound(a.vertices.begin(), a.vertices.end(), v) - a.vertices.begin());
  };
  std::size_t components = a.vertices.size();
  for (const Edge& e : a.edges) {
    const auto ru = find(index(e.u));
    const auto rv = find(index(e.v));
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components == 1;
}

namespace {

void check_domain(const Graph& g, const VertexSet& domain) {
  if (!domain.empty() && domain.back() >= g.num_vertices()) {
    throw InvalidInput("vertex " + std::to_string(domain.back()) + " not in graph");
  }
}

class PathSearch {
 public:
  PathSearch(const Graph& g, const VertexSet& domain, const VertexSet& targets,
             std::size_t max_len, const Caps& caps, const PathVisitor& visit)
      : g_(g),
        in_domain_(g.num_vertices(), 0),
        is_target_(g.num_vertices(), 0),
        on_path_(g.num_vertices(), 0),
        max_len_(max_len),
        guard_(caps),
        visit_(visit) {
    for (Vertex v : domain) in_domain_[v] = 1;
    for (Vertex v : targets) is_target_[v] = 1;
  }

  EnumerationStatus run(Vertex origin) {
    path_.push_back(origin);
    on_path_[origin] = 1;
    extend();
    return guard_.status();
  }

 private:
  void extend() {
    if (!guard_.tick()) return;
    const Vertex last = path_.back();
    if (path_.size() > 1 && is_target_[last]) {
      if (!guard_.admit()) return;
      visit_(path_);
    }
    if (path_.size() - 1 >= max_len_) return;
    for (Vertex w : g_.neighbors(last)) {
      if (!in_domain_[w] || on_path_[w]) continue;
      path_.push_back(w);
      on_path_[w] = 1;
      extend();
      on_path_[w] = 0;
      path_.pop_back();
      if (guard_.stopped()) return;
    }
  }

  const Graph& g_;
  std::vector<char> in_domain_;
  std::vector<char> is_target_;
  std::vector<char> on_path_;
  std::vector<Vertex> path_;
  std::size_t max_len_;
  CapGuard guard_;
  const PathVisitor& visit_;
};

// Wernicke's ESU scheme: every connected subset is reached exactly once from
// its smallest vertex, extending only through exclusive neighbors.
class AnimalSearch {
 public:
  AnimalSearch(const Graph& g, const VertexSet& host, std::size_t min_vertices,
               std::size_t max_vertices, const Caps& caps, const VertexSetVisitor& visit)
      : g_(g),
        in_host_(g.num_vertices(), 0),
        in_sub_(g.num_vertices(), 0),
        touch_(g.num_vertices(), 0),
        min_(min_vertices),
        max_(max_vertices),
        guard_(caps),
        visit_(visit) {
    for (Vertex v : host) in_host_[v] = 1;
  }

  EnumerationStatus run(const VertexSet& host) {
    for (Vertex root : host) {
      root_ = root;
      add(root);
      std::vector<Vertex> ext;
      for (Vertex u : g_.neighbors(root)) {
        if (u > root && in_host_[u]) ext.push_back(u);
      }
      extend(std::move(ext));
      remove(root);
      if (guard_.stopped()) break;
    }
    return guard_.status();
  }

 private:
  void add(Vertex v) {
    in_sub_[v] = 1;
    sub_.push_back(v);
    for (Vertex u : g_.neighbors(v)) ++touch_[u];
  }

  void remove(Vertex v) {
    in_sub_[v] = 0;
    sub_.pop_back();
    for (Vertex u : g_.neighbors(v)) --touch_[u];
  }

  void extend(std::vector<Vertex> ext) {
    if (!guard_.tick()) return;
    if (sub_.size() >= min_) {
      if (!guard_.admit()) return;
      sorted_.assign(sub_.begin(), sub_.end());
      std::sort(sorted_.begin(), sorted_.end());
      visit_(sorted_);
    }
    if (sub_.size() >= max_) return;
    while (!ext.empty()) {
      const Vertex w = ext.front();
      ext.erase(ext.begin());
      std::vector<Vertex> next = ext;
      for (Vertex u : g_.neighbors(w)) {
        // Exclusive neighbor of w: not in, and not adjacent to, the current set.
        if (u > root_ && in_host_[u] && !in_sub_[u] && touch_[u] == 0) next.push_back(u);
      }
      add(w);
      extend(std::move(next));
      remove(w);
      if (guard_.stopped()) return;
    }
  }

  const Graph& g_;
  std::vector<char> in_host_;
  std::vector<char> in_sub_;
  std::vector<std::uint32_t> touch_;
  std::vector<Vertex> sub_;
  std::vector<Vertex> sorted_;
  Vertex root_ = 0;
  std::size_t min_;
  std::size_t max_;
  CapGuard guard_;
  const VertexSetVisitor& visit_;
};

}  // namespace

EnumerationStatus enumerate_simple_paths(const Graph& g, const VertexSet& domain,
                                         Vertex origin, const VertexSet& targets,
                                         std::size_t max_len, const Caps& caps,
                                         const PathVisitor& visit) {
  check_domain(g, domain);
  if (!contains(domain, origin)) {
    throw InvalidInput("path origin " + std::to_string(origin) + " outside domain");
  }
  for (Vertex t : targets) {
    if (!contains(domain, t)) {
      throw InvalidInput("path target " + std::to_string(t) + " outside domain");
    }
  }
  PathSearch search(g, domain, targets, max_len, caps, visit);
  return search.run(origin);
}

PathCollection collect_simple_paths(const Graph& g, const VertexSet& domain,
                                    Vertex origin, const VertexSet& targets,
                                    std::size_t max_len, const Caps& caps) {
  PathCollection out;
  out.status = enumerate_simple_paths(
      g, domain, origin, targets, max_len, caps, [&](std::span<const Vertex> p) {
        out.paths.push_back(SimplePath{std::vector<Vertex>(p.begin(), p.end())});
      });
  return out;
}

EnumerationStatus enumerate_animals(const Graph& g, const VertexSet& host,
                                    std::size_t min_vertices,
                                    std::size_t max_vertices, const Caps& caps,
                                    const VertexSetVisitor& visit) {
  if (min_vertices < 1) throw InvalidInput("min_vertices must be at least 1");
  check_domain(g, host);
  if (max_vertices < min_vertices) return {};
  AnimalSearch search(g, host, min_vertices, max_vertices, caps, visit);
  return search.run(host);
}

}  // namespace gibbscert
