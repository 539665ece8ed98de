#include "gibbscert/generators.hpp"

#include <algorithm>
#include <charconv>
#include <string>
#include <utility>

#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

Vertex id(std::size_t v) { return static_cast<Vertex>(v); }

}  // namespace

Graph chain(std::size_t n) {
  if (n == 0) throw InvalidInput("chain needs at least one vertex");
  EdgeList e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(id(i), id(i + 1));
  return Graph::from_edges(e, n);
}

Graph cycle(std::size_t n) {
  if (n < 3) throw InvalidInput("cycle needs at least three vertices");
  EdgeList e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(id(i), id((i + 1) % n));
  return Graph::from_edges(e, n);
}

Graph grid(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) throw InvalidInput("grid sides must be positive");
  EdgeList e;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (j + 1 < b) e.emplace_back(id(i * b + j), id(i * b + j + 1));
      if (i + 1 < a) e.emplace_back(id(i * b + j), id((i + 1) * b + j));
    }
  }
  return Graph::from_edges(e, a * b);
}

Graph star(std::size_t k) {
  if (k == 0) throw InvalidInput("star needs at least one leaf");
  EdgeList e;
  for (std::size_t i = 1; i <= k; ++i) e.emplace_back(0, id(i));
  return Graph::from_edges(e, k + 1);
}

Graph growing_tree(std::size_t depth) {
  if (depth == 0) throw InvalidInput("growing tree depth must be positive");
  EdgeList e;
  std::vector<Vertex> layer{0};
  std::size_t next = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t children = l == 0 ? 2 : l + 2;
    std::vector<Vertex> below;
    for (Vertex p : layer) {
      for (std::size_t c = 0; c < children; ++c) {
        e.emplace_back(p, id(next));
        below.push_back(id(next++));
      }
    }
    layer = std::move(below);
  }
  return Graph::from_edges(e, next);
}

Graph star_chain() {
  EdgeList e;
  for (Vertex i = 0; i < 6; ++i) e.emplace_back(i, i + 1);
  for (Vertex leaf : {7u, 8u, 9u}) e.emplace_back(3, leaf);
  return Graph::from_edges(e, 10);
}

std::vector<Vertex> repulsive_hub_positions(const RepulsiveTreeSpec& spec) {
  if (spec.spine_length < 3) throw InvalidInput("repulsive tree spine needs at least 3 vertices");
  const auto& rep = spec.repulsion;
  std::vector<Vertex> pos;
  std::size_t candidate = 1;
  for (std::size_t i = 0; i < spec.hub_degrees.size(); ++i) {
    const std::size_t di = spec.hub_degrees[i];
    if (di < 2) {
      throw InvalidInput("hub " + std::to_string(i) + " has degree " + std::to_string(di) +
                         "; spine hubs need degree >= 2");
    }
    bool placed = false;
    for (; candidate + 1 < spec.spine_length; ++candidate) {
      bool ok = true;
      for (std::size_t j = 0; j < pos.size() && ok; ++j) {
        const std::size_t dj = spec.hub_degrees[j];
        const std::size_t m =
            rep.mode == RepulsionMode::min_degree ? std::min(di, dj) : std::max(di, dj);
        if (m < rep.n_star) continue;
        const double need = rep.phi(static_cast<double>(m));
        ok = static_cast<double>(candidate - pos[j]) >= need;
      }
      if (ok) {
        pos.push_back(id(candidate));
        ++candidate;
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw InvalidInput("hub " + std::to_string(i) + " (degree " + std::to_string(di) +
                         ") cannot be placed on a spine of length " +
                         std::to_string(spec.spine_length));
    }
  }
  return pos;
}

namespace {

std::size_t parse_size(std::string_view text, std::string_view spec) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidInput("bad size '" + std::string(text) + "' in graph spec '" + std::string(spec) + "'");
  }
  return v;
}

}  // namespace

Graph generate_named(std::string_view spec) {
  if (spec == "star-chain") return star_chain();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("graph spec must look like kind:size, got '" + std::string(spec) + "'");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = spec.substr(colon + 1);
  if (kind == "chain") return chain(parse_size(arg, spec));
  if (kind == "cycle") return cycle(parse_size(arg, spec));
  if (kind == "star") return star(parse_size(arg, spec));
  if (kind == "growing-tree") return growing_tree(parse_size(arg, spec));
  if (kind == "grid") {
    const auto x = arg.find('x');
    if (x == std::string_view::npos) throw InvalidInput("grid spec must look like grid:AxB");
    return grid(parse_size(arg.substr(0, x), spec), parse_size(arg.substr(x + 1), spec));
  }
  throw InvalidInput("unknown graph kind '" + std::string(kind) + "'");
}

Graph repulsive_tree(const RepulsiveTreeSpec& spec) {
  const auto pos = repulsive_hub_positions(spec);
  EdgeList e;
  for (std::size_t i = 0; i + 1 < spec.spine_length; ++i) e.emplace_back(id(i), id(i + 1));
  std::size_t next = spec.spine_length;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t k = 2; k < spec.hub_degrees[i]; ++k) e.emplace_back(pos[i], id(next++));
  }
  Graph g = Graph::from_edges(e, next);
  const auto report = check_repulsive(g, spec.repulsion);
  if (!report.holds) {
    const auto& v = report.violations.front();
    throw InvalidInput("repulsive tree spec is infeasible: vertices " + std::to_string(v.x) +
                       " and " + std::to_string(v.y) + " at distance " +
                       std::to_string(v.distance) + " need distance >= " +
                       std::to_string(v.required));
  }
  return g;
}

}  // namespace gibbscert
