#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "gibbscert/graph.hpp"
#include "gibbscert/temperedness.hpp"

namespace gibbscert {

/// Path 0 - 1 - ... - (n-1).
Graph chain(std::size_t n);
/// Cycle on n >= 3 vertices.
Graph cycle(std::size_t n);
/// a x b grid; vertex (i, j) has id i * b + j.
Graph grid(std::size_t a, std::size_t b);
/// Center 0 with leaves 1..k.
Graph star(std::size_t k);
/// Rooted tree: the root has 2 children and each vertex at depth l >= 1 has
/// l + 2 children, down to the given depth. Ids follow breadth-first order.
Graph growing_tree(std::size_t depth);
/// Chain 0..6 with three extra leaves 7, 8, 9 on vertex 3, which then has
/// degree 5: a star K_{1,5} embedded in a chain.
Graph star_chain();

struct RepulsiveTreeSpec {
  std::vector<std::size_t> hub_degrees;  ///< each >= 2
  std::size_t spine_length = 0;          ///< number of spine vertices
  RepulsivenessSpec repulsion;
};

/// Spine 0..L-1 with hubs placed greedily left to right at the first interior
/// spine position far enough from every earlier hub; hub i receives
/// d_i - 2 pendant leaves. Throws InvalidInput naming the first hub that
/// does not fit, or if the result fails check_repulsive.
Graph repulsive_tree(const RepulsiveTreeSpec& spec);

/// Spine positions chosen by repulsive_tree for each hub.
std::vector<Vertex> repulsive_hub_positions(const RepulsiveTreeSpec& spec);

/// Named families: chain:N, cycle:N, grid:AxB, star:K, growing-tree:D, star-chain.
Graph generate_named(std::string_view spec);

}  // namespace gibbscert
