#pragma once

/// @file parity.hpp
/// @brief Parity correction of a spanning tree into a Hamiltonian s-t path.

#include <vector>

#include "stpath/instance.hpp"

namespace stpath {

inline constexpr int kDefaultMatchingCap = 22;

/// Cities whose tree degree has the wrong parity: even at s or t, odd
/// elsewhere.
VertexSet wrong_parity_set(const EdgeSet& tree, const EdgeIndex& index, City s, City t);

struct TJoin {
  /// Matching edges, sorted by id.
  EdgeSet edges;
  Rational cost;
};

/// Minimum-cost perfect matching on `targets` by subset dynamic programming,
/// which is a minimum T-join in a complete metric graph.
TJoin min_tjoin(const Instance& inst, VertexSet targets, int cap = kDefaultMatchingCap);

/// Shortcuts an Euler s-t trail of tree ⊎ join (Hierholzer, lowest edge id
/// first) to a Hamiltonian s-t path. Throws InputError when the multigraph
/// is disconnected or its odd cities are not exactly {s, t}.
HamPath assemble_tour(const Instance& inst, const EdgeSet& tree, const EdgeSet& join);

struct TourCandidate {
  EdgeSet tree;
  TJoin join;
  HamPath path;
  Rational tree_cost;
};

/// Tree cost, minimum T_S-join and the shortcut path.
TourCandidate parity_correct(const Instance& inst, const EdgeSet& tree, int cap = kDefaultMatchingCap);

Rational edge_set_cost(const Instance& inst, const EdgeSet& edges);

}  // namespace stpath
