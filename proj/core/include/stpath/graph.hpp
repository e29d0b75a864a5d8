#pragma once

/// @file graph.hpp
/// @brief Complete-graph indexing, vertex sets and small tree utilities.
///
/// Cities are 0..n-1 with n <= 64 so that vertex subsets fit a single
/// machine word. Edges of the complete graph are unordered pairs {u,v},
/// u < v, mapped to a dense id in lexicographic order.

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stpath {

using City = int;
using EdgeId = int;
using VertexSet = std::uint64_t;

inline constexpr int kMaxCities = 64;

struct Edge {
  City u = 0;
  City v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free list of edge ids.
using EdgeSet = std::vector<EdgeId>;

class EdgeIndex {
 public:
  EdgeIndex() = default;
  explicit EdgeIndex(int num_cities);

  int num_cities() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Dense id of {u,v}; argument order does not matter, u != v.
  EdgeId id(City u, City v) const {
    if (u > v) std::swap(u, v);
    return offset_[u] + (v - u - 1);
  }
  const Edge& endpoints(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

 private:
  int n_ = 0;
  std::vector<int> offset_;
  std::vector<Edge> edges_;
};

inline VertexSet singleton(City v) { return VertexSet{1} << v; }
inline bool contains(VertexSet set, City v) { return (set >> v) & 1U; }
inline int set_size(VertexSet set) { return std::popcount(set); }
inline VertexSet full_set(int n) { return n >= 64 ? ~VertexSet{0} : (VertexSet{1} << n) - 1; }

/// Exactly one endpoint in `set` (the edge lies in the cut delta(set)).
inline bool crosses(const Edge& e, VertexSet set) { return contains(set, e.u) != contains(set, e.v); }
/// Both endpoints in `set` (the edge lies in E[set]).
inline bool inside(const Edge& e, VertexSet set) { return contains(set, e.u) && contains(set, e.v); }

std::vector<City> members(VertexSet set);
std::string set_to_string(VertexSet set);

int count_crossing(const EdgeSet& edges, const EdgeIndex& index, VertexSet set);
int count_inside(const EdgeSet& edges, const EdgeIndex& index, VertexSet set);
/// Edges of `edges` lying in both cuts delta(a) and delta(b).
int count_crossing_both(const EdgeSet& edges, const EdgeIndex& index, VertexSet a, VertexSet b);

/// Union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(int size);
  int find(int x);
  bool unite(int a, int b);

 private:
  std::vector<int> parent_;
};

bool is_spanning_tree(const EdgeSet& edges, const EdgeIndex& index);

/// Vertex sets of the connected components of (set, edges ∩ E[set]),
/// ordered by their lowest city.
std::vector<VertexSet> induced_components(const EdgeSet& edges, const EdgeIndex& index, VertexSet set);

bool induces_connected(const EdgeSet& edges, const EdgeIndex& index, VertexSet set);

/// Vertices reachable from `start` using the edges for which `keep` is true.
VertexSet reachable(const EdgeSet& edges, const EdgeIndex& index, City start,
                    const std::function<bool(EdgeId)>& keep);

/// Edge ids on the unique a-b path of a spanning tree, ordered from a to b.
std::vector<EdgeId> tree_path(const EdgeSet& tree, const EdgeIndex& index, City a, City b);

/// Degree of every city in the multiset of edges.
std::vector<int> degrees(std::span<const EdgeId> edges, const EdgeIndex& index);

EdgeSet with_swap(const EdgeSet& edges, EdgeId remove, EdgeId add);

}  // namespace stpath
