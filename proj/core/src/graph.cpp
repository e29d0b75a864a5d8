#include "stpath/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "stpath/error.hpp"

namespace stpath {

EdgeIndex::EdgeIndex(int num_cities) : n_(num_cities) {
  if (num_cities < 1 || num_cities > kMaxCities) {
    throw InputError("city count must be in [1, 64], got " + std::to_string(num_cities));
  }
  offset_.resize(n_);
  for (City u = 0; u < n_; ++u) {
    offset_[u] = static_cast<int>(edges_.size());
    for (City v = u + 1; v < n_; ++v) edges_.push_back({u, v});
  }
}

std::vector<City> members(VertexSet set) {
  std::vector<City> out;
  while (set) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

std::string set_to_string(VertexSet set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (City v : members(set)) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << '}';
  return os.str();
}

int count_crossing(const EdgeSet& edges, const EdgeIndex& index, VertexSet set) {
  int count = 0;
  for (EdgeId e : edges) count += crosses(index.endpoints(e), set) ? 1 : 0;
  return count;
}

int count_inside(const EdgeSet& edges, const EdgeIndex& index, VertexSet set) {
  int count = 0;
  for (EdgeId e : edges) count += inside(index.endpoints(e), set) ? 1 : 0;
  return count;
}

int count_crossing_both(const EdgeSet& edges, const EdgeIndex& index, VertexSet a, VertexSet b) {
  int count = 0;
  for (EdgeId e : edges) {
    const Edge& ed = index.endpoints(e);
    count += (crosses(ed, a) && crosses(ed, b)) ? 1 : 0;
  }
  return count;
}

DisjointSets::DisjointSets(int size) : parent_(size) { std::iota(parent_.begin(), parent_.end(), 0); }

int DisjointSets::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (a > b) std::swap(a, b);
  parent_[b] = a;
  return true;
}

bool is_spanning_tree(const EdgeSet& edges, const EdgeIndex& index) {
  const int n = index.num_cities();
  if (static_cast<int>(edges.size()) != n - 1) return false;
  DisjointSets sets(n);
  for (std::size_t a = 0; a < edges.size(); ++a) {
    if (edges[a] < 0 || edges[a] >= index.num_edges()) return false;
    if (a > 0 && edges[a] <= edges[a - 1]) return false;
    const Edge& e = index.endpoints(edges[a]);
    if (!sets.unite(e.u, e.v)) return false;
  }
  return true;
}

std::vector<VertexSet> induced_components(const EdgeSet& edges, const EdgeIndex& index, VertexSet set) {
  DisjointSets sets(index.num_cities());
  for (EdgeId e : edges) {
    const Edge& ed = index.endpoints(e);
    if (inside(ed, set)) sets.unite(ed.u, ed.v);
  }
  std::vector<VertexSet> by_root(index.num_cities(), 0);
  for (City v : members(set)) by_root[sets.find(v)] |= singleton(v);
  std::vector<VertexSet> out;
  for (City v : members(set)) {
    if (by_root[sets.find(v)] != 0) {
      out.push_back(by_root[sets.find(v)]);
      by_root[sets.find(v)] = 0;
    }
  }
  return out;
}

bool induces_connected(const EdgeSet& edges, const EdgeIndex& index, VertexSet set) {
  if (set == 0) return true;
  return count_inside(edges, index, set) >= set_size(set) - 1 &&
         induced_components(edges, index, set).size() == 1;
}

VertexSet reachable(const EdgeSet& edges, const EdgeIndex& index, City start,
                    const std::function<bool(EdgeId)>& keep) {
  VertexSet seen = singleton(start);
  bool grew = true;
  while (grew) {
    grew = false;
    for (EdgeId e : edges) {
      if (!keep(e)) continue;
      const Edge& ed = index.endpoints(e);
      if (contains(seen, ed.u) != contains(seen, ed.v)) {
        seen |= singleton(ed.u) | singleton(ed.v);
        grew = true;
      }
    }
  }
  return seen;
}

std::vector<EdgeId> tree_path(const EdgeSet& tree, const EdgeIndex& index, City a, City b) {
  const int n = index.num_cities();
  std::vector<std::vector<std::pair<City, EdgeId>>> adj(n);
  for (EdgeId e : tree) {
    const Edge& ed = index.endpoints(e);
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  std::vector<EdgeId> via(n, -1);
  std::vector<City> prev(n, -1);
  std::vector<City> stack{a};
  prev[a] = a;
  while (!stack.empty()) {
    const City v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adj[v]) {
      if (prev[w] != -1) continue;
      prev[w] = v;
      via[w] = e;
      stack.push_back(w);
    }
  }
  if (prev[b] == -1) throw StructureViolation("tree_path: endpoints not connected");
  std::vector<EdgeId> path;
  for (City v = b; v != a; v = prev[v]) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> degrees(std::span<const EdgeId> edges, const EdgeIndex& index) {
  std::vector<int> deg(index.num_cities(), 0);
  for (EdgeId e : edges) {
    ++deg[index.endpoints(e).u];
    ++deg[index.endpoints(e).v];
  }
  return deg;
}

EdgeSet with_swap(const EdgeSet& edges, EdgeId remove, EdgeId add) {
  EdgeSet out;
  out.reserve(edges.size());
  for (EdgeId e : edges) {
    if (e != remove) out.push_back(e);
  }
  out.insert(std::lower_bound(out.begin(), out.end(), add), add);
  return out;
}

}  // namespace stpath
