#include "stpath/parity.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "stpath/error.hpp"

namespace stpath {

namespace {

/// dp[mask] = cheapest perfect matching of the targets in mask; the lowest
/// target of a mask is always matched first.
template <class Cost>
std::vector<std::pair<int, int>> matching_dp(const std::vector<std::vector<Cost>>& cost, const Cost& infinity) {
  const int k = static_cast<int>(cost.size());
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  std::vector<Cost> dp(std::size_t{full} + 1, infinity);
  dp[0] = Cost(0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(std::uint32_t{1} << i);
    for (std::uint32_t bits = rest; bits; bits &= bits - 1) {
      const int j = std::countr_zero(bits);
      const Cost& sub = dp[rest & ~(std::uint32_t{1} << j)];
      if (sub == infinity) continue;
      Cost candidate = sub + cost[i][j];
      if (candidate < dp[mask]) dp[mask] = std::move(candidate);
    }
  }
  std::vector<std::pair<int, int>> pairs;
  std::uint32_t mask = full;
  while (mask) {
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(std::uint32_t{1} << i);
    bool found = false;
    for (std::uint32_t bits = rest; bits; bits &= bits - 1) {
      const int j = std::countr_zero(bits);
      const std::uint32_t next = rest & ~(std::uint32_t{1} << j);
      if (dp[next] != infinity && dp[next] + cost[i][j] == dp[mask]) {
        pairs.push_back({i, j});
        mask = next;
        found = true;
        break;
      }
    }
    if (!found) throw NumericalError("matching reconstruction failed");
  }
  return pairs;
}

}  // namespace

Rational edge_set_cost(const Instance& inst, const EdgeSet& edges) {
  Rational total(0);
  for (EdgeId e : edges) total += inst.edge_cost(e);
  return total;
}

VertexSet wrong_parity_set(const EdgeSet& tree, const EdgeIndex& index, City s, City t) {
  const auto deg = degrees(tree, index);
  VertexSet out = 0;
  for (City v = 0; v < index.num_cities(); ++v) {
    const bool endpoint = v == s || v == t;
    if ((deg[v] % 2 == 0) == endpoint) out |= singleton(v);
  }
  return out;
}

TJoin min_tjoin(const Instance& inst, VertexSet targets, int cap) {
  const auto cities = members(targets);
  const int k = static_cast<int>(cities.size());
  if (k % 2 != 0) throw InputError("T-join target set has odd size " + std::to_string(k));
  if (k > cap || k > 30) {
    throw InputError("T-join target set has " + std::to_string(k) + " cities, above the matching cap " +
                     std::to_string(cap));
  }
  TJoin out;
  out.cost = 0;
  if (k == 0) return out;

  // Exact costs scaled to a common denominator run the DP in machine
  // integers whenever the largest possible total fits.
  mpz_class den(1);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const Rational& c = inst.cost(cities[a], cities[b]);
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
  }
  std::vector<std::vector<mpz_class>> scaled(k, std::vector<mpz_class>(k));
  mpz_class largest(0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      const Rational& c = inst.cost(cities[a], cities[b]);
      scaled[a][b] = c.get_num() * (den / c.get_den());
      largest = std::max(largest, scaled[a][b]);
    }
  }
  std::vector<std::pair<int, int>> pairs;
  if (largest * (k / 2 + 1) < mpz_class(std::numeric_limits<std::int64_t>::max() / 2)) {
    std::vector<std::vector<std::int64_t>> cost(k, std::vector<std::int64_t>(k, 0));
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) cost[a][b] = a == b ? 0 : scaled[a][b].get_si();
    }
    pairs = matching_dp<std::int64_t>(cost, std::numeric_limits<std::int64_t>::max());
  } else {
    std::vector<std::vector<Rational>> cost(k, std::vector<Rational>(k, Rational(0)));
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) cost[a][b] = inst.cost(cities[a], cities[b]);
    }
    pairs = matching_dp<Rational>(cost, Rational(-1));
  }
  for (auto [a, b] : pairs) {
    out.edges.push_back(inst.edges().id(cities[a], cities[b]));
    out.cost += inst.cost(cities[a], cities[b]);
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

HamPath assemble_tour(const Instance& inst, const EdgeSet& tree, const EdgeSet& join) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  std::vector<EdgeId> multi(tree.begin(), tree.end());
  multi.insert(multi.end(), join.begin(), join.end());
  const auto deg = degrees(multi, index);
  for (City v = 0; v < n; ++v) {
    const bool endpoint = v == inst.s() || v == inst.t();
    if ((deg[v] % 2 == 1) != endpoint) {
      throw InputError("tree plus join has wrong parity at city " + std::to_string(v));
    }
  }
  DisjointSets sets(n);
  int merged = 0;
  for (EdgeId e : multi) merged += sets.unite(index.endpoints(e).u, index.endpoints(e).v) ? 1 : 0;
  if (merged != n - 1) throw InputError("tree plus join is disconnected");

  // Incidence lists sorted by edge id; slot ids distinguish parallel copies.
  std::vector<std::vector<std::pair<EdgeId, int>>> adj(n);
  for (int slot = 0; slot < static_cast<int>(multi.size()); ++slot) {
    const Edge& e = index.endpoints(multi[slot]);
    adj[e.u].push_back({multi[slot], slot});
    adj[e.v].push_back({multi[slot], slot});
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  std::vector<bool> used(multi.size(), false);
  std::vector<std::size_t> next(n, 0);
  std::vector<City> stack{inst.s()};
  std::vector<City> trail;
  while (!stack.empty()) {
    const City v = stack.back();
    auto& pos = next[v];
    while (pos < adj[v].size() && used[adj[v][pos].second]) ++pos;
    if (pos == adj[v].size()) {
      trail.push_back(v);
      stack.pop_back();
      continue;
    }
    const auto [e, slot] = adj[v][pos];
    used[slot] = true;
    const Edge& ed = index.endpoints(e);
    stack.push_back(ed.u == v ? ed.v : ed.u);
  }
  std::reverse(trail.begin(), trail.end());
  if (trail.size() != multi.size() + 1 || trail.back() != inst.t()) {
    throw StructureViolation("Euler trail does not run from s to t");
  }

  HamPath path;
  std::vector<bool> seen(n, false);
  for (City v : trail) {
    if (v == inst.t() || seen[v]) continue;
    seen[v] = true;
    path.order.push_back(v);
  }
  path.order.push_back(inst.t());
  path.cost = path_cost(inst, path.order);
  if (!is_hamiltonian_st_path(inst, path.order)) throw StructureViolation("shortcut walk is not a Hamiltonian path");
  return path;
}

TourCandidate parity_correct(const Instance& inst, const EdgeSet& tree, int cap) {
  TourCandidate out;
  out.tree = tree;
  out.tree_cost = edge_set_cost(inst, tree);
  out.join = min_tjoin(inst, wrong_parity_set(tree, inst.edges(), inst.s(), inst.t()), cap);
  out.path = assemble_tour(inst, tree, out.join.edges);
  if (out.path.cost > out.tree_cost + out.join.cost) {
    throw CertificateFailure("shortcut path is more expensive than tree plus join");
  }
  return out;
}

}  // namespace stpath
