#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "stpath/instance.hpp"
#include "stpath/reassembly.hpp"

namespace stpath::fixtures {

/// c(i,j) = |i - j|, s = 0, t = n-1.
inline Instance line_instance(int n) {
  CostMatrix c(n * n, Rational(0));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) c[u * n + v] = std::abs(u - v);
  }
  return Instance("line-" + std::to_string(n), n, 0, n - 1, c);
}

/// All costs one.
inline Instance uniform_instance(int n) {
  CostMatrix c(n * n, Rational(0));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) c[u * n + v] = u == v ? 0 : 1;
  }
  return Instance("uniform-" + std::to_string(n), n, 0, n - 1, c);
}

inline EdgeSet tree_of(const EdgeIndex& index, std::initializer_list<std::pair<int, int>> edges) {
  EdgeSet out;
  for (auto [u, v] : edges) out.push_back(index.id(u, v));
  std::sort(out.begin(), out.end());
  return out;
}

inline EdgeSet path_tree(const EdgeIndex& index, const std::vector<City>& order) {
  EdgeSet out;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) out.push_back(index.id(order[i], order[i + 1]));
  std::sort(out.begin(), out.end());
  return out;
}

/// A convex combination of random Hamiltonian 0-(n-1) paths with an even
/// total count; x is its edge vector.
struct SyntheticEnsemble {
  std::vector<Block> blocks;
  std::vector<Rational> x;
  std::int64_t r = 0;
};

inline SyntheticEnsemble random_path_ensemble(std::mt19937_64& rng, int n, int paths) {
  const EdgeIndex index(n);
  SyntheticEnsemble out;
  for (int p = 0; p < paths; ++p) {
    std::vector<City> mid(n - 2);
    std::iota(mid.begin(), mid.end(), 1);
    std::shuffle(mid.begin(), mid.end(), rng);
    std::vector<City> order{0};
    order.insert(order.end(), mid.begin(), mid.end());
    order.push_back(n - 1);
    out.blocks.push_back({path_tree(index, order), static_cast<std::int64_t>(1 + rng() % 3)});
  }
  for (const auto& b : out.blocks) out.r += b.count;
  if (out.r % 2 != 0) {
    for (auto& b : out.blocks) b.count *= 2;
    out.r *= 2;
  }
  out.x.assign(index.num_edges(), Rational(0));
  for (const auto& b : out.blocks) {
    for (EdgeId e : b.tree) out.x[e] += Rational(b.count) / Rational(out.r);
  }
  return out;
}

/// Minimum perfect matching cost by plain recursion over all matchings.
inline Rational matching_by_enumeration(const Instance& inst, std::vector<City> cities) {
  if (cities.empty()) return 0;
  const City a = cities.front();
  Rational best(-1);
  for (std::size_t i = 1; i < cities.size(); ++i) {
    std::vector<City> rest;
    for (std::size_t k = 1; k < cities.size(); ++k) {
      if (k != i) rest.push_back(cities[k]);
    }
    const Rational value = inst.cost(a, cities[i]) + matching_by_enumeration(inst, rest);
    if (best < 0 || value < best) best = value;
  }
  return best;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("stpath-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace stpath::fixtures
