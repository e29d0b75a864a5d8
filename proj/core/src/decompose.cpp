#include "stpath/decompose.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "stpath/error.hpp"
#include "stpath/simplex.hpp"

namespace stpath {

namespace {

using json = nlohmann::json;

constexpr int kRankSearchLimit = 20;

/// Maximum-weight spanning tree of the support graph (Kruskal, ties by id).
EdgeSet max_weight_tree(const std::vector<EdgeId>& support, const std::vector<Rational>& weight,
                        const EdgeIndex& index) {
  std::vector<int> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight[a] > weight[b]; });
  DisjointSets sets(index.num_cities());
  EdgeSet tree;
  for (int k : order) {
    const Edge& e = index.endpoints(support[k]);
    if (sets.unite(e.u, e.v)) tree.push_back(support[k]);
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

std::vector<Rational> rhs_copy(std::span<const Rational> x, const std::vector<EdgeId>& support) {
  std::vector<Rational> out;
  out.reserve(support.size());
  for (EdgeId e : support) out.push_back(x[e]);
  return out;
}

std::string rank_violation(std::span<const Rational> x, const EdgeIndex& index) {
  const int n = index.num_cities();
  if (n > kRankSearchLimit) return "x is outside the spanning tree polytope";
  for (VertexSet set = 1; set <= full_set(n); ++set) {
    if (set_size(set) < 2) continue;
    Rational inside_sum(0);
    for (const Edge& e : index.edges()) {
      if (inside(e, set)) inside_sum += x[index.id(e.u, e.v)];
    }
    if (inside_sum > set_size(set) - 1) {
      return "rank inequality violated: x(E[" + set_to_string(set) + "]) = " + to_string(inside_sum) + " > " +
             std::to_string(set_size(set) - 1);
    }
    if (set == full_set(n)) break;
  }
  return "x is outside the spanning tree polytope";
}

}  // namespace

Rational TreeDistribution::total() const {
  Rational sum(0);
  for (const auto& b : blocks) sum += b.weight;
  return sum;
}

std::vector<Rational> TreeDistribution::edge_vector(const EdgeIndex& index) const {
  std::vector<Rational> out(index.num_edges(), Rational(0));
  for (const auto& b : blocks) {
    for (EdgeId e : b.tree) out[e] += b.weight;
  }
  return out;
}

TreeDistribution decompose(std::span<const Rational> x, const EdgeIndex& index, City s, City t,
                           DecomposeStats* stats) {
  const int n = index.num_cities();
  if (static_cast<int>(x.size()) != index.num_edges()) throw InputError("decompose: edge vector has wrong length");
  Rational sum(0);
  for (const auto& v : x) {
    if (sgn(v) < 0) throw InputError("decompose: negative edge value");
    sum += v;
  }
  if (sum != n - 1) {
    throw InputError("decompose: x(E) = " + to_string(sum) + " but a spanning tree combination needs " +
                     std::to_string(n - 1));
  }
  TreeDistribution dist;
  if (n == 1) return dist;

  std::vector<EdgeId> support;
  std::vector<int> row_of(index.num_edges(), -1);
  for (EdgeId e = 0; e < index.num_edges(); ++e) {
    if (sgn(x[e]) > 0) {
      row_of[e] = static_cast<int>(support.size());
      support.push_back(e);
    }
  }
  {
    DisjointSets sets(n);
    int merged = 0;
    for (EdgeId e : support) merged += sets.unite(index.endpoints(e).u, index.endpoints(e).v) ? 1 : 0;
    if (merged != n - 1) throw InputError("decompose: support of x is disconnected; " + rank_violation(x, index));
  }

  // min Σ a_e  s.t.  Σ_T λ_T χ^T_e + a_e = x_e on the support.
  Simplex<Rational> master(rhs_copy(x, support), /*identity_artificial=*/false, Rational(1));
  std::vector<EdgeSet> columns;

  DecomposeStats local;
  // The first column is the max-weight tree under x itself.
  std::vector<Rational> weight(rhs_copy(x, support));
  while (true) {
    if (!columns.empty()) {
      if (master.solve() != SimplexStatus::optimal) throw NumericalError("decomposition master did not solve");
      weight = master.duals();
    }
    EdgeSet tree = max_weight_tree(support, weight, index);
    Rational price(0);
    for (EdgeId e : tree) price += weight[row_of[e]];
    ++local.pricing_rounds;
    if (!columns.empty() && sgn(price) <= 0) break;
    if (std::find(columns.begin(), columns.end(), tree) != columns.end()) break;
    SparseColumn<Rational> col;
    for (EdgeId e : tree) col.push_back({row_of[e], Rational(1)});
    master.add_column(col, Rational(0));
    columns.push_back(std::move(tree));
  }
  local.pivots = master.pivots();
  if (stats) *stats = local;

  if (sgn(master.objective()) != 0) throw InputError("decompose: " + rank_violation(x, index));

  const int rows = master.rows();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Rational lambda = master.value(rows + static_cast<int>(c));
    if (sgn(lambda) > 0) dist.blocks.push_back({columns[c], std::move(lambda)});
  }
  for (const auto& b : dist.blocks) {
    if (count_crossing(b.tree, index, singleton(s)) != 1 || count_crossing(b.tree, index, singleton(t)) != 1) {
      throw StructureViolation("decomposition tree has more than one edge at s or t");
    }
  }
  if (!verify_combination(dist, x, index)) throw NumericalError("decomposition does not reproduce x");
  return dist;
}

bool verify_combination(const TreeDistribution& dist, std::span<const Rational> x, const EdgeIndex& index,
                        const Rational& tol) {
  if (static_cast<int>(x.size()) != index.num_edges()) return false;
  for (const auto& b : dist.blocks) {
    if (sgn(b.weight) <= 0 || !is_spanning_tree(b.tree, index)) return false;
  }
  const auto sum = dist.edge_vector(index);
  for (EdgeId e = 0; e < index.num_edges(); ++e) {
    if (abs(sum[e] - x[e]) > tol) return false;
  }
  return true;
}

std::vector<std::int64_t> block_edge_counts(std::span<const Block> blocks, const EdgeIndex& index) {
  std::vector<std::int64_t> out(index.num_edges(), 0);
  for (const auto& b : blocks) {
    for (EdgeId e : b.tree) out[e] += b.count;
  }
  return out;
}

Rational snap_epsilon(const Rational& epsilon, int n) {
  if (sgn(epsilon) <= 0) throw InputError("epsilon must be positive");
  const Rational cube(static_cast<long>(n) * n * n);
  const mpz_class k = ceil_of(Rational(cube / epsilon));
  return Rational(cube / Rational(k));
}

RoundedEnsemble round_distribution(const TreeDistribution& dist, const Rational& epsilon, int n,
                                   const EdgeIndex& index, const RoundingOptions& options) {
  if (sgn(epsilon) < 0) throw InputError("epsilon must be nonnegative");
  if (epsilon > 1) throw InputError("epsilon must be at most 1");
  if (dist.total() != 1) throw InputError("distribution total is " + to_string(dist.total()) + ", expected 1");
  RoundedEnsemble out;
  std::vector<mpz_class> mult;
  mpz_class scale;
  if (sgn(epsilon) == 0) {
    // Exact mode: every weight is a multiple of 1/L.
    mpz_class lcm(1);
    for (const auto& b : dist.blocks) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), b.weight.get_den_mpz_t());
    scale = lcm;
    out.epsilon = 0;
  } else {
    out.epsilon = snap_epsilon(epsilon, n);
    scale = floor_of(Rational(Rational(static_cast<long>(n) * n * n) / out.epsilon));
  }
  // m_S = floor(scale·p_S); each tree is kept with weight m_S/scale and
  // appears `copies`·m_S times among the r trees.
  mpz_class kept(0);
  for (const auto& b : dist.blocks) {
    mult.push_back(floor_of(Rational(b.weight * scale)));
    kept += mult.back();
  }
  if (kept == 0) throw InputError("epsilon too large: every tree weight rounds down to zero");
  const int copies = (sgn(epsilon) == 0 && kept % 2 == 0) ? 1 : 2;
  const mpz_class r = copies * kept;
  if (sgn(epsilon) == 0 && r > options.max_r) {
    throw InputError("exact mode needs r = " + r.get_str() + " trees, above the cap " + std::to_string(options.max_r));
  }
  if (!r.fits_slong_p()) throw InputError("ensemble size r does not fit a machine word");
  out.r = r.get_si();
  out.kept = Rational(kept) / Rational(scale);
  for (std::size_t k = 0; k < dist.blocks.size(); ++k) {
    const auto& b = dist.blocks[k];
    if (mult[k] > 0) out.blocks.push_back({b.tree, mpz_class(copies * mult[k]).get_si()});
    Rational rest = b.weight - Rational(mult[k]) / Rational(scale);
    if (sgn(rest) > 0) out.leftover.blocks.push_back({b.tree, std::move(rest)});
  }
  out.x.assign(index.num_edges(), Rational(0));
  const auto counts = block_edge_counts(out.blocks, index);
  for (EdgeId e = 0; e < index.num_edges(); ++e) out.x[e] = Rational(counts[e]) / Rational(out.r);

  if (sgn(out.epsilon) > 0 && out.leftover.total() > out.epsilon / n) {
    throw StructureViolation("rounding left " + to_string(out.leftover.total()) + " > epsilon/n");
  }
  return out;
}

Rational max_subset_deviation(std::span<const Rational> x, std::span<const Rational> xstar) {
  Rational above(0);
  Rational below(0);
  for (std::size_t e = 0; e < x.size(); ++e) {
    const Rational d = x[e] - xstar[e];
    if (sgn(d) > 0) above += d;
    if (sgn(d) < 0) below -= d;
  }
  return std::max(above, below);
}

std::string distribution_to_json(const TreeDistribution& dist, const EdgeIndex& index) {
  json doc = json::array();
  for (const auto& b : dist.blocks) {
    json edges = json::array();
    for (EdgeId e : b.tree) edges.push_back(json::array({index.endpoints(e).u, index.endpoints(e).v}));
    doc.push_back({{"edges", std::move(edges)},
                   {"weight_num", b.weight.get_num().get_str()},
                   {"weight_den", b.weight.get_den().get_str()}});
  }
  return doc.dump();
}

TreeDistribution distribution_from_json(std::string_view text, const EdgeIndex& index) {
  TreeDistribution dist;
  try {
    const json doc = json::parse(text);
    for (const auto& entry : doc) {
      WeightedTree b;
      for (const auto& e : entry.at("edges")) {
        const City u = e.at(0).get<int>();
        const City v = e.at(1).get<int>();
        if (u == v || u < 0 || v < 0 || u >= index.num_cities() || v >= index.num_cities()) {
          throw InputError("distribution names an invalid edge");
        }
        b.tree.push_back(index.id(u, v));
      }
      std::sort(b.tree.begin(), b.tree.end());
      auto read = [](const json& node) {
        return node.is_string() ? node.get<std::string>() : std::to_string(node.get<std::int64_t>());
      };
      b.weight = parse_rational(read(entry.at("weight_num")) + "/" + read(entry.at("weight_den")));
      dist.blocks.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tree distribution: ") + e.what());
  }
  return dist;
}

}  // namespace stpath
