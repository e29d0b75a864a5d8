#include "stpath/reassembly.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include <json.hpp>

#include "stpath/error.hpp"

namespace stpath {

namespace {

using json = nlohmann::json;

bool has_edge(const EdgeSet& tree, EdgeId e) { return std::binary_search(tree.begin(), tree.end(), e); }

std::string describe(std::int64_t j, int i) {
  return "tree " + std::to_string(j) + ", cut " + std::to_string(i);
}

/// Largest h < below with j <= theta_h, or -1.
int active_below(const ThetaProfile& profile, std::int64_t j, int below) {
  for (int h = below - 1; h >= 0; --h) {
    if (j <= profile.theta[h]) return h;
  }
  return -1;
}

void check_active_cuts(const BlockEnsemble& ens, std::int64_t j, int below, const ReassemblyContext& ctx,
                       const char* when) {
  const EdgeSet& tree = ens.tree_at(j);
  for (int h = 0; h < below; ++h) {
    if (j > ctx.profile.theta[h]) continue;
    const int count = count_crossing(tree, ctx.index, ctx.chain.levels[h]);
    if (count != 1) {
      throw StructureViolation(std::string(when) + ": " + describe(j, h) + " has " + std::to_string(count) +
                               " edges in an active earlier cut");
    }
  }
}

int cap_for(const ReassemblyContext& ctx) {
  if (ctx.iteration_cap > 0) return ctx.iteration_cap;
  const int n = ctx.index.num_cities();
  return std::max(8, n * n * n);
}

}  // namespace

ThetaProfile theta_profile(const NarrowCutChain& chain, std::int64_t r, const Rational& epsilon) {
  if (r <= 0 || r % 2 != 0) throw InputError("r must be a positive even integer");
  if (sgn(epsilon) < 0) throw InputError("epsilon must be nonnegative");
  ThetaProfile profile;
  profile.r = r;
  profile.epsilon = epsilon;
  for (const auto& value : chain.values) {
    const mpz_class theta = ceil_of(Rational(Rational(r) * (Rational(2) - value - epsilon)));
    profile.theta.push_back(theta > 0 ? std::min<std::int64_t>(theta.get_si(), r) : 0);
  }
  return profile;
}

std::string to_string(SwapLemma lemma) {
  switch (lemma) {
    case SwapLemma::connect_case1: return "connect-case1";
    case SwapLemma::connect_case2a: return "connect-case2a";
    case SwapLemma::connect_case2b: return "connect-case2b";
    case SwapLemma::connect_restore: return "connect-restore";
    case SwapLemma::single_edge: return "single-edge";
  }
  return "unknown";
}

SwapLemma parse_swap_lemma(std::string_view name) {
  for (auto lemma : {SwapLemma::connect_case1, SwapLemma::connect_case2a, SwapLemma::connect_case2b,
                     SwapLemma::connect_restore, SwapLemma::single_edge}) {
    if (to_string(lemma) == name) return lemma;
  }
  throw InputError("unknown swap kind: " + std::string(name));
}

std::string ExchangeTrace::to_jsonl() const {
  std::string out;
  for (const auto& s : swaps) {
    json line{{"j", s.j_start}, {"k", s.k_start}, {"count", s.count}, {"cut", s.cut},
              {"e", s.e},       {"f", s.f},       {"lemma", to_string(s.lemma)}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

ExchangeTrace ExchangeTrace::from_jsonl(std::string_view text) {
  ExchangeTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json doc = json::parse(line);
      trace.swaps.push_back({doc.at("j").get<std::int64_t>(), doc.at("k").get<std::int64_t>(),
                             doc.at("count").get<std::int64_t>(), doc.at("cut").get<int>(), doc.at("e").get<int>(),
                             doc.at("f").get<int>(), parse_swap_lemma(doc.at("lemma").get<std::string>())});
    } catch (const json::exception& e) {
      throw InputError("trace line " + std::to_string(number) + ": " + e.what());
    }
  }
  return trace;
}

BlockEnsemble::BlockEnsemble(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.count <= 0) throw InputError("ensemble block with nonpositive count");
  }
}

std::int64_t BlockEnsemble::r() const {
  std::int64_t total = 0;
  for (const auto& b : blocks_) total += b.count;
  return total;
}

int BlockEnsemble::block_of(std::int64_t j) const {
  std::int64_t end = 0;
  for (int g = 0; g < size(); ++g) {
    end += blocks_[g].count;
    if (j <= end && j >= 1) return g;
  }
  throw InputError("virtual index " + std::to_string(j) + " outside the ensemble");
}

std::int64_t BlockEnsemble::start(int block) const {
  std::int64_t s = 1;
  for (int g = 0; g < block; ++g) s += blocks_[g].count;
  return s;
}

void BlockEnsemble::split_before(std::int64_t j) {
  if (j == r() + 1) return;
  const int g = block_of(j);
  const std::int64_t s = start(g);
  if (s == j) return;
  Block tail{blocks_[g].tree, blocks_[g].count - (j - s)};
  blocks_[g].count = j - s;
  blocks_.insert(blocks_.begin() + g + 1, std::move(tail));
}

std::vector<Block> canonical_blocks(std::span<const Block> blocks) {
  std::vector<Block> out;
  for (const auto& b : blocks) {
    if (!out.empty() && out.back().tree == b.tree) {
      out.back().count += b.count;
    } else {
      out.push_back(b);
    }
  }
  return out;
}

std::int64_t find_connected_partner(const BlockEnsemble& ens, std::int64_t j, VertexSet m, const EdgeIndex& index) {
  const int first = ens.block_of(j);
  for (int g = first; g < ens.size(); ++g) {
    if (induces_connected(ens.blocks()[g].tree, index, m)) return g == first ? j : ens.start(g);
  }
  throw StructureViolation("no tree at index >= " + std::to_string(j) + " induces a connected subgraph on " +
                           set_to_string(m) + "; the ensemble is too far from the LP point");
}

std::int64_t find_disjoint_partner(const BlockEnsemble& ens, std::int64_t j, VertexSet u_h, VertexSet u_i,
                                   const EdgeIndex& index) {
  if (j >= ens.r()) throw StructureViolation("no tree after index " + std::to_string(j));
  const int first = ens.block_of(j + 1);
  for (int g = first; g < ens.size(); ++g) {
    if (count_crossing_both(ens.blocks()[g].tree, index, u_h, u_i) == 0) {
      return g == first ? j + 1 : ens.start(g);
    }
  }
  throw StructureViolation("every tree after index " + std::to_string(j) + " uses an edge in both cuts " +
                           set_to_string(u_h) + " and " + set_to_string(u_i));
}

std::int64_t find_single_edge_partner(const BlockEnsemble& ens, std::int64_t theta, VertexSet u_i,
                                      const EdgeIndex& index) {
  if (theta < ens.r()) {
    const int first = ens.block_of(theta + 1);
    for (int g = first; g < ens.size(); ++g) {
      if (count_crossing(ens.blocks()[g].tree, index, u_i) == 1) return g == first ? theta + 1 : ens.start(g);
    }
  }
  throw StructureViolation("no tree after index " + std::to_string(theta) + " has a single edge in cut " +
                           set_to_string(u_i));
}

std::pair<EdgeId, EdgeId> exchange_pair(const EdgeSet& s_j, const EdgeSet& s_k, VertexSet u_i, VertexSet m,
                                      const EdgeIndex& index) {
  if ((m & ~u_i) != 0) throw InputError("exchange_pair: M is not inside U_i");
  if (induces_connected(s_j, index, m)) throw InputError("exchange_pair: S_j is already connected on M");
  if (!induces_connected(s_k, index, m)) throw InputError("exchange_pair: S_k is not connected on M");
  if (count_crossing(s_j, index, u_i & ~m) > 1) throw InputError("exchange_pair: S_j has two edges leaving U_i \\ M");
  const int n = index.num_cities();

  // Components A_p of (V,S_j)[M] and the S_k edges F between them.
  const auto comps = induced_components(s_j, index, m);
  std::vector<int> comp_of(n, -1);
  for (int p = 0; p < static_cast<int>(comps.size()); ++p) {
    for (City v : members(comps[p])) comp_of[v] = p;
  }
  auto in_f = [&](EdgeId e) {
    const Edge& ed = index.endpoints(e);
    return comp_of[ed.u] >= 0 && comp_of[ed.v] >= 0 && comp_of[ed.u] != comp_of[ed.v];
  };
  // B_p: reachable from A_p in (V, S_k \ F). A_p itself need not be
  // connected there, so label whole components.
  DisjointSets parts(n);
  for (EdgeId e : s_k) {
    if (!in_f(e)) parts.unite(index.endpoints(e).u, index.endpoints(e).v);
  }
  std::vector<int> label_of_root(n, -1);
  for (City v = 0; v < n; ++v) {
    if (comp_of[v] < 0) continue;
    int& slot = label_of_root[parts.find(v)];
    if (slot >= 0 && slot != comp_of[v]) throw StructureViolation("exchange_pair: the sets B_p overlap");
    slot = comp_of[v];
  }
  std::vector<int> label(n, -1);
  for (City v = 0; v < n; ++v) {
    label[v] = label_of_root[parts.find(v)];
    if (label[v] < 0) throw StructureViolation("exchange_pair: the sets B_p do not cover V");
  }

  // Y: edges of S_j on paths between cities of M, rooted at its lowest city.
  std::vector<std::vector<std::pair<City, EdgeId>>> adj(n);
  VertexSet y_cities = 0;
  for (EdgeId e : s_j) {
    const Edge& ed = index.endpoints(e);
    const VertexSet side = reachable(s_j, index, ed.u, [e](EdgeId other) { return other != e; });
    if ((side & m) == 0 || (m & ~side) == 0) continue;
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
    y_cities |= singleton(ed.u) | singleton(ed.v);
  }
  const City z = std::countr_zero(y_cities);
  std::vector<int> depth(n, -1);
  depth[z] = 0;
  std::vector<City> queue{z};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (auto [w, e] : adj[queue[head]]) {
      if (depth[w] < 0) {
        depth[w] = depth[queue[head]] + 1;
        queue.push_back(w);
      }
    }
  }

  EdgeId e_best = -1;
  int best_depth = -1;
  City deep = -1;
  for (City v = 0; v < n; ++v) {
    for (auto [w, e] : adj[v]) {
      if (depth[w] != depth[v] + 1 || label[v] == label[w]) continue;
      if (depth[w] > best_depth || (depth[w] == best_depth && e < e_best)) {
        best_depth = depth[w];
        e_best = e;
        deep = w;
      }
    }
  }
  if (e_best < 0) throw StructureViolation("exchange_pair: no edge of Y leaves a set B_p");
  const Edge& ed = index.endpoints(e_best);
  const City other = ed.u == deep ? ed.v : ed.u;
  const int p = label[deep];

  EdgeId f = -1;
  for (EdgeId cand : tree_path(s_k, index, deep, other)) {
    const Edge& ce = index.endpoints(cand);
    if ((label[ce.u] == p) != (label[ce.v] == p)) {
      f = cand;
      break;
    }
  }
  if (f < 0 || !in_f(f)) throw StructureViolation("exchange_pair: no exchange edge on the S_k path");
  if (inside(ed, u_i)) throw StructureViolation("exchange_pair: chosen e lies inside U_i");
  if (!is_spanning_tree(with_swap(s_j, e_best, f), index) || !is_spanning_tree(with_swap(s_k, f, e_best), index)) {
    throw StructureViolation("exchange_pair: exchange does not yield two spanning trees");
  }
  return {e_best, f};
}

void group_swap(BlockEnsemble& ens, std::int64_t j, std::int64_t k, EdgeId e, EdgeId f, int cut, SwapLemma lemma,
                const ReassemblyContext& ctx) {
  if (k <= j) throw StructureViolation("exchange partner must come after the tree");
  ens.split_before(j);
  ens.split_before(k);
  int gj = ens.block_of(j);
  int gk = ens.block_of(k);
  const std::int64_t count = std::min(ens.blocks()[gj].count, ens.blocks()[gk].count);
  ens.split_before(k + count);
  ens.split_before(j + count);
  gj = ens.block_of(j);
  gk = ens.block_of(k);
  if (ens.blocks()[gj].count != count || ens.blocks()[gk].count != count) {
    throw StructureViolation("exchange ranges overlap");
  }
  EdgeSet& s_j = ens.blocks()[gj].tree;
  EdgeSet& s_k = ens.blocks()[gk].tree;
  if (!has_edge(s_j, e) || has_edge(s_j, f) || !has_edge(s_k, f) || has_edge(s_k, e)) {
    throw StructureViolation("exchange edges do not match the trees at " + describe(j, cut));
  }
  EdgeSet new_j = with_swap(s_j, e, f);
  EdgeSet new_k = with_swap(s_k, f, e);
  if (!is_spanning_tree(new_j, ctx.index) || !is_spanning_tree(new_k, ctx.index)) {
    throw StructureViolation("exchange breaks a spanning tree at " + describe(j, cut));
  }
  s_j = std::move(new_j);
  s_k = std::move(new_k);
  if (ctx.trace) ctx.trace->swaps.push_back({j, k, count, cut, e, f, lemma});
}

int enforce_connected(BlockEnsemble& ens, std::int64_t j, int i, const ReassemblyContext& ctx) {
  const auto& levels = ctx.chain.levels;
  const auto& theta = ctx.profile.theta;
  const EdgeIndex& index = ctx.index;
  if (i < 1 || i >= ctx.chain.ell()) throw InputError("cut index out of range");
  if (j > theta[i]) throw InputError("enforce_connected: " + describe(j, i) + " is beyond theta");
  check_active_cuts(ens, j, i, ctx, "enforce_connected precondition");
  const VertexSet u_i = levels[i];
  const int cap = cap_for(ctx);
  int swaps = 0;
  while (true) {
    const EdgeSet tree = ens.tree_at(j);
    if (induces_connected(tree, index, u_i)) return swaps;
    if (swaps >= cap) throw StructureViolation("enforce_connected exceeded its iteration cap at " + describe(j, i));
    const int h = active_below(ctx.profile, j, i);
    if (h < 0) throw StructureViolation("no active cut below " + describe(j, i));
    const VertexSet m1 = u_i & ~levels[h];
    if (count_inside(tree, index, m1) < set_size(m1) - 1) {
      const std::int64_t k = find_connected_partner(ens, j, m1, index);
      const auto [e, f] = exchange_pair(tree, ens.tree_at(k), u_i, m1, index);
      const int before = count_inside(tree, index, u_i);
      group_swap(ens, j, k, e, f, i, SwapLemma::connect_case1, ctx);
      if (count_inside(ens.tree_at(j), index, u_i) != before + 1) {
        throw StructureViolation("connecting exchange did not add an edge inside U_i at " + describe(j, i));
      }
      check_active_cuts(ens, j, h + 1, ctx, "after connecting exchange");
    } else {
      SwapLemma tag = SwapLemma::connect_case2b;
      VertexSet m = u_i;
      if (h > 0) {
        const int g = active_below(ctx.profile, j, h);
        if (g < 0) throw StructureViolation("no active cut below " + describe(j, h));
        m = u_i & ~levels[g];
        tag = SwapLemma::connect_case2a;
      }
      const std::int64_t k = find_connected_partner(ens, j, m, index);
      const auto [e, f] = exchange_pair(tree, ens.tree_at(k), u_i, m, index);
      group_swap(ens, j, k, e, f, i, tag, ctx);
      const EdgeSet joined = ens.tree_at(j);
      if (!induces_connected(joined, index, u_i)) {
        throw StructureViolation("U_i still disconnected after exchange at " + describe(j, i));
      }
      const VertexSet u_h = levels[h];
      if (count_crossing(joined, index, u_h) == 2) {
        // Move the unique edge {v,w} in both cuts (v in U_h, w outside U_i)
        // to a tree avoiding C_h ∩ C_i.
        EdgeId e_hat = -1;
        for (EdgeId cand : joined) {
          const Edge& ce = index.endpoints(cand);
          if (crosses(ce, u_h) && crosses(ce, u_i)) {
            if (e_hat >= 0) throw StructureViolation("two edges in both cuts at " + describe(j, i));
            e_hat = cand;
          }
        }
        if (e_hat < 0) throw StructureViolation("no edge in both cuts at " + describe(j, i));
        const Edge& he = index.endpoints(e_hat);
        const City v = contains(u_h, he.u) ? he.u : he.v;
        const City w = v == he.u ? he.v : he.u;
        const std::int64_t k2 = find_disjoint_partner(ens, j, u_h, u_i, index);
        const VertexSet w_set =
            reachable(joined, index, w, [&](EdgeId cand) { return !crosses(index.endpoints(cand), u_i); });
        EdgeId f_hat = -1;
        for (EdgeId cand : tree_path(ens.tree_at(k2), index, v, w)) {
          if (crosses(index.endpoints(cand), w_set)) {
            f_hat = cand;
            break;
          }
        }
        if (f_hat < 0 || crosses(index.endpoints(f_hat), u_h)) {
          throw StructureViolation("no restoring exchange edge at " + describe(j, i));
        }
        group_swap(ens, j, k2, e_hat, f_hat, i, SwapLemma::connect_restore, ctx);
        ++swaps;
      }
      if (!induces_connected(ens.tree_at(j), index, u_i)) {
        throw StructureViolation("U_i disconnected after restoring exchange at " + describe(j, i));
      }
      check_active_cuts(ens, j, i, ctx, "after case-2 exchange");
    }
    ++swaps;
  }
}

int enforce_single_edge(BlockEnsemble& ens, std::int64_t j, int i, const ReassemblyContext& ctx) {
  const EdgeIndex& index = ctx.index;
  if (i < 1 || i >= ctx.chain.ell()) throw InputError("cut index out of range");
  const std::int64_t theta = ctx.profile.theta[i];
  if (j > theta) throw InputError("enforce_single_edge: " + describe(j, i) + " is beyond theta");
  const VertexSet u_i = ctx.chain.levels[i];
  if (!induces_connected(ens.tree_at(j), index, u_i)) {
    throw InputError("enforce_single_edge: U_i is not connected in " + describe(j, i));
  }
  check_active_cuts(ens, j, i, ctx, "enforce_single_edge precondition");
  const int cap = cap_for(ctx);
  int swaps = 0;
  auto outside = [&](EdgeId cand) { return !crosses(index.endpoints(cand), u_i); };
  while (true) {
    const EdgeSet tree = ens.tree_at(j);
    const int count = count_crossing(tree, index, u_i);
    if (count == 1) return swaps;
    if (count == 0) throw StructureViolation("spanning tree misses cut at " + describe(j, i));
    if (swaps >= cap) throw StructureViolation("enforce_single_edge exceeded its iteration cap at " + describe(j, i));

    const std::int64_t k = find_single_edge_partner(ens, theta, u_i, index);
    const EdgeSet partner = ens.tree_at(k);
    City y = -1;
    for (EdgeId cand : partner) {
      const Edge& ce = index.endpoints(cand);
      if (crosses(ce, u_i)) y = contains(u_i, ce.u) ? ce.v : ce.u;
    }
    const VertexSet a = reachable(tree, index, y, outside);
    EdgeId e = -1;
    for (EdgeId cand : tree) {
      const Edge& ce = index.endpoints(cand);
      if (crosses(ce, u_i) && !crosses(ce, a)) {
        e = cand;
        break;
      }
    }
    if (e < 0) throw StructureViolation("no removable cut edge at " + describe(j, i));
    const Edge& ee = index.endpoints(e);
    const City w = contains(u_i, ee.u) ? ee.v : ee.u;
    const VertexSet b = reachable(tree, index, w, outside);
    EdgeId f = -1;
    for (EdgeId cand : tree_path(partner, index, w, y)) {
      if (crosses(index.endpoints(cand), b)) {
        f = cand;
        break;
      }
    }
    if (f < 0) throw StructureViolation("no exchange edge on the partner path at " + describe(j, i));
    group_swap(ens, j, k, e, f, i, SwapLemma::single_edge, ctx);
    if (count_crossing(ens.tree_at(j), index, u_i) != count - 1 ||
        count_crossing(ens.tree_at(k), index, u_i) != 2) {
      throw StructureViolation("single-edge exchange did not move one cut edge at " + describe(j, i));
    }
    ++swaps;
  }
}

std::vector<Block> split_at_thresholds(std::span<const Block> blocks, const ThetaProfile& profile) {
  BlockEnsemble ens(std::vector<Block>(blocks.begin(), blocks.end()));
  const std::int64_t r = ens.r();
  if (r != profile.r) throw InputError("ensemble size does not match the theta profile");
  auto cut_after = [&](std::int64_t pos) {
    if (pos >= 1 && pos < r) ens.split_before(pos + 1);
  };
  for (std::int64_t theta : profile.theta) cut_after(theta);
  cut_after(r / 2);
  return std::move(ens.blocks());
}

ReassemblyResult reassemble(std::span<const Block> blocks, const NarrowCutChain& chain, const ThetaProfile& profile,
                            const EdgeIndex& index, int iteration_cap) {
  if (static_cast<int>(profile.theta.size()) != chain.size()) {
    throw InputError("theta profile does not match the narrow cut chain");
  }
  ReassemblyResult result;
  BlockEnsemble ens(split_at_thresholds(blocks, profile));
  const int ell = chain.ell();
  for (const auto& b : ens.blocks()) {
    if (!is_spanning_tree(b.tree, index)) throw InputError("ensemble contains a tree that is not spanning");
    if (count_crossing(b.tree, index, chain.levels.front()) != 1 ||
        count_crossing(b.tree, index, chain.levels.back()) != 1) {
      throw StructureViolation("ensemble tree has more than one edge at s or t");
    }
  }
  ReassemblyContext ctx{index, chain, profile, &result.trace, iteration_cap};
  std::int64_t max_theta = 0;
  for (int i = 1; i < ell; ++i) max_theta = std::max(max_theta, profile.theta[i]);
  result.peak_blocks = ens.blocks().size();

  for (int g = 0; g < ens.size(); ++g) {
    const std::int64_t j = ens.start(g);
    if (j > max_theta) break;
    for (int i = 1; i < ell; ++i) {
      if (j > profile.theta[i]) continue;
      enforce_connected(ens, j, i, ctx);
      enforce_single_edge(ens, j, i, ctx);
      result.peak_blocks = std::max(result.peak_blocks, ens.blocks().size());
    }
    check_active_cuts(ens, j, ell + 1, ctx, "after processing");
  }
  result.blocks = std::move(ens.blocks());
  return result;
}

std::vector<Block> replay_trace(std::span<const Block> blocks, const ExchangeTrace& trace, const EdgeIndex& index) {
  BlockEnsemble ens(std::vector<Block>(blocks.begin(), blocks.end()));
  const std::int64_t r = ens.r();
  int number = 0;
  for (const auto& s : trace.swaps) {
    ++number;
    const std::string where = "trace record " + std::to_string(number);
    if (s.count <= 0 || s.j_start < 1 || s.k_start < s.j_start + s.count || s.k_start + s.count - 1 > r) {
      throw StructureViolation(where + ": index ranges are invalid");
    }
    auto apply = [&](std::int64_t from, EdgeId remove, EdgeId add) {
      ens.split_before(from);
      ens.split_before(from + s.count);
      for (int g = ens.block_of(from); g < ens.size() && ens.start(g) < from + s.count; ++g) {
        EdgeSet& tree = ens.blocks()[g].tree;
        if (!has_edge(tree, remove) || has_edge(tree, add)) throw StructureViolation(where + ": edges do not match");
        tree = with_swap(tree, remove, add);
        if (!is_spanning_tree(tree, index)) throw StructureViolation(where + ": result is not a spanning tree");
      }
    };
    apply(s.j_start, s.e, s.f);
    apply(s.k_start, s.f, s.e);
  }
  return std::move(ens.blocks());
}

StructureReport verify_structure(std::span<const Block> before, std::span<const Block> after,
                                 const NarrowCutChain& chain, const ThetaProfile& profile, const EdgeIndex& index) {
  StructureReport report;
  report.all_trees_valid = true;
  std::int64_t r = 0;
  for (const auto& b : after) {
    r += b.count;
    if (b.count <= 0 || !is_spanning_tree(b.tree, index)) {
      report.all_trees_valid = false;
      if (report.failure.empty()) report.failure = "block at virtual index " + std::to_string(r - b.count + 1) +
                                                   " is not a spanning tree";
    }
  }
  if (r != profile.r) {
    report.all_trees_valid = false;
    if (report.failure.empty()) report.failure = "ensemble has " + std::to_string(r) + " trees, expected " +
                                                 std::to_string(profile.r);
  }

  std::vector<std::int64_t> lhs(index.num_edges(), 0);
  std::vector<std::int64_t> rhs(index.num_edges(), 0);
  for (const auto& b : before) {
    for (EdgeId e : b.tree) lhs[e] += b.count;
  }
  for (const auto& b : after) {
    for (EdgeId e : b.tree) rhs[e] += b.count;
  }
  report.combination_preserved = lhs == rhs;
  if (!report.combination_preserved && report.failure.empty()) {
    for (EdgeId e = 0; e < index.num_edges(); ++e) {
      if (lhs[e] != rhs[e]) {
        const Edge& ed = index.endpoints(e);
        report.failure = "edge {" + std::to_string(ed.u) + "," + std::to_string(ed.v) + "} appears " +
                         std::to_string(rhs[e]) + " times, expected " + std::to_string(lhs[e]);
        break;
      }
    }
  }

  report.prefix_property = true;
  for (int i = 0; i < chain.size(); ++i) {
    const VertexSet side = chain.levels[i];
    std::int64_t first = 1;
    for (const auto& b : after) {
      if (first > profile.theta[i]) break;
      int crossing = 0;
      for (EdgeId e : b.tree) {
        const Edge& ed = index.endpoints(e);
        if (((side >> ed.u) & 1U) != ((side >> ed.v) & 1U)) ++crossing;
      }
      if (crossing != 1) {
        report.prefix_property = false;
        if (report.failure.empty()) {
          report.failure = "tree " + std::to_string(first) + " has " + std::to_string(crossing) +
                           " edges in narrow cut " + std::to_string(i) + " (theta " +
                           std::to_string(profile.theta[i]) + ")";
        }
        break;
      }
      first += b.count;
    }
  }
  return report;
}

bool is_global_gao_tree(const EdgeSet& tree, const NarrowCutChain& chain, const EdgeIndex& index) {
  return std::all_of(chain.levels.begin(), chain.levels.end(),
                     [&](VertexSet side) { return count_crossing(tree, index, side) == 1; });
}

}  // namespace stpath
