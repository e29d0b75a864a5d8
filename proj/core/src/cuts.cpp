#include "stpath/cuts.hpp"

#include <algorithm>
#include <map>

#include "stpath/error.hpp"
#include "stpath/lp.hpp"
#include "stpath/maxflow.hpp"

namespace stpath {

namespace {

constexpr int kExhaustiveLimit = 20;

std::map<VertexSet, Rational> exhaustive_narrow(std::span<const Rational> x, const Instance& inst) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  std::vector<double> xd;
  xd.reserve(x.size());
  for (const auto& v : x) xd.push_back(v.get_d());

  std::vector<City> free;
  for (City v = 0; v < n; ++v) {
    if (v != inst.s() && v != inst.t()) free.push_back(v);
  }
  std::map<VertexSet, Rational> found;
  const std::uint64_t count = std::uint64_t{1} << free.size();
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    VertexSet set = singleton(inst.s());
    for (std::size_t k = 0; k < free.size(); ++k) {
      if ((bits >> k) & 1U) set |= singleton(free[k]);
    }
    // Double pre-filter; the exact value decides.
    double approx = 0.0;
    for (const Edge& e : index.edges()) {
      if (crosses(e, set)) approx += xd[index.id(e.u, e.v)];
    }
    if (approx > 2.0 + 1e-6) continue;
    Rational exact = cut_value<Rational>(x, index, set);
    if (exact < 2) found.emplace(set, std::move(exact));
  }
  return found;
}

std::map<VertexSet, Rational> flow_narrow(std::span<const Rational> x, const Instance& inst) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  Rational big(1);
  for (const auto& v : x) big += v;
  std::map<VertexSet, Rational> found;
  // Two cities on adjacent levels are separated by exactly one narrow cut,
  // so the forced minimum cut for that pair is that level.
  for (City u = 0; u < n; ++u) {
    if (u == inst.t()) continue;
    for (City w = 0; w < n; ++w) {
      if (w == inst.s() || w == u) continue;
      MaxFlow<Rational> flow(n);
      for (const Edge& e : index.edges()) {
        const Rational& v = x[index.id(e.u, e.v)];
        if (sgn(v) > 0) flow.add_undirected(e.u, e.v, v);
      }
      if (u != inst.s()) flow.add_undirected(inst.s(), u, big);
      if (w != inst.t()) flow.add_undirected(w, inst.t(), big);
      Rational value = flow.solve(inst.s(), inst.t());
      if (value < 2) {
        const VertexSet side = flow.source_side();
        found.emplace(side, cut_value<Rational>(x, index, side));
      }
    }
  }
  return found;
}

}  // namespace

NarrowCutChain narrow_cuts(std::span<const Rational> x, const Instance& inst, CutMode mode) {
  const auto report = check_feasible(x, inst);
  if (!report.feasible) {
    throw InputError("narrow_cuts: x violates the path LP by " + to_string(report.worst));
  }
  if (mode == CutMode::automatic) mode = inst.size() <= kExhaustiveLimit ? CutMode::exhaustive : CutMode::flow;
  const auto found = mode == CutMode::exhaustive ? exhaustive_narrow(x, inst) : flow_narrow(x, inst);

  std::vector<std::pair<VertexSet, Rational>> sorted(found.begin(), found.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    const int sa = set_size(a.first);
    const int sb = set_size(b.first);
    return sa != sb ? sa < sb : a.first < b.first;
  });
  NarrowCutChain chain;
  for (auto& [set, value] : sorted) {
    chain.levels.push_back(set);
    chain.values.push_back(std::move(value));
  }
  validate_chain(chain, x, inst);
  return chain;
}

void validate_chain(const NarrowCutChain& chain, std::span<const Rational> x, const Instance& inst) {
  if (chain.levels.empty() || chain.levels.size() != chain.values.size()) {
    throw StructureViolation("narrow cut chain is empty or malformed");
  }
  const VertexSet all = full_set(inst.size());
  if (chain.levels.front() != singleton(inst.s())) throw StructureViolation("narrow cut chain must start at {s}");
  if (chain.levels.back() != (all & ~singleton(inst.t()))) {
    throw StructureViolation("narrow cut chain must end at V \\ {t}");
  }
  for (int i = 0; i < chain.size(); ++i) {
    if (chain.values[i] >= 2) throw StructureViolation("chain level " + std::to_string(i) + " is not narrow");
    if (cut_value<Rational>(x, inst.edges(), chain.levels[i]) != chain.values[i]) {
      throw StructureViolation("chain level " + std::to_string(i) + " has a stale value");
    }
    if (i > 0) {
      const VertexSet prev = chain.levels[i - 1];
      const VertexSet cur = chain.levels[i];
      if ((prev & ~cur) != 0 || prev == cur) {
        throw StructureViolation("narrow cuts do not form a strictly nested chain at level " + std::to_string(i));
      }
    }
  }
}

}  // namespace stpath
