#include "stpath/analysis.hpp"

#include <algorithm>

#include "stpath/error.hpp"
#include "stpath/lp.hpp"

namespace stpath {

Rational benefit(int crossing, const Rational& cut_value, const Rational& gamma, const AnalysisParams& params) {
  if (crossing % 2 == 0) {
    const Rational scaled = params.benefit_factor() * (2 - cut_value - params.epsilon);
    return std::min(scaled, gamma);
  }
  if (crossing == 1) return 1 - gamma;
  return 0;
}

TreeSplit split_tree(const EdgeSet& tree, const EdgeIndex& index, City s, City t) {
  TreeSplit out;
  out.path = tree_path(tree, index, s, t);
  std::sort(out.path.begin(), out.path.end());
  std::set_difference(tree.begin(), tree.end(), out.path.begin(), out.path.end(), std::back_inserter(out.rest));
  return out;
}

EdgeId min_cost_edge(const Instance& inst, VertexSet side) {
  const EdgeIndex& index = inst.edges();
  EdgeId best = -1;
  for (EdgeId e = 0; e < index.num_edges(); ++e) {
    if (!crosses(index.endpoints(e), side)) continue;
    if (best < 0 || inst.edge_cost(e) < inst.edge_cost(best)) best = e;
  }
  if (best < 0) throw InputError("cut has no edges");
  return best;
}

CorrectionVectors correction_vectors(const Instance& inst, const EdgeSet& tree, const Rational& gamma,
                                     const NarrowCutChain& chain, const AnalysisParams& params,
                                     std::span<const Rational> xstar) {
  const EdgeIndex& index = inst.edges();
  const int m = index.num_edges();
  CorrectionVectors out;
  out.split = split_tree(tree, index, inst.s(), inst.t());
  const Rational one_minus = 1 - 2 * params.beta;
  out.z.assign(m, Rational(0));
  for (EdgeId e : out.split.path) out.z[e] += one_minus * gamma;
  for (int i = 0; i < chain.size(); ++i) {
    if (count_crossing(tree, index, chain.levels[i]) % 2 != 0) continue;
    const Rational amount = params.beta * (2 - chain.values[i] - params.epsilon) - one_minus * gamma;
    if (sgn(amount) > 0) out.z[min_cost_edge(inst, chain.levels[i])] += amount;
  }
  out.y.assign(m, Rational(0));
  const Rational scale = params.beta * (1 + params.epsilon);
  for (EdgeId e = 0; e < m; ++e) {
    if (sgn(xstar[e]) != 0) out.y[e] = scale * xstar[e];
    out.y[e] += out.z[e];
  }
  for (EdgeId e : out.split.rest) out.y[e] += one_minus;
  return out;
}

PolyhedronCheck check_tjoin_polyhedron(const Instance& inst, std::span<const Rational> y, VertexSet targets,
                                       const NarrowCutChain& chain, int exhaustive_cap) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  std::vector<std::pair<Edge, Rational>> support;
  for (EdgeId e = 0; e < index.num_edges(); ++e) {
    if (sgn(y[e]) != 0) support.push_back({index.endpoints(e), y[e]});
  }
  PolyhedronCheck out;
  auto test = [&](VertexSet side) {
    if (set_size(side & targets) % 2 == 0) return;
    Rational value(0);
    for (const auto& [e, w] : support) {
      if (crosses(e, side)) value += w;
    }
    if (!out.violated && value < 1) {
      out.ok = false;
      out.violated = side;
    }
    if (out.worst_value < 0 || value < out.worst_value) out.worst_value = value;
  };
  out.worst_value = -1;
  if (targets == 0) {
    out.exhaustive = true;
    out.worst_value = 0;
    return out;
  }
  if (n <= exhaustive_cap) {
    // U and V \ U give the same cut; fix the last city outside U.
    out.exhaustive = true;
    const VertexSet limit = VertexSet{1} << (n - 1);
    for (VertexSet side = 1; side < limit; ++side) test(side);
  } else {
    for (VertexSet side : chain.levels) test(side);
  }
  return out;
}

std::vector<CutAudit> check_benefit_inequality(std::span<const Block> blocks, const NarrowCutChain& chain,
                                               const AnalysisParams& params, const EdgeIndex& index) {
  std::int64_t r = 0;
  for (const auto& b : blocks) r += b.count;
  if (r != params.r || r <= 0) throw InputError("ensemble size does not match the analysis parameters");
  const std::int64_t half = r / 2;
  const Rational factor(3327, 1000);
  std::vector<CutAudit> audits;
  for (int i = 0; i < chain.size(); ++i) {
    CutAudit a;
    a.cut = i;
    a.size = set_size(chain.levels[i]);
    a.xstar_value = chain.values[i];
    a.xi = chain.values[i] + params.epsilon;
    const mpz_class theta = ceil_of(Rational(Rational(r) * (2 - chain.values[i] - params.epsilon)));
    a.theta = theta > 0 ? std::min<std::int64_t>(theta.get_si(), r) : 0;
    Rational benefit_sum(0);
    std::int64_t even = 0;
    std::int64_t edges_in_cut = 0;
    std::int64_t first = 1;
    for (const auto& b : blocks) {
      const int crossing = count_crossing(b.tree, index, chain.levels[i]);
      edges_in_cut += crossing * b.count;
      if (crossing % 2 == 0) even += b.count;
      // Copies up to r/2 get gamma = delta, the rest 1 - delta.
      const std::int64_t last = first + b.count - 1;
      const std::int64_t low = std::max<std::int64_t>(0, std::min(last, half) - first + 1);
      const std::int64_t high = b.count - low;
      if (low > 0) benefit_sum += Rational(low) * benefit(crossing, chain.values[i], params.gamma(first), params);
      if (high > 0) benefit_sum += Rational(high) * benefit(crossing, chain.values[i], params.gamma(last), params);
      first = last + 1;
    }
    a.benefit = benefit_sum / Rational(r);
    a.pi = Rational(even) / Rational(r);
    a.x_value = Rational(edges_in_cut) / Rational(r);
    a.required = factor * (2 - chain.values[i] - params.epsilon) * a.pi;
    a.pass = a.benefit >= a.required;
    a.pi_bound = a.pi <= a.x_value - 1 && a.x_value - 1 <= a.xi - 1;
    audits.push_back(std::move(a));
  }
  return audits;
}

BoundReport bound_report(const BoundInputs& in, const AnalysisParams& params) {
  BoundReport out;
  out.bound = (2 - params.beta + params.epsilon) * in.lp_value;
  out.averaged = in.kept * (in.mean_tree_cost + in.mean_y_cost) + in.leftover_tree_cost + in.leftover * in.lp_value;
  out.ratio_lp = sgn(in.lp_value) > 0 ? Rational(in.best_cost / in.lp_value) : Rational(1);
  out.best_within_bound = in.best_cost <= out.bound;
  out.best_within_average = in.best_cost <= out.averaged;
  const Rational one_minus = 1 - 2 * params.beta;
  out.mean_y_bound = in.mean_y_cost <= (params.beta + params.epsilon * params.beta) * in.lp_value + one_minus * in.x_cost;
  out.z_cost_bound = in.mean_z_cost <= one_minus * in.mean_path_cost;
  out.kept_x_bound = in.x_cost * in.kept <= in.lp_value;
  return out;
}

}  // namespace stpath
