#include "stpath/lp.hpp"

#include <algorithm>

#include <json.hpp>

#include "stpath/error.hpp"
#include "stpath/simplex.hpp"

namespace stpath {

namespace {

using json = nlohmann::json;

template <class Scalar>
struct RoundResult {
  std::vector<Scalar> x;
  std::vector<int> basis;
  long pivots = 0;
};

/// Builds and solves the LP over the current cut pool. Structural columns
/// are the edges followed by one surplus column per cut.
template <class Scalar>
RoundResult<Scalar> solve_round(const Instance& inst, const std::vector<CutConstraint>& pool,
                                std::span<const int> hint) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  const int m = index.num_edges();
  std::vector<Scalar> rhs;
  rhs.reserve(n + pool.size());
  for (City v = 0; v < n; ++v) rhs.push_back(Scalar((v == inst.s() || v == inst.t()) ? 1 : 2));
  for (const auto& cut : pool) rhs.push_back(Scalar(cut.bound));

  Simplex<Scalar> lp(std::move(rhs), /*identity_artificial=*/true);
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = index.endpoints(e);
    SparseColumn<Scalar> col{{ed.u, Scalar(1)}, {ed.v, Scalar(1)}};
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (crosses(ed, pool[c].set)) col.push_back({n + static_cast<int>(c), Scalar(1)});
    }
    if constexpr (std::is_same_v<Scalar, double>) {
      lp.add_column(col, inst.edge_cost_d(e));
    } else {
      lp.add_column(col, inst.edge_cost(e));
    }
  }
  for (std::size_t c = 0; c < pool.size(); ++c) {
    lp.add_column({{n + static_cast<int>(c), Scalar(-1)}}, Scalar(0));
  }
  if (!hint.empty()) lp.crash(hint);
  const SimplexStatus status = lp.solve();
  if (status == SimplexStatus::infeasible || status == SimplexStatus::unbounded) {
    throw NumericalError("path LP reported infeasible or unbounded; the complete graph makes this impossible");
  }
  if (status != SimplexStatus::optimal) throw NumericalError("path LP hit the pivot limit");

  RoundResult<Scalar> out;
  out.x.reserve(m);
  const int offset = lp.rows();
  for (EdgeId e = 0; e < m; ++e) out.x.push_back(lp.value(offset + e));
  for (int b : lp.basis()) {
    if (!lp.is_identity(b)) out.basis.push_back(b);
  }
  out.pivots = lp.pivots();
  return out;
}

/// Appends violated cuts that are not yet in the pool; returns how many.
template <class Scalar>
int extend_pool(std::vector<CutConstraint>& pool, std::span<const Scalar> x, const Instance& inst) {
  int added = 0;
  for (const auto& v : separate_all<Scalar>(x, inst)) {
    CutConstraint cut{v.set, v.bound};
    if (std::find(pool.begin(), pool.end(), cut) == pool.end()) {
      pool.push_back(cut);
      ++added;
    }
  }
  return added;
}

/// Crash hints are column indices relative to the structural block, so they
/// survive rebuilding the LP with more rows; shift them by the row count.
std::vector<int> shift_hint(const std::vector<int>& basis, int old_rows, int new_rows) {
  std::vector<int> out;
  out.reserve(basis.size());
  for (int b : basis) out.push_back(b - old_rows + new_rows);
  return out;
}

}  // namespace

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::degree: return "degree";
    case ConstraintKind::st_cut: return "st-cut";
    case ConstraintKind::even_cut: return "even-cut";
    case ConstraintKind::nonnegativity: return "nonnegativity";
  }
  return "unknown";
}

Rational inside_value(std::span<const Rational> x, const EdgeIndex& index, VertexSet set) {
  Rational total(0);
  for (const Edge& e : index.edges()) {
    if (inside(e, set)) total += x[index.id(e.u, e.v)];
  }
  return total;
}

std::optional<Violation<Rational>> separate(std::span<const Rational> x, const Instance& inst) {
  for (const auto& entry : x) {
    if (sgn(entry) < 0) throw InputError("separate: edge vector has a negative entry");
  }
  auto all = separate_all<Rational>(x, inst);
  if (all.empty()) return std::nullopt;
  // Within the first violated family report the most violated cut.
  const ConstraintKind family = all.front().kind;
  auto best = all.begin();
  for (auto it = all.begin(); it != all.end() && it->kind == family; ++it) {
    if (it->amount > best->amount) best = it;
  }
  return *best;
}

FeasibilityReport check_feasible(std::span<const Rational> x, const Instance& inst, const Rational& tol) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  FeasibilityReport report;
  report.degree_violation = 0;
  report.negativity = 0;
  for (const auto& entry : x) {
    if (-entry > report.negativity) report.negativity = -entry;
  }
  for (City v = 0; v < n; ++v) {
    const Rational lhs = cut_value<Rational>(x, index, singleton(v));
    const int b = (v == inst.s() || v == inst.t()) ? 1 : 2;
    const Rational gap = abs(lhs - b);
    if (gap > report.degree_violation) {
      report.degree_violation = gap;
      report.degree_city = v;
    }
  }
  std::vector<Rational> clipped(x.begin(), x.end());
  for (auto& entry : clipped) {
    if (sgn(entry) < 0) entry = 0;
  }
  report.cut_violation = separate(clipped, inst);
  report.worst = std::max(report.degree_violation, report.negativity);
  if (report.cut_violation && report.cut_violation->amount > report.worst) report.worst = report.cut_violation->amount;
  report.feasible = report.worst <= tol;
  return report;
}

std::optional<Violation<Rational>> exhaustive_cut_check(std::span<const Rational> x, const Instance& inst) {
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  std::optional<Violation<Rational>> worst;
  const VertexSet all = full_set(n);
  for (VertexSet set = 1; set < all; ++set) {
    const bool s_in = contains(set, inst.s());
    const bool t_in = contains(set, inst.t());
    const int bound = (s_in != t_in) ? 1 : 2;
    Rational lhs = cut_value<Rational>(x, index, set);
    Rational gap = Rational(bound) - lhs;
    if (sgn(gap) > 0 && (!worst || gap > worst->amount)) {
      worst = Violation<Rational>{s_in != t_in ? ConstraintKind::st_cut : ConstraintKind::even_cut, set,
                                  std::move(lhs), bound, std::move(gap)};
    }
  }
  return worst;
}

FractionalSolution solve_relaxation(const Instance& inst, const LpOptions& options) {
  const int n = inst.size();
  std::vector<CutConstraint> pool;
  FractionalSolution out;
  std::vector<int> hint;
  int hint_rows = n;

  if (!options.exact) {
    for (int round = 0; round < options.max_rounds; ++round) {
      auto result = solve_round<double>(inst, pool, {});
      out.pivots += result.pivots;
      ++out.rounds;
      hint = result.basis;
      hint_rows = n + static_cast<int>(pool.size());
      if (extend_pool<double>(pool, result.x, inst) == 0) break;
    }
  }

  for (int round = 0; round < options.max_rounds; ++round) {
    const int rows = n + static_cast<int>(pool.size());
    const auto shifted = shift_hint(hint, hint_rows, rows);
    auto result = solve_round<Rational>(inst, pool, shifted);
    out.pivots += result.pivots;
    ++out.rounds;
    hint = result.basis;
    hint_rows = rows;
    if (extend_pool<Rational>(pool, result.x, inst) == 0) {
      out.x = std::move(result.x);
      out.value = 0;
      for (EdgeId e = 0; e < inst.edges().num_edges(); ++e) out.value += inst.edge_cost(e) * out.x[e];
      out.cuts = std::move(pool);
      return out;
    }
  }
  throw NumericalError("cutting-plane loop exceeded " + std::to_string(options.max_rounds) + " rounds");
}

std::string solution_to_json(const FractionalSolution& sol, const EdgeIndex& index) {
  json doc;
  json edges = json::array();
  for (EdgeId e = 0; e < index.num_edges(); ++e) {
    if (sgn(sol.x[e]) == 0) continue;
    const Edge& ed = index.endpoints(e);
    edges.push_back(json::array({ed.u, ed.v, to_string(sol.x[e])}));
  }
  doc["edges"] = std::move(edges);
  doc["value"] = to_string(sol.value);
  return doc.dump();
}

FractionalSolution solution_from_json(std::string_view text, const EdgeIndex& index) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed fractional solution: ") + e.what());
  }
  auto read = [](const json& node) {
    if (node.is_string()) return parse_rational(node.get<std::string>());
    if (node.is_number_integer()) return Rational(static_cast<long>(node.get<std::int64_t>()));
    return rational_from_double(node.get<double>());
  };
  FractionalSolution sol;
  sol.x.assign(index.num_edges(), Rational(0));
  for (const auto& entry : doc.at("edges")) {
    const City u = entry.at(0).get<int>();
    const City v = entry.at(1).get<int>();
    if (u == v || u < 0 || v < 0 || u >= index.num_cities() || v >= index.num_cities()) {
      throw InputError("fractional solution names an invalid edge");
    }
    sol.x[index.id(u, v)] = read(entry.at(2));
  }
  sol.value = read(doc.at("value"));
  return sol;
}

}  // namespace stpath
