#pragma once

/// @file lp.hpp
/// @brief Path LP relaxation solved by cutting planes with min-cut separation.
///
/// The relaxation minimizes c(x) over x >= 0 with
///   x(delta(v)) = 2 for v not in {s,t},  x(delta(s)) = x(delta(t)) = 1,
///   x(delta(U)) >= 1 when U separates s from t, and >= 2 otherwise.
/// The returned point is always an exact rational extreme point.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stpath/instance.hpp"
#include "stpath/maxflow.hpp"
#include "stpath/rational.hpp"

namespace stpath {

/// Cut constraint x(delta(set)) >= bound.
struct CutConstraint {
  VertexSet set = 0;
  int bound = 0;
  friend bool operator==(const CutConstraint&, const CutConstraint&) = default;
};

struct FractionalSolution {
  /// Dense edge vector indexed by EdgeId.
  std::vector<Rational> x;
  Rational value;
  /// Cut rows present in the final LP (degree rows are implicit).
  std::vector<CutConstraint> cuts;
  int rounds = 0;
  long pivots = 0;
};

enum class ConstraintKind { degree, st_cut, even_cut, nonnegativity };

std::string to_string(ConstraintKind kind);

template <class Scalar>
struct Violation {
  ConstraintKind kind = ConstraintKind::st_cut;
  /// City for degree rows, the cut's side (s side for s-t cuts) otherwise.
  VertexSet set = 0;
  Scalar lhs{};
  int bound = 0;
  /// How far the constraint is from holding (positive when violated).
  Scalar amount{};
};

template <class Scalar>
Scalar cut_value(std::span<const Scalar> x, const EdgeIndex& index, VertexSet set) {
  Scalar total(0);
  for (const Edge& e : index.edges()) {
    if (crosses(e, set)) {
      const Scalar& v = x[index.id(e.u, e.v)];
      if (!ScalarOps<Scalar>::is_zero(v)) total += v;
    }
  }
  return total;
}

/// x(E[set]).
Rational inside_value(std::span<const Rational> x, const EdgeIndex& index, VertexSet set);

/// Minimum s-t cut (inclusion-minimal s side) and, for every other city v,
/// the minimum cut separating v from {s,t}. Returns the violated ones:
/// the s-t family first, then the even family by ascending v, deduplicated.
template <class Scalar>
std::vector<Violation<Scalar>> separate_all(std::span<const Scalar> x, const Instance& inst) {
  using Ops = ScalarOps<Scalar>;
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  std::vector<Violation<Scalar>> out;
  auto network = [&] {
    MaxFlow<Scalar> flow(n);
    for (const Edge& e : index.edges()) {
      const Scalar& v = x[index.id(e.u, e.v)];
      if (Ops::is_positive(v)) flow.add_undirected(e.u, e.v, v);
    }
    return flow;
  };
  {
    auto flow = network();
    Scalar value = flow.solve(inst.s(), inst.t());
    if (Ops::is_negative(value - Scalar(1))) {
      const VertexSet side = flow.source_side();
      Scalar lhs = cut_value<Scalar>(x, index, side);
      Scalar gap = Scalar(1) - lhs;
      out.push_back({ConstraintKind::st_cut, side, std::move(lhs), 1, std::move(gap)});
    }
  }
  Scalar big(1);
  for (const Edge& e : index.edges()) {
    const Scalar& v = x[index.id(e.u, e.v)];
    if (Ops::is_positive(v)) big += v;
  }
  for (City v = 0; v < n; ++v) {
    if (v == inst.s() || v == inst.t()) continue;
    auto flow = network();
    flow.add_undirected(inst.s(), inst.t(), big);
    Scalar value = flow.solve(v, inst.s());
    if (Ops::is_negative(value - Scalar(2))) {
      const VertexSet side = flow.source_side();
      const bool seen = std::any_of(out.begin(), out.end(), [&](const auto& o) { return o.set == side; });
      if (seen) continue;
      Scalar lhs = cut_value<Scalar>(x, index, side);
      Scalar gap = Scalar(2) - lhs;
      out.push_back({ConstraintKind::even_cut, side, std::move(lhs), 2, std::move(gap)});
    }
  }
  return out;
}

/// First violated cut constraint (s-t family before the even family), or none.
std::optional<Violation<Rational>> separate(std::span<const Rational> x, const Instance& inst);

struct FeasibilityReport {
  /// Largest |x(delta(v)) - b_v| and its city.
  Rational degree_violation;
  City degree_city = -1;
  /// Most negative entry, as a positive amount.
  Rational negativity;
  std::optional<Violation<Rational>> cut_violation;
  Rational worst;
  bool feasible = true;
};

/// Degree rows, nonnegativity and separation; an entry counts as violated
/// when it exceeds `tol` (zero for exact checking).
FeasibilityReport check_feasible(std::span<const Rational> x, const Instance& inst, const Rational& tol = Rational(0));

/// Exhaustive check over all nonempty proper subsets; the test oracle for
/// separation. Returns the worst violated cut, if any.
std::optional<Violation<Rational>> exhaustive_cut_check(std::span<const Rational> x, const Instance& inst);

struct LpOptions {
  /// Run the whole cutting-plane loop in rational arithmetic instead of
  /// solving in doubles first and polishing the final basis exactly.
  bool exact = false;
  int max_rounds = 1000;
};

FractionalSolution solve_relaxation(const Instance& inst, const LpOptions& options = {});

std::string solution_to_json(const FractionalSolution& sol, const EdgeIndex& index);
FractionalSolution solution_from_json(std::string_view text, const EdgeIndex& index);

}  // namespace stpath
