#pragma once

/// @file analysis.hpp
/// @brief Certificates for the best-of-many bound: benefits, correction
/// vectors y^S, T-join polyhedron membership and the final cost bound.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stpath/cuts.hpp"
#include "stpath/decompose.hpp"
#include "stpath/instance.hpp"

namespace stpath {

struct AnalysisParams {
  /// beta / (1 - 2 beta) = 3.327.
  Rational beta{3327, 7654};
  Rational delta{63, 500};
  Rational epsilon{0};
  std::int64_t r = 0;

  /// delta for the first half of the ensemble, 1 - delta for the rest.
  Rational gamma(std::int64_t j) const { return 2 * j <= r ? delta : Rational(1 - delta); }
  /// beta / (1 - 2 beta).
  Rational benefit_factor() const { return Rational(beta / (1 - 2 * beta)); }
};

/// Benefit of a tree with `crossing` edges in a narrow cut of LP value
/// `cut_value`.
Rational benefit(int crossing, const Rational& cut_value, const Rational& gamma, const AnalysisParams& params);

/// I_S (edges of the s-t path in S) and J_S = S \ I_S.
struct TreeSplit {
  EdgeSet path;
  EdgeSet rest;
};
TreeSplit split_tree(const EdgeSet& tree, const EdgeIndex& index, City s, City t);

/// Cheapest edge of delta(side), lowest id on ties.
EdgeId min_cost_edge(const Instance& inst, VertexSet side);

struct CorrectionVectors {
  std::vector<Rational> z;
  std::vector<Rational> y;
  TreeSplit split;
};

CorrectionVectors correction_vectors(const Instance& inst, const EdgeSet& tree, const Rational& gamma,
                                     const NarrowCutChain& chain, const AnalysisParams& params,
                                     std::span<const Rational> xstar);

struct PolyhedronCheck {
  bool ok = true;
  /// False when only the narrow cuts were checked.
  bool exhaustive = false;
  std::optional<VertexSet> violated;
  Rational worst_value;
};

inline constexpr int kPolyhedronExhaustiveCap = 12;

/// y(delta(U)) >= 1 for every U with |U ∩ T| odd; over all U for n up to
/// `exhaustive_cap`, else over the narrow cuts only.
PolyhedronCheck check_tjoin_polyhedron(const Instance& inst, std::span<const Rational> y, VertexSet targets,
                                       const NarrowCutChain& chain, int exhaustive_cap = kPolyhedronExhaustiveCap);

struct CutAudit {
  int cut = 0;
  int size = 0;
  Rational xstar_value;
  /// Value of the ensemble vector on the cut.
  Rational x_value;
  Rational xi;
  Rational pi;
  Rational benefit;
  Rational required;
  std::int64_t theta = 0;
  bool pass = false;
  /// pi <= x(C) - 1 <= xi - 1.
  bool pi_bound = false;
};

/// Per-cut audit of (1/r) Σ_j b_{S_j,C} >= 3.327 (2 - x*(C) - ε) π.
std::vector<CutAudit> check_benefit_inequality(std::span<const Block> blocks, const NarrowCutChain& chain,
                                               const AnalysisParams& params, const EdgeIndex& index);

struct BoundInputs {
  Rational lp_value;
  /// c(x) of the ensemble vector.
  Rational x_cost;
  /// Σ p' and Σ p''.
  Rational kept;
  Rational leftover;
  /// (1/r) Σ_j c(S_j), (1/r) Σ_j c(y^{S_j}), (1/r) Σ_j c(z^{S_j}), (1/r) Σ_j c(I_{S_j}).
  Rational mean_tree_cost;
  Rational mean_y_cost;
  Rational mean_z_cost;
  Rational mean_path_cost;
  /// Σ p''_S c(S).
  Rational leftover_tree_cost;
  Rational best_cost;
};

struct BoundReport {
  Rational bound;
  Rational averaged;
  Rational ratio_lp;
  bool best_within_bound = false;
  bool best_within_average = false;
  bool mean_y_bound = false;
  bool z_cost_bound = false;
  bool kept_x_bound = false;
};

BoundReport bound_report(const BoundInputs& in, const AnalysisParams& params);

}  // namespace stpath
