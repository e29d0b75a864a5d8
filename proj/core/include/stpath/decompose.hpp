#pragma once

/// @file decompose.hpp
/// @brief Spanning-tree decompositions of the LP point and their rounding to
/// a uniform ensemble of r trees.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stpath/graph.hpp"
#include "stpath/rational.hpp"

namespace stpath {

struct WeightedTree {
  EdgeSet tree;
  Rational weight;
};

struct TreeDistribution {
  std::vector<WeightedTree> blocks;

  Rational total() const;
  /// Σ weight·χ^S as a dense edge vector.
  std::vector<Rational> edge_vector(const EdgeIndex& index) const;
};

/// A run of `count` identical trees; virtual indices are prefix sums.
struct Block {
  EdgeSet tree;
  std::int64_t count = 0;
  friend bool operator==(const Block&, const Block&) = default;
};

struct RoundedEnsemble {
  std::vector<Block> blocks;
  std::int64_t r = 0;
  Rational epsilon;
  /// The weight lost to rounding, per tree (p'' in the analysis).
  TreeDistribution leftover;
  /// Σ p' (the kept fraction of the original distribution).
  Rational kept;
  /// Renormalized ensemble vector (1/r) Σ χ^{S_j}.
  std::vector<Rational> x;
};

struct DecomposeStats {
  int pricing_rounds = 0;
  long pivots = 0;
};

/// Column generation: exact master over the support of x, max-weight
/// spanning tree pricing. Throws InputError with a violated rank inequality
/// when x is outside the spanning tree polytope.
TreeDistribution decompose(std::span<const Rational> x, const EdgeIndex& index, City s, City t,
                           DecomposeStats* stats = nullptr);

/// Weights positive, trees spanning, Σ weight·χ^S within `tol` of x.
bool verify_combination(const TreeDistribution& dist, std::span<const Rational> x, const EdgeIndex& index,
                        const Rational& tol = Rational(0));

/// Sum of the edge vectors of a block list, each tree counted `count` times.
std::vector<std::int64_t> block_edge_counts(std::span<const Block> blocks, const EdgeIndex& index);

struct RoundingOptions {
  /// Upper bound on r in exact (epsilon = 0) mode.
  std::int64_t max_r = 2'000'000;
};

/// Requested epsilon is snapped down so that n³/ε is an integer. epsilon = 0
/// selects exact mode, where r is the common denominator of the weights.
RoundedEnsemble round_distribution(const TreeDistribution& dist, const Rational& epsilon, int n,
                                   const EdgeIndex& index, const RoundingOptions& options = {});

/// Largest ε' <= ε with n³/ε' integral.
Rational snap_epsilon(const Rational& epsilon, int n);

/// max over F ⊆ E of |x(F) - x*(F)|.
Rational max_subset_deviation(std::span<const Rational> x, std::span<const Rational> xstar);

std::string distribution_to_json(const TreeDistribution& dist, const EdgeIndex& index);
TreeDistribution distribution_from_json(std::string_view text, const EdgeIndex& index);

}  // namespace stpath
