#pragma once

/// @file cuts.hpp
/// @brief The chain of narrow cuts (cuts of LP value below 2).

#include <span>
#include <vector>

#include "stpath/instance.hpp"
#include "stpath/rational.hpp"

namespace stpath {

/// Nested s-sides {s} = U_0 ⊂ U_1 ⊂ ... ⊂ U_ell = V \ {t} of every cut
/// delta(U) with x*(delta(U)) < 2.
struct NarrowCutChain {
  std::vector<VertexSet> levels;
  std::vector<Rational> values;

  int ell() const { return static_cast<int>(levels.size()) - 1; }
  int size() const { return static_cast<int>(levels.size()); }
};

enum class CutMode {
  automatic,   ///< exhaustive up to 20 cities, flow-based above
  exhaustive,  ///< enumerate every s-side set
  flow,        ///< one forced minimum cut per ordered city pair
};

/// Throws InputError when x is not feasible for the path LP and
/// StructureViolation if the narrow cuts fail to nest.
NarrowCutChain narrow_cuts(std::span<const Rational> x, const Instance& inst, CutMode mode = CutMode::automatic);

/// Checks nesting, endpoints and values against x; throws StructureViolation.
void validate_chain(const NarrowCutChain& chain, std::span<const Rational> x, const Instance& inst);

}  // namespace stpath
