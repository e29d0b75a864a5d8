#pragma once

/// @file reassembly.hpp
/// @brief Edge exchanges that make the leading trees of the ensemble have a
/// single edge in every narrow cut.
///
/// The ensemble S_1..S_r is stored as blocks of identical trees. Virtual
/// indices j are 1-based prefix positions. Operations on "tree j" act on the
/// whole block that starts at j; every exchange partner lies in a later
/// block, so all copies undergo the same exchange and a block is split only
/// when its partner block has fewer copies.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stpath/cuts.hpp"
#include "stpath/decompose.hpp"

namespace stpath {

struct ThetaProfile {
  /// theta[i] = max(0, ceil(r (2 - x*(C_i) - ε))) for i = 0..ell.
  std::vector<std::int64_t> theta;
  std::int64_t r = 0;
  Rational epsilon;
};

ThetaProfile theta_profile(const NarrowCutChain& chain, std::int64_t r, const Rational& epsilon);

enum class SwapLemma { connect_case1, connect_case2a, connect_case2b, connect_restore, single_edge };

std::string to_string(SwapLemma lemma);
SwapLemma parse_swap_lemma(std::string_view name);

/// S_j - e + f and S_k + e - f applied to `count` copies starting at the
/// virtual indices j_start and k_start.
struct SwapRecord {
  std::int64_t j_start = 0;
  std::int64_t k_start = 0;
  std::int64_t count = 0;
  int cut = 0;
  EdgeId e = -1;
  EdgeId f = -1;
  SwapLemma lemma = SwapLemma::connect_case1;
  friend bool operator==(const SwapRecord&, const SwapRecord&) = default;
};

struct ExchangeTrace {
  std::vector<SwapRecord> swaps;

  /// One JSON object per line.
  std::string to_jsonl() const;
  static ExchangeTrace from_jsonl(std::string_view text);
};

/// Block list addressed by virtual index.
class BlockEnsemble {
 public:
  explicit BlockEnsemble(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::vector<Block>& blocks() { return blocks_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  std::int64_t r() const;

  /// Block holding virtual index j (1-based).
  int block_of(std::int64_t j) const;
  std::int64_t start(int block) const;
  const EdgeSet& tree_at(std::int64_t j) const { return blocks_[block_of(j)].tree; }

  /// Makes j the first index of its block.
  void split_before(std::int64_t j);

 private:
  std::vector<Block> blocks_;
};

/// Adjacent identical blocks merged.
std::vector<Block> canonical_blocks(std::span<const Block> blocks);

struct ReassemblyContext {
  const EdgeIndex& index;
  const NarrowCutChain& chain;
  const ThetaProfile& profile;
  ExchangeTrace* trace = nullptr;
  /// Exchanges allowed per (tree, cut) pair; 0 selects n³.
  int iteration_cap = 0;
};

/// Smallest k >= j with (V,S_k)[M] connected; throws StructureViolation.
std::int64_t find_connected_partner(const BlockEnsemble& ens, std::int64_t j, VertexSet m, const EdgeIndex& index);

/// Smallest k > j with S_k ∩ C_h ∩ C_i empty; throws StructureViolation.
std::int64_t find_disjoint_partner(const BlockEnsemble& ens, std::int64_t j, VertexSet u_h, VertexSet u_i,
                                   const EdgeIndex& index);

/// Smallest k > theta with |S_k ∩ C_i| = 1; throws StructureViolation.
std::int64_t find_single_edge_partner(const BlockEnsemble& ens, std::int64_t theta, VertexSet u_i,
                                      const EdgeIndex& index);

/// Exchange pair (e, f) with e in S_j outside E[U_i] and f in S_k ∩ E[M]
/// such that S_j - e + f and S_k + e - f are spanning trees. Throws
/// InputError when the preconditions fail.
std::pair<EdgeId, EdgeId> exchange_pair(const EdgeSet& s_j, const EdgeSet& s_k, VertexSet u_i, VertexSet m,
                                      const EdgeIndex& index);

/// Exchanges `e` out of the block starting at j and `f` out of the block
/// starting at k > j on min(m_j, m_k) copies.
void group_swap(BlockEnsemble& ens, std::int64_t j, std::int64_t k, EdgeId e, EdgeId f, int cut, SwapLemma lemma,
                const ReassemblyContext& ctx);

/// Makes (V,S_j)[U_i] connected while keeping one edge in every active
/// earlier cut. Returns the number of exchanges.
int enforce_connected(BlockEnsemble& ens, std::int64_t j, int i, const ReassemblyContext& ctx);

/// Reduces |S_j ∩ C_i| to one. Requires (V,S_j)[U_i] connected.
int enforce_single_edge(BlockEnsemble& ens, std::int64_t j, int i, const ReassemblyContext& ctx);

struct ReassemblyResult {
  std::vector<Block> blocks;
  ExchangeTrace trace;
  std::size_t peak_blocks = 0;
};

/// Input blocks split at every theta boundary and at r/2, so every block
/// lies on one side of each threshold.
std::vector<Block> split_at_thresholds(std::span<const Block> blocks, const ThetaProfile& profile);

ReassemblyResult reassemble(std::span<const Block> blocks, const NarrowCutChain& chain, const ThetaProfile& profile,
                            const EdgeIndex& index, int iteration_cap = 0);

/// Applies a trace to the input blocks; throws StructureViolation if a
/// record does not apply.
std::vector<Block> replay_trace(std::span<const Block> blocks, const ExchangeTrace& trace, const EdgeIndex& index);

struct StructureReport {
  bool combination_preserved = false;
  bool prefix_property = false;
  bool all_trees_valid = false;
  /// Description of the first failure, empty on success.
  std::string failure;

  bool ok() const { return combination_preserved && prefix_property && all_trees_valid; }
};

/// Recomputes edge counts and per-cut prefix counts from scratch.
StructureReport verify_structure(std::span<const Block> before, std::span<const Block> after,
                                 const NarrowCutChain& chain, const ThetaProfile& profile, const EdgeIndex& index);

/// |S ∩ C| = 1 for every narrow cut of the chain.
bool is_global_gao_tree(const EdgeSet& tree, const NarrowCutChain& chain, const EdgeIndex& index);

}  // namespace stpath
