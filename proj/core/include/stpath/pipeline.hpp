#pragma once

/// @file pipeline.hpp
/// @brief End-to-end runs: LP, narrow cuts, tree decomposition, rounding,
/// reassembly, parity correction and certificates.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stpath/analysis.hpp"
#include "stpath/error.hpp"
#include "stpath/instance.hpp"
#include "stpath/lp.hpp"
#include "stpath/parity.hpp"
#include "stpath/reassembly.hpp"

namespace stpath {

/// An error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunConfig {
  /// Rounding parameter; unset picks n³/50000 (capped at 1), 0 runs the
  /// ensemble exactly.
  std::optional<Rational> epsilon;
  /// Solve the LP in rational arithmetic from the start.
  bool exact_lp = false;
  int max_brute_n = 10;
  int matching_cap = kDefaultMatchingCap;
  int polyhedron_cap = kPolyhedronExhaustiveCap;
  CutMode cut_mode = CutMode::automatic;
  std::int64_t max_r = 2'000'000;
  /// Workers for the per-tree parity correction.
  int threads = 1;

  void validate() const;
};

/// Requested ε resolved for an instance of n cities.
Rational resolve_epsilon(const RunConfig& config, int n);

struct Certificates {
  bool structure = false;
  bool benefit = false;
  bool tjoin_polyhedron = false;
  bool tjoin_exhaustive = false;
  bool bound = false;
  /// Only meaningful in exact ensemble mode.
  std::optional<bool> gao_tree;
  /// Set when the first reassembled tree is a global Gao tree.
  std::optional<bool> half_xstar;

  bool all() const;
};

struct RunArtifacts {
  std::vector<Block> ensemble_in;
  std::vector<Block> ensemble_out;
  ExchangeTrace trace;
};

struct RunResult {
  explicit RunResult(Instance inst) : instance(std::move(inst)) {}

  Instance instance;
  FractionalSolution lp;
  NarrowCutChain chain;
  TreeDistribution distribution;
  RoundedEnsemble ensemble;
  ThetaProfile profile;
  RunArtifacts artifacts;
  std::size_t peak_blocks = 0;
  std::vector<CutAudit> audits;
  BoundReport bound;
  AnalysisParams params;
  HamPath best;
  std::optional<HamPath> opt;
  Certificates certificates;
  /// Candidates evaluated (distinct reassembled trees plus leftover trees).
  int candidates = 0;
  std::string structure_failure;

  /// Deterministic JSON report.
  std::string report_json() const;
};

/// Throws StageError on failure of any stage.
RunResult run_pipeline(const Instance& inst, const RunConfig& config);

/// Artifact bundle (bundle.json plus trace.jsonl) under `dir`.
void write_artifacts(const RunResult& result, const std::filesystem::path& dir);

struct VerifyResult {
  bool ok = false;
  std::vector<std::string> failures;
};

/// Re-verifies a bundle from its serialized data only.
VerifyResult verify_artifacts(const std::filesystem::path& dir);

struct BatchConfig {
  RunConfig run;
  MetricKind kind = MetricKind::euclidean;
  int n = 8;
  std::uint64_t first_seed = 0;
  std::uint64_t end_seed = 0;
  int threads = 1;
};

struct BatchEntry {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Rational ratio_lp;
  std::optional<Rational> ratio_opt;
  /// Smallest benefit - required over the run's cuts.
  Rational min_benefit_slack;
};

struct BatchResult {
  std::vector<BatchEntry> entries;
  bool ok() const;
  std::string summary_json() const;
};

BatchResult run_batch(const BatchConfig& config);

/// Reads an instance file; the format is taken from `format` or the extension.
Instance load_instance(const std::filesystem::path& path, std::optional<InstanceFormat> format = std::nullopt,
                       const ParseOptions& options = {});

}  // namespace stpath
