#pragma once

/// @file instance.hpp
/// @brief Metric s-t-path TSP instances: model, ingestion, generation and
/// the exact brute-force optimum used as a validation oracle.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stpath/graph.hpp"
#include "stpath/rational.hpp"

namespace stpath {

/// Integral when every cost is an integer (TSPLIB, graph metrics); real otherwise.
enum class CostKind { integral, real };

enum class InstanceFormat { tsplib, native_json };

enum class MetricKind { euclidean, graph_metric, random_closure };

InstanceFormat parse_instance_format(std::string_view name);
MetricKind parse_metric_kind(std::string_view name);
std::string to_string(MetricKind kind);

/// Row-major n*n cost matrix.
using CostMatrix = std::vector<Rational>;

/// Complete metric on n cities with distinct endpoints s and t.
///
/// Costs are held as exact rationals; a double shadow copy serves the
/// floating-point LP phase. Immutable after construction.
class Instance {
 public:
  /// Validates the matrix; applies the metric closure when the raw costs
  /// violate the triangle inequality (the raw matrix is then kept).
  Instance(std::string name, int n, City s, City t, CostMatrix costs);

  const std::string& name() const { return name_; }
  int size() const { return n_; }
  City s() const { return s_; }
  City t() const { return t_; }
  const EdgeIndex& edges() const { return index_; }
  CostKind kind() const { return kind_; }

  const Rational& cost(City u, City v) const { return u == v ? zero_ : edge_cost_[index_.id(u, v)]; }
  const Rational& edge_cost(EdgeId e) const { return edge_cost_[e]; }
  double edge_cost_d(EdgeId e) const { return edge_cost_d_[e]; }
  std::span<const Rational> edge_costs() const { return edge_cost_; }

  bool closure_applied() const { return raw_.has_value(); }
  /// Input matrix before the metric closure, when one was needed.
  const std::optional<CostMatrix>& raw_costs() const { return raw_; }

  /// Copy with cities renamed by `perm` (city v becomes perm[v]).
  Instance relabeled(std::span<const City> perm) const;

 private:
  std::string name_;
  int n_ = 0;
  City s_ = 0;
  City t_ = 0;
  EdgeIndex index_;
  std::vector<Rational> edge_cost_;
  std::vector<double> edge_cost_d_;
  CostKind kind_ = CostKind::integral;
  std::optional<CostMatrix> raw_;
  Rational zero_{0};
};

/// Hamiltonian s-t path.
struct HamPath {
  std::vector<City> order;
  Rational cost;
};

Rational path_cost(const Instance& inst, std::span<const City> order);

/// True iff `order` visits every city once, starting at s and ending at t.
bool is_hamiltonian_st_path(const Instance& inst, std::span<const City> order);

/// All-pairs shortest paths (Floyd-Warshall) in exact arithmetic.
/// Throws InputError for asymmetric, negative or nonzero-diagonal input.
CostMatrix metric_closure(const CostMatrix& costs, int n);

bool satisfies_triangle_inequality(const CostMatrix& costs, int n);

struct ParseOptions {
  std::optional<City> s;
  std::optional<City> t;
};

/// Reads TSPLIB (EUC_2D, EXPLICIT FULL_MATRIX/UPPER_ROW) or the native JSON
/// format {name, n, s, t, costs} with `costs` the strict upper triangle in
/// row-major order. Endpoints default to the first and last city for TSPLIB.
Instance parse_instance(std::string_view text, InstanceFormat format, const ParseOptions& options = {});

/// Native JSON document for `inst`; exact values that are not doubles are
/// written as "p/q" strings.
std::string to_native_json(const Instance& inst);

inline constexpr int kDefaultBruteForceCap = 12;

/// Minimum-cost Hamiltonian s-t path by subset dynamic programming.
HamPath brute_force_opt(const Instance& inst, int max_n = kDefaultBruteForceCap);

/// Deterministic random metric for (seed, n, kind); s = 0 and t = n-1.
Instance random_metric(std::uint64_t seed, int n, MetricKind kind);

}  // namespace stpath
