#include <gtest/gtest.h>

#include "stpath/lp.hpp"
#include "support.hpp"

using namespace stpath;

namespace {

std::vector<Rational> path_vector(const EdgeIndex& index, const std::vector<City>& order) {
  std::vector<Rational> x(index.num_edges(), Rational(0));
  for (EdgeId e : fixtures::path_tree(index, order)) x[e] = 1;
  return x;
}

}  // namespace

TEST(Lp, ThreeCitiesForced) {
  CostMatrix c{0, 2, 3, 2, 0, 2, 3, 2, 0};
  const Instance inst("three", 3, 0, 2, c);
  const auto sol = solve_relaxation(inst);
  const EdgeIndex& idx = inst.edges();
  EXPECT_EQ(sol.x[idx.id(0, 1)], 1);
  EXPECT_EQ(sol.x[idx.id(1, 2)], 1);
  EXPECT_EQ(sol.x[idx.id(0, 2)], 0);
  EXPECT_EQ(sol.value, 4);
}

TEST(Lp, LineMetricIntegral) {
  const Instance inst = fixtures::line_instance(4);
  for (bool exact : {false, true}) {
    const auto sol = solve_relaxation(inst, LpOptions{exact});
    EXPECT_EQ(sol.value, 3);
    EXPECT_EQ(sol.x, path_vector(inst.edges(), {0, 1, 2, 3}));
  }
}

TEST(Separate, ZeroVectorGivesSource) {
  const Instance inst = fixtures::line_instance(5);
  std::vector<Rational> x(inst.edges().num_edges(), Rational(0));
  const auto v = separate(x, inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->set, singleton(0));
  EXPECT_EQ(v->lhs, 0);
}

TEST(Separate, HamiltonianPathFeasible) {
  const Instance inst = fixtures::line_instance(6);
  const auto x = path_vector(inst.edges(), {0, 3, 1, 4, 2, 5});
  EXPECT_FALSE(separate(x, inst).has_value());
  EXPECT_TRUE(check_feasible(x, inst).feasible);
}

TEST(Separate, LoweredEdgeFoundAgreesWithEnumeration) {
  const Instance inst = fixtures::line_instance(6);
  auto x = path_vector(inst.edges(), {0, 1, 2, 3, 4, 5});
  x[inst.edges().id(2, 3)] = Rational(1, 2);
  const auto v = separate(x, inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->lhs, Rational(1, 2));
  // The only cut crossing just {2,3} on a path.
  EXPECT_EQ(v->set, VertexSet{0b000111});
  const auto oracle = exhaustive_cut_check(x, inst);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_EQ(oracle->amount, v->amount);
}

TEST(CheckFeasible, DegreeViolation) {
  const Instance inst = fixtures::line_instance(4);
  auto x = path_vector(inst.edges(), {0, 1, 2, 3});
  x[inst.edges().id(0, 2)] = Rational(1, 10);
  const auto rep = check_feasible(x, inst);
  EXPECT_FALSE(rep.feasible);
  EXPECT_EQ(rep.degree_violation, Rational(1, 10));
}

TEST(CheckFeasible, EmptyVector) {
  const Instance inst = fixtures::line_instance(4);
  std::vector<Rational> x(inst.edges().num_edges(), Rational(0));
  const auto rep = check_feasible(x, inst);
  EXPECT_FALSE(rep.feasible);
  ASSERT_TRUE(rep.cut_violation.has_value());
  EXPECT_EQ(rep.cut_violation->set, singleton(0));
  EXPECT_EQ(rep.cut_violation->amount, 1);
}

TEST(Lp, FeasibleByEnumerationAndBelowOpt) {
  for (auto kind : {MetricKind::euclidean, MetricKind::graph_metric, MetricKind::random_closure}) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const int n = 5 + static_cast<int>(seed % 6);
      const Instance inst = random_metric(seed, n, kind);
      const auto sol = solve_relaxation(inst);
      EXPECT_TRUE(check_feasible(sol.x, inst).feasible);
      EXPECT_FALSE(exhaustive_cut_check(sol.x, inst).has_value());
      Rational total(0), cost(0);
      for (EdgeId e = 0; e < inst.edges().num_edges(); ++e) {
        total += sol.x[e];
        cost += sol.x[e] * inst.edge_cost(e);
      }
      EXPECT_EQ(total, n - 1);
      EXPECT_EQ(cost, sol.value);
      EXPECT_LE(sol.value, brute_force_opt(inst).cost) << to_string(kind) << " seed " << seed;
    }
  }
}

TEST(Lp, ExactAndPolishedAgreeOnValue) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = random_metric(seed, 7, MetricKind::euclidean);
    EXPECT_EQ(solve_relaxation(inst).value, solve_relaxation(inst, LpOptions{true}).value);
  }
}

TEST(Lp, FifteenCitiesEnumerated) {
  const Instance inst = random_metric(5, 15, MetricKind::random_closure);
  const auto sol = solve_relaxation(inst);
  EXPECT_FALSE(exhaustive_cut_check(sol.x, inst).has_value());
}

TEST(Lp, SolutionJsonRoundTrip) {
  const Instance inst = random_metric(2, 8, MetricKind::graph_metric);
  const auto sol = solve_relaxation(inst);
  const auto back = solution_from_json(solution_to_json(sol, inst.edges()), inst.edges());
  EXPECT_EQ(back.x, sol.x);
  EXPECT_EQ(back.value, sol.value);
}
