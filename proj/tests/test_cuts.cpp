#include <gtest/gtest.h>

#include "stpath/cuts.hpp"
#include "stpath/error.hpp"
#include "stpath/lp.hpp"
#include "support.hpp"

using namespace stpath;

TEST(NarrowCuts, LineFourChain) {
  const Instance inst = fixtures::line_instance(4);
  const auto sol = solve_relaxation(inst);
  for (auto mode : {CutMode::exhaustive, CutMode::flow}) {
    const auto chain = narrow_cuts(sol.x, inst, mode);
    EXPECT_EQ(chain.levels, (std::vector<VertexSet>{0b1, 0b11, 0b111}));
    for (const auto& v : chain.values) EXPECT_EQ(v, 1);
    EXPECT_EQ(chain.ell(), 2);
  }
}

TEST(NarrowCuts, OnlyEndpointCuts) {
  // s=0, t=3, cities 1,2 with x = 1/2 on every edge except {s,t}.
  const Instance inst = fixtures::uniform_instance(4);
  const EdgeIndex& idx = inst.edges();
  std::vector<Rational> x(idx.num_edges(), Rational(1, 2));
  x[idx.id(0, 3)] = 0;
  x[idx.id(1, 2)] = 1;
  ASSERT_TRUE(check_feasible(x, inst).feasible);
  // Enumeration: every s-t cut other than {s} and V∖{t} has value 2.
  for (VertexSet u = 1; u < 16; ++u) {
    if (!contains(u, 0) || contains(u, 3) || u == 1 || u == 0b0111) continue;
    EXPECT_EQ(cut_value<Rational>(x, idx, u), 2);
  }
  for (auto mode : {CutMode::exhaustive, CutMode::flow}) {
    const auto chain = narrow_cuts(x, inst, mode);
    EXPECT_EQ(chain.ell(), 1);
    EXPECT_EQ(chain.levels, (std::vector<VertexSet>{0b1, 0b0111}));
  }
}

TEST(NarrowCuts, ExhaustiveMatchesFlowOnRandomLps) {
  for (auto kind : {MetricKind::euclidean, MetricKind::graph_metric, MetricKind::random_closure}) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const Instance inst = random_metric(seed, 6 + static_cast<int>(seed % 5), kind);
      const auto sol = solve_relaxation(inst);
      const auto a = narrow_cuts(sol.x, inst, CutMode::exhaustive);
      const auto b = narrow_cuts(sol.x, inst, CutMode::flow);
      EXPECT_EQ(a.levels, b.levels);
      EXPECT_EQ(a.values, b.values);
      EXPECT_EQ(a.levels.front(), singleton(inst.s()));
      EXPECT_EQ(a.values.front(), 1);
      EXPECT_NO_THROW(validate_chain(a, sol.x, inst));
    }
  }
}

TEST(NarrowCuts, ExhaustiveMatchesFlowOnSyntheticPoints) {
  std::mt19937_64 rng(11);
  for (int run = 0; run < 60; ++run) {
    const int n = 5 + run % 5;
    const auto ens = fixtures::random_path_ensemble(rng, n, 2 + run % 3);
    const Instance inst = fixtures::uniform_instance(n);
    const auto a = narrow_cuts(ens.x, inst, CutMode::exhaustive);
    const auto b = narrow_cuts(ens.x, inst, CutMode::flow);
    EXPECT_EQ(a.levels, b.levels);
    // Every s-t cut below 2 is in the chain.
    int narrow = 0;
    for (VertexSet u = 0; u < (VertexSet{1} << n); ++u) {
      if (contains(u, 0) && !contains(u, n - 1) && cut_value<Rational>(ens.x, inst.edges(), u) < 2) ++narrow;
    }
    EXPECT_EQ(narrow, a.size());
  }
}

TEST(NarrowCuts, InfeasibleInputRejected) {
  const Instance inst = fixtures::line_instance(4);
  std::vector<Rational> x(inst.edges().num_edges(), Rational(0));
  EXPECT_THROW(narrow_cuts(x, inst), InputError);
}

TEST(ValidateChain, DetectsBrokenNesting) {
  const Instance inst = fixtures::line_instance(4);
  const auto sol = solve_relaxation(inst);
  auto chain = narrow_cuts(sol.x, inst);
  std::swap(chain.levels[1], chain.levels[2]);
  EXPECT_THROW(validate_chain(chain, sol.x, inst), StructureViolation);
}
