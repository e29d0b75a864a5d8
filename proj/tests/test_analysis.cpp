#include <gtest/gtest.h>

#include "stpath/analysis.hpp"
#include "stpath/lp.hpp"
#include "stpath/parity.hpp"
#include "stpath/reassembly.hpp"
#include "support.hpp"

using namespace stpath;
using fixtures::path_tree;

TEST(Benefit, Examples) {
  AnalysisParams params;
  EXPECT_EQ(params.benefit_factor(), Rational(3327, 1000));
  EXPECT_EQ(benefit(1, Rational(1), Rational(63, 500), params), Rational(437, 500));
  EXPECT_EQ(benefit(3, Rational(1), Rational(63, 500), params), 0);
  EXPECT_EQ(benefit(2, Rational(19, 10), Rational(437, 500), params), Rational(3327, 10000));
  // The min picks gamma when the cut is wide open.
  EXPECT_EQ(benefit(2, Rational(1), Rational(63, 500), params), Rational(63, 500));
}

TEST(Params, Gamma) {
  AnalysisParams params;
  params.r = 10;
  EXPECT_EQ(params.gamma(5), params.delta);
  EXPECT_EQ(params.gamma(6), 1 - params.delta);
}

TEST(SplitTree, PathAndRest) {
  const EdgeIndex idx(5);
  const EdgeSet tree = fixtures::tree_of(idx, {{0, 1}, {1, 2}, {1, 3}, {2, 4}});
  const auto split = split_tree(tree, idx, 0, 4);
  EXPECT_EQ(split.path, fixtures::tree_of(idx, {{0, 1}, {1, 2}, {2, 4}}));
  EXPECT_EQ(split.rest, fixtures::tree_of(idx, {{1, 3}}));
}

TEST(CorrectionVectors, HamiltonianPath) {
  const Instance inst = fixtures::line_instance(4);
  const auto sol = solve_relaxation(inst);
  const auto chain = narrow_cuts(sol.x, inst);
  AnalysisParams params;
  params.r = 2;
  const EdgeSet path = path_tree(inst.edges(), {0, 1, 2, 3});
  const Rational gamma = params.delta;
  const auto cv = correction_vectors(inst, path, gamma, chain, params, sol.x);
  const Rational one_minus = 1 - 2 * params.beta;
  Rational y_cost(0);
  for (EdgeId e = 0; e < inst.edges().num_edges(); ++e) {
    const bool on_path = std::binary_search(path.begin(), path.end(), e);
    EXPECT_EQ(cv.z[e], on_path ? Rational(one_minus * gamma) : Rational(0));
    y_cost += cv.y[e] * inst.edge_cost(e);
  }
  EXPECT_EQ(y_cost, params.beta * (1 + params.epsilon) * 3 + one_minus * gamma * 3);
}

TEST(CorrectionVectors, YInPolyhedronForRandomTrees) {
  std::mt19937_64 rng(12);
  for (auto kind : {MetricKind::euclidean, MetricKind::graph_metric, MetricKind::random_closure}) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const int n = 6 + static_cast<int>(seed % 5);
      const Instance inst = random_metric(seed, n, kind);
      const auto sol = solve_relaxation(inst);
      const auto chain = narrow_cuts(sol.x, inst);
      AnalysisParams params;
      params.r = 2;
      params.epsilon = Rational(1, 100);
      const EdgeIndex& idx = inst.edges();
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<City> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        EdgeSet tree;
        for (int a = 1; a < n; ++a) tree.push_back(idx.id(order[a], order[rng() % a]));
        std::sort(tree.begin(), tree.end());
        for (const Rational& gamma : {params.delta, Rational(1 - params.delta)}) {
          const auto cv = correction_vectors(inst, tree, gamma, chain, params, sol.x);
          const VertexSet targets = wrong_parity_set(tree, idx, inst.s(), inst.t());
          const auto check = check_tjoin_polyhedron(inst, cv.y, targets, chain);
          EXPECT_TRUE(check.ok);
          EXPECT_TRUE(check.exhaustive);
          Rational y_cost(0);
          for (EdgeId e = 0; e < idx.num_edges(); ++e) y_cost += cv.y[e] * inst.edge_cost(e);
          EXPECT_LE(min_tjoin(inst, targets).cost, y_cost);
        }
      }
    }
  }
}

TEST(Polyhedron, DetectsViolation) {
  const Instance inst = fixtures::line_instance(4);
  std::vector<Rational> y(inst.edges().num_edges(), Rational(0));
  const VertexSet targets = singleton(1) | singleton(2);
  const NarrowCutChain chain;
  const auto check = check_tjoin_polyhedron(inst, y, targets, chain);
  EXPECT_FALSE(check.ok);
  ASSERT_TRUE(check.violated.has_value());
  EXPECT_EQ(set_size(*check.violated & targets), 1);
  y[inst.edges().id(1, 2)] = 1;
  EXPECT_TRUE(check_tjoin_polyhedron(inst, y, targets, chain).ok);
}

TEST(BenefitInequality, IntegralRunHasZeroPi) {
  const Instance inst = fixtures::line_instance(5);
  const auto sol = solve_relaxation(inst);
  const auto chain = narrow_cuts(sol.x, inst);
  AnalysisParams params;
  params.r = 6;
  const std::vector<Block> blocks{{path_tree(inst.edges(), {0, 1, 2, 3, 4}), 6}};
  for (const auto& a : check_benefit_inequality(blocks, chain, params, inst.edges())) {
    EXPECT_EQ(a.pi, 0);
    EXPECT_EQ(a.required, 0);
    EXPECT_TRUE(a.pass);
    EXPECT_TRUE(a.pi_bound);
  }
}

TEST(BenefitInequality, ReassembledSyntheticEnsembles) {
  std::mt19937_64 rng(31);
  int positive_pi = 0;
  for (int run = 0; run < 200; ++run) {
    const int n = 5 + run % 4;
    const EdgeIndex idx(n);
    const auto ens = fixtures::random_path_ensemble(rng, n, 2 + run % 4);
    const auto chain = narrow_cuts(ens.x, fixtures::uniform_instance(n));
    const auto profile = theta_profile(chain, ens.r, Rational(0));
    const auto result = reassemble(ens.blocks, chain, profile, idx);
    AnalysisParams params;
    params.r = ens.r;
    for (const auto& a : check_benefit_inequality(result.blocks, chain, params, idx)) {
      EXPECT_TRUE(a.pass) << "run " << run << " cut " << a.cut;
      EXPECT_TRUE(a.pi_bound) << "run " << run << " cut " << a.cut;
      if (sgn(a.pi) > 0) ++positive_pi;
    }
  }
  EXPECT_GT(positive_pi, 0);
}

TEST(BoundReport, IntegralInstance) {
  AnalysisParams params;
  BoundInputs in;
  in.lp_value = 3;
  in.x_cost = 3;
  in.kept = 1;
  in.leftover = 0;
  in.mean_tree_cost = 3;
  in.mean_path_cost = 3;
  in.mean_z_cost = (1 - 2 * params.beta) * params.delta * 3;
  in.mean_y_cost = params.beta * 3 + in.mean_z_cost;
  in.leftover_tree_cost = 0;
  in.best_cost = 3;
  const auto rep = bound_report(in, params);
  EXPECT_EQ(rep.ratio_lp, 1);
  EXPECT_EQ(rep.bound, (2 - params.beta) * 3);
  EXPECT_TRUE(rep.best_within_bound);
  EXPECT_TRUE(rep.best_within_average);
  EXPECT_TRUE(rep.mean_y_bound);
  EXPECT_TRUE(rep.z_cost_bound);
}

TEST(BoundReport, HeadlineConstant) {
  AnalysisParams params;
  params.epsilon = Rational(3, 5000);
  EXPECT_LE(2 - params.beta + params.epsilon, Rational(783, 500));
  EXPECT_GT(params.beta, Rational(217, 500) + params.epsilon);
}
