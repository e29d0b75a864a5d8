#include <gtest/gtest.h>

#include "stpath/decompose.hpp"
#include "stpath/error.hpp"
#include "stpath/lp.hpp"
#include "support.hpp"

using namespace stpath;

namespace {

std::vector<Rational> indicator(const EdgeIndex& index, const EdgeSet& tree) {
  std::vector<Rational> x(index.num_edges(), Rational(0));
  for (EdgeId e : tree) x[e] = 1;
  return x;
}

}  // namespace

TEST(Decompose, SingleTree) {
  const EdgeIndex idx(5);
  const EdgeSet path = fixtures::path_tree(idx, {0, 2, 1, 3, 4});
  const auto dist = decompose(indicator(idx, path), idx, 0, 4);
  ASSERT_EQ(dist.blocks.size(), 1U);
  EXPECT_EQ(dist.blocks[0].tree, path);
  EXPECT_EQ(dist.blocks[0].weight, 1);
}

TEST(Decompose, HalfHalfOnFourCities) {
  const EdgeIndex idx(4);
  const EdgeSet a = fixtures::path_tree(idx, {0, 1, 2, 3});
  const EdgeSet b = fixtures::path_tree(idx, {0, 2, 1, 3});
  std::vector<Rational> x(idx.num_edges(), Rational(0));
  for (EdgeId e : a) x[e] += Rational(1, 2);
  for (EdgeId e : b) x[e] += Rational(1, 2);
  const auto dist = decompose(x, idx, 0, 3);
  EXPECT_GE(dist.blocks.size(), 2U);
  EXPECT_TRUE(verify_combination(dist, x, idx));
  EXPECT_EQ(dist.total(), 1);
}

TEST(Decompose, WrongTotalRejected) {
  const EdgeIndex idx(5);
  auto x = indicator(idx, fixtures::path_tree(idx, {0, 1, 2, 3, 4}));
  x[idx.id(1, 2)] = Rational(1, 2);
  EXPECT_THROW(decompose(x, idx, 0, 4), InputError);
}

TEST(Decompose, RandomLpOptimaAndSyntheticPoints) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = random_metric(seed, 5 + static_cast<int>(seed % 5), MetricKind::random_closure);
    const auto sol = solve_relaxation(inst);
    const auto dist = decompose(sol.x, inst.edges(), inst.s(), inst.t());
    EXPECT_TRUE(verify_combination(dist, sol.x, inst.edges()));
  }
  std::mt19937_64 rng(5);
  for (int run = 0; run < 40; ++run) {
    const int n = 5 + run % 4;
    const EdgeIndex idx(n);
    const auto ens = fixtures::random_path_ensemble(rng, n, 3);
    const auto dist = decompose(ens.x, idx, 0, n - 1);
    EXPECT_TRUE(verify_combination(dist, ens.x, idx));
    for (const auto& b : dist.blocks) {
      EXPECT_EQ(count_crossing(b.tree, idx, singleton(0)), 1);
      EXPECT_EQ(count_crossing(b.tree, idx, singleton(n - 1)), 1);
    }
  }
}

TEST(VerifyCombination, DetectsPerturbationAndForest) {
  const EdgeIndex idx(4);
  const EdgeSet a = fixtures::path_tree(idx, {0, 1, 2, 3});
  const EdgeSet b = fixtures::path_tree(idx, {0, 2, 1, 3});
  std::vector<Rational> x(idx.num_edges(), Rational(0));
  for (EdgeId e : a) x[e] += Rational(1, 2);
  for (EdgeId e : b) x[e] += Rational(1, 2);
  TreeDistribution dist{{{a, Rational(1, 2)}, {b, Rational(1, 2)}}};
  EXPECT_TRUE(verify_combination(dist, x, idx));

  auto perturbed = dist;
  perturbed.blocks[0].weight += Rational(1, 1000);
  EXPECT_FALSE(verify_combination(perturbed, x, idx));
  EXPECT_FALSE(verify_combination(perturbed, x, idx, Rational(1, 1000000)));

  auto forest = dist;
  forest.blocks[0].tree = fixtures::tree_of(idx, {{0, 1}, {2, 3}, {0, 3}});
  forest.blocks[0].tree.pop_back();
  EXPECT_FALSE(verify_combination(forest, x, idx));
}

TEST(Rounding, SingleBlock) {
  const EdgeIndex idx(4);
  const EdgeSet path = fixtures::path_tree(idx, {0, 1, 2, 3});
  TreeDistribution dist{{{path, Rational(1)}}};
  const auto ens = round_distribution(dist, Rational(1, 64), 4, idx);
  EXPECT_EQ(ens.r, 8192);
  ASSERT_EQ(ens.blocks.size(), 1U);
  EXPECT_EQ(ens.blocks[0].count, 8192);
  EXPECT_EQ(ens.kept, 1);
  EXPECT_EQ(ens.leftover.total(), 0);
}

TEST(Rounding, AlignedMultiples) {
  const EdgeIndex idx(4);
  const EdgeSet a = fixtures::path_tree(idx, {0, 1, 2, 3});
  const EdgeSet b = fixtures::path_tree(idx, {0, 2, 1, 3});
  TreeDistribution dist{{{a, Rational(2, 3)}, {b, Rational(1, 3)}}};
  // n³/ε = 192 is a multiple of 3.
  const auto ens = round_distribution(dist, Rational(1, 3), 4, idx);
  EXPECT_EQ(ens.r, 384);
  ASSERT_EQ(ens.blocks.size(), 2U);
  EXPECT_EQ(ens.blocks[0].count, 256);
  EXPECT_EQ(ens.blocks[1].count, 128);
  EXPECT_EQ(ens.leftover.total(), 0);
  EXPECT_EQ(ens.kept, 1);
}

TEST(Rounding, LeftoverBoundedAndPropertyTwo) {
  std::mt19937_64 rng(9);
  for (int run = 0; run < 40; ++run) {
    const int n = 5 + run % 4;
    const EdgeIndex idx(n);
    // Awkward denominators so that floor rounding loses weight.
    TreeDistribution dist;
    Rational left(1);
    for (int p = 0; p < 3; ++p) {
      const auto paths = fixtures::random_path_ensemble(rng, n, 1);
      const Rational w = p == 2 ? left : Rational(left * Rational(static_cast<long>(rng() % 97 + 1), 211));
      dist.blocks.push_back({paths.blocks[0].tree, w});
      left -= w;
    }
    const auto x = dist.edge_vector(idx);
    const Rational eps(1, 7 + run);
    const auto ens = round_distribution(dist, eps, n, idx);
    EXPECT_EQ(ens.r % 2, 0);
    EXPECT_LE(ens.epsilon, eps);
    EXPECT_LE(ens.leftover.total(), ens.epsilon / n);
    EXPECT_EQ(ens.kept + ens.leftover.total(), 1);
    EXPECT_LE(max_subset_deviation(ens.x, x), ens.epsilon);
    std::int64_t r = 0;
    for (const auto& b : ens.blocks) r += b.count;
    EXPECT_EQ(r, ens.r);
  }
}

TEST(Rounding, ExactMode) {
  const EdgeIndex idx(4);
  const EdgeSet a = fixtures::path_tree(idx, {0, 1, 2, 3});
  const EdgeSet b = fixtures::path_tree(idx, {0, 2, 1, 3});
  TreeDistribution dist{{{a, Rational(2, 5)}, {b, Rational(3, 5)}}};
  const auto ens = round_distribution(dist, Rational(0), 4, idx);
  EXPECT_EQ(ens.r, 10);
  EXPECT_EQ(ens.x, dist.edge_vector(idx));
  EXPECT_EQ(ens.leftover.total(), 0);
}

TEST(Rounding, EpsilonOutOfRange) {
  const EdgeIndex idx(4);
  TreeDistribution dist{{{fixtures::path_tree(idx, {0, 1, 2, 3}), Rational(1)}}};
  EXPECT_THROW(round_distribution(dist, Rational(3, 2), 4, idx), InputError);
  EXPECT_THROW(round_distribution(dist, Rational(-1, 2), 4, idx), InputError);
}

TEST(Rounding, ExactModeCapEnforced) {
  const EdgeIndex idx(4);
  const EdgeSet a = fixtures::path_tree(idx, {0, 1, 2, 3});
  const EdgeSet b = fixtures::path_tree(idx, {0, 2, 1, 3});
  TreeDistribution dist{{{a, Rational(1, 1009)}, {b, Rational(1008, 1009)}}};
  EXPECT_THROW(round_distribution(dist, Rational(0), 4, idx, RoundingOptions{1000}), InputError);
  EXPECT_EQ(round_distribution(dist, Rational(0), 4, idx, RoundingOptions{2018}).r, 2018);
}

TEST(Distribution, JsonRoundTrip) {
  const Instance inst = random_metric(4, 7, MetricKind::euclidean);
  const auto sol = solve_relaxation(inst);
  const auto dist = decompose(sol.x, inst.edges(), inst.s(), inst.t());
  const auto back = distribution_from_json(distribution_to_json(dist, inst.edges()), inst.edges());
  ASSERT_EQ(back.blocks.size(), dist.blocks.size());
  for (std::size_t i = 0; i < dist.blocks.size(); ++i) {
    EXPECT_EQ(back.blocks[i].tree, dist.blocks[i].tree);
    EXPECT_EQ(back.blocks[i].weight, dist.blocks[i].weight);
  }
}
