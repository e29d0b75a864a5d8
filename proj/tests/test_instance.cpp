#include <gtest/gtest.h>

#include "stpath/error.hpp"
#include "stpath/instance.hpp"
#include "support.hpp"

using namespace stpath;

TEST(Instance, EucTwoDRoundsToNearestInteger) {
  const std::string text =
      "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 4\nEOF\n";
  const Instance inst = parse_instance(text, InstanceFormat::tsplib);
  EXPECT_EQ(inst.cost(0, 1), 5);
  EXPECT_EQ(inst.cost(1, 2), 3);
  EXPECT_EQ(inst.kind(), CostKind::integral);
  EXPECT_EQ(inst.s(), 0);
  EXPECT_EQ(inst.t(), 2);
}

TEST(Instance, FullMatrixRoundTrips) {
  const std::string text =
      "NAME: m\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
      "EDGE_WEIGHT_SECTION\n0 1 2\n1 0 1\n2 1 0\nEOF\n";
  const Instance inst = parse_instance(text, InstanceFormat::tsplib);
  EXPECT_FALSE(inst.closure_applied());
  EXPECT_EQ(inst.cost(0, 1), 1);
  EXPECT_EQ(inst.cost(0, 2), 2);
  EXPECT_EQ(inst.cost(1, 2), 1);
  EXPECT_EQ(inst.cost(2, 2), 0);
}

TEST(Instance, GeoIsUnsupported) {
  const std::string text = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n";
  try {
    parse_instance(text, InstanceFormat::tsplib);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported format"), std::string::npos);
  }
}

TEST(Instance, NativeJsonRoundTrip) {
  const Instance inst = random_metric(3, 7, MetricKind::random_closure);
  const Instance back = parse_instance(to_native_json(inst), InstanceFormat::native_json);
  ASSERT_EQ(back.size(), inst.size());
  for (EdgeId e = 0; e < inst.edges().num_edges(); ++e) EXPECT_EQ(back.edge_cost(e), inst.edge_cost(e));
  EXPECT_EQ(to_native_json(back), to_native_json(inst));
}

TEST(Instance, EndpointOptions) {
  const std::string text = R"({"n": 3, "costs": [1, 2, 1]})";
  const Instance inst = parse_instance(text, InstanceFormat::native_json, ParseOptions{2, 0});
  EXPECT_EQ(inst.s(), 2);
  EXPECT_EQ(inst.t(), 0);
  EXPECT_THROW(parse_instance(text, InstanceFormat::native_json, ParseOptions{1, 1}), InputError);
}

TEST(MetricClosure, OneRelaxationStep) {
  CostMatrix c{0, 1, 10, 1, 0, 1, 10, 1, 0};
  const CostMatrix d = metric_closure(c, 3);
  EXPECT_EQ(d[0 * 3 + 2], 2);
  EXPECT_EQ(d[2 * 3 + 0], 2);
  const Instance inst("closure", 3, 0, 2, c);
  EXPECT_TRUE(inst.closure_applied());
  EXPECT_EQ(inst.cost(0, 2), 2);
}

TEST(MetricClosure, MetricMatrixUnchanged) {
  CostMatrix c{0, 1, 2, 1, 0, 1, 2, 1, 0};
  EXPECT_EQ(metric_closure(c, 3), c);
}

TEST(MetricClosure, NegativeCostRejected) {
  CostMatrix c{0, -1, 1, -1, 0, 1, 1, 1, 0};
  EXPECT_THROW(metric_closure(c, 3), InputError);
}

TEST(BruteForce, LineMetric) {
  const Instance inst = fixtures::line_instance(4);
  const HamPath opt = brute_force_opt(inst);
  EXPECT_EQ(opt.order, (std::vector<City>{0, 1, 2, 3}));
  EXPECT_EQ(opt.cost, 3);
}

TEST(BruteForce, TwoCities) {
  CostMatrix c{0, 7, 7, 0};
  const Instance inst("pair", 2, 0, 1, c);
  const HamPath opt = brute_force_opt(inst);
  EXPECT_EQ(opt.cost, 7);
  EXPECT_EQ(opt.order, (std::vector<City>{0, 1}));
}

TEST(BruteForce, CapEnforced) {
  const Instance inst = random_metric(1, 13, MetricKind::euclidean);
  EXPECT_THROW(brute_force_opt(inst, 12), InputError);
}

TEST(BruteForce, AgreesWithPermutationEnumeration) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = random_metric(seed, 6, MetricKind::random_closure);
    std::vector<City> mid{1, 2, 3, 4};
    Rational best(-1);
    do {
      std::vector<City> order{0};
      order.insert(order.end(), mid.begin(), mid.end());
      order.push_back(5);
      const Rational c = path_cost(inst, order);
      if (best < 0 || c < best) best = c;
    } while (std::next_permutation(mid.begin(), mid.end()));
    EXPECT_EQ(brute_force_opt(inst).cost, best) << "seed " << seed;
  }
}

class RandomMetricTest : public ::testing::TestWithParam<MetricKind> {};

TEST_P(RandomMetricTest, DeterministicAndMetric) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance a = random_metric(seed, 9, GetParam());
    const Instance b = random_metric(seed, 9, GetParam());
    EXPECT_EQ(to_native_json(a), to_native_json(b));
    CostMatrix full(81, Rational(0));
    for (City u = 0; u < 9; ++u) {
      for (City v = 0; v < 9; ++v) full[u * 9 + v] = a.cost(u, v);
    }
    EXPECT_TRUE(satisfies_triangle_inequality(full, 9));
    if (GetParam() == MetricKind::graph_metric) {
      for (EdgeId e = 0; e < a.edges().num_edges(); ++e) {
        EXPECT_TRUE(is_integral(a.edge_cost(e)));
        EXPECT_GT(a.edge_cost(e), 0);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, RandomMetricTest,
                         ::testing::Values(MetricKind::euclidean, MetricKind::graph_metric,
                                           MetricKind::random_closure));

TEST(Path, HamiltonianCheck) {
  const Instance inst = fixtures::line_instance(4);
  EXPECT_TRUE(is_hamiltonian_st_path(inst, std::vector<City>{0, 2, 1, 3}));
  EXPECT_FALSE(is_hamiltonian_st_path(inst, std::vector<City>{1, 0, 2, 3}));
  EXPECT_FALSE(is_hamiltonian_st_path(inst, std::vector<City>{0, 1, 3}));
  EXPECT_EQ(path_cost(inst, std::vector<City>{0, 2, 1, 3}), 5);
}
