#include <algorithm>
#include <numeric>
#include <random>

#include <benchmark/benchmark.h>

#include "stpath/pipeline.hpp"

using namespace stpath;

namespace {

/// Convex combination of `paths` random Hamiltonian 0-(n-1) paths.
struct PathMix {
  std::vector<Block> blocks;
  std::vector<Rational> x;
  std::int64_t r = 0;
};

PathMix path_mix(std::uint64_t seed, int n, int paths) {
  std::mt19937_64 rng(seed);
  const EdgeIndex index(n);
  PathMix mix;
  for (int p = 0; p < paths; ++p) {
    std::vector<City> order(n - 2);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    order.insert(order.begin(), 0);
    order.push_back(n - 1);
    EdgeSet tree;
    for (int a = 0; a + 1 < n; ++a) tree.push_back(index.id(order[a], order[a + 1]));
    std::sort(tree.begin(), tree.end());
    mix.blocks.push_back({tree, 2});
    mix.r += 2;
  }
  mix.x.assign(index.num_edges(), Rational(0));
  for (const auto& b : mix.blocks) {
    for (EdgeId e : b.tree) mix.x[e] += Rational(b.count) / Rational(mix.r);
  }
  return mix;
}

Instance uniform(int n) {
  CostMatrix c(n * n, Rational(1));
  for (int v = 0; v < n; ++v) c[v * n + v] = 0;
  return Instance("uniform", n, 0, n - 1, c);
}

void BM_SolveRelaxation(benchmark::State& state) {
  const Instance inst = random_metric(1, static_cast<int>(state.range(0)), MetricKind::random_closure);
  for (auto _ : state) benchmark::DoNotOptimize(solve_relaxation(inst));
}
BENCHMARK(BM_SolveRelaxation)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

void BM_NarrowCutsFlow(benchmark::State& state) {
  const Instance inst = random_metric(2, static_cast<int>(state.range(0)), MetricKind::euclidean);
  const auto sol = solve_relaxation(inst);
  for (auto _ : state) benchmark::DoNotOptimize(narrow_cuts(sol.x, inst, CutMode::flow));
}
BENCHMARK(BM_NarrowCutsFlow)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PathMix mix = path_mix(3, n, 6);
  const EdgeIndex index(n);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(mix.x, index, 0, n - 1));
}
BENCHMARK(BM_Decompose)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

void BM_Reassemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PathMix mix = path_mix(4, n, 8);
  const EdgeIndex index(n);
  const auto chain = narrow_cuts(mix.x, uniform(n));
  const auto profile = theta_profile(chain, mix.r, Rational(0));
  std::size_t swaps = 0;
  for (auto _ : state) {
    const auto result = reassemble(mix.blocks, chain, profile, index);
    swaps = result.trace.swaps.size();
    benchmark::DoNotOptimize(result);
  }
  state.counters["swaps"] = static_cast<double>(swaps);
}
BENCHMARK(BM_Reassemble)->DenseRange(6, 14, 4)->Unit(benchmark::kMicrosecond);

void BM_MinTJoin(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Instance inst = random_metric(5, 24, MetricKind::euclidean);
  const VertexSet targets = (VertexSet{1} << k) - 1;
  for (auto _ : state) benchmark::DoNotOptimize(min_tjoin(inst, targets));
}
BENCHMARK(BM_MinTJoin)->DenseRange(4, 20, 4)->Unit(benchmark::kMicrosecond);

void BM_Pipeline(benchmark::State& state) {
  const Instance inst = random_metric(6, static_cast<int>(state.range(0)), MetricKind::graph_metric);
  RunConfig config;
  config.max_brute_n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(inst, config));
}
BENCHMARK(BM_Pipeline)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
