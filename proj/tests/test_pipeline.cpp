#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stpath/pipeline.hpp"
#include "support.hpp"

using namespace stpath;
using json = nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void dump(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// A graph metric whose exact ensemble needs exchanges.
RunResult run_with_swaps() {
  RunConfig config;
  config.epsilon = Rational(0);
  return run_pipeline(random_metric(34, 11, MetricKind::graph_metric), config);
}

}  // namespace

TEST(Pipeline, LineFour) {
  const RunResult res = run_pipeline(fixtures::line_instance(4), RunConfig{});
  EXPECT_EQ(res.best.cost, 3);
  EXPECT_EQ(res.bound.ratio_lp, 1);
  EXPECT_TRUE(res.certificates.all());
  ASSERT_TRUE(res.opt.has_value());
  EXPECT_EQ(res.opt->cost, 3);
}

TEST(Pipeline, EuclideanEightSeedSeven) {
  const Instance inst = random_metric(7, 8, MetricKind::euclidean);
  const RunResult res = run_pipeline(inst, RunConfig{});
  EXPECT_TRUE(res.certificates.all());
  EXPECT_LE(res.bound.ratio_lp, 2 - res.params.beta + res.params.epsilon);
}

TEST(Pipeline, TenCitiesAgainstOpt) {
  RunConfig config;
  config.max_brute_n = 10;
  for (auto kind : {MetricKind::euclidean, MetricKind::graph_metric, MetricKind::random_closure}) {
    const RunResult res = run_pipeline(random_metric(3, 10, kind), config);
    ASSERT_TRUE(res.opt.has_value());
    EXPECT_GE(res.best.cost, res.opt->cost);
    EXPECT_LE(res.lp.value, res.opt->cost);
    EXPECT_TRUE(res.certificates.all());
  }
}

TEST(Pipeline, ExactEnsembleGivesGaoTree) {
  RunConfig config;
  config.epsilon = Rational(0);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const RunResult res = run_pipeline(random_metric(seed, 7, MetricKind::graph_metric), config);
    ASSERT_TRUE(res.certificates.gao_tree.has_value());
    EXPECT_TRUE(*res.certificates.gao_tree);
    EXPECT_TRUE(res.certificates.all());
  }
}

TEST(Pipeline, ReportIsDeterministic) {
  const Instance inst = random_metric(11, 9, MetricKind::random_closure);
  RunConfig config;
  const std::string a = run_pipeline(inst, config).report_json();
  config.threads = 3;
  const std::string b = run_pipeline(inst, config).report_json();
  EXPECT_EQ(a, b);
  const json doc = json::parse(a);
  EXPECT_EQ(doc.at("beta").at("exact"), "3327/7654");
  EXPECT_EQ(doc.at("delta").at("exact"), "63/500");
  EXPECT_TRUE(doc.contains("epsilon"));
  EXPECT_TRUE(doc.at("pass").get<bool>());
}

TEST(Pipeline, BadConfigRejected) {
  RunConfig config;
  config.epsilon = Rational(2);
  EXPECT_THROW(run_pipeline(fixtures::line_instance(4), config), InputError);
  config.epsilon.reset();
  config.threads = 0;
  EXPECT_THROW(run_pipeline(fixtures::line_instance(4), config), InputError);
}

TEST(Pipeline, StageTagged) {
  RunConfig config;
  config.matching_cap = 1;
  // The decomposition of this optimum holds a tree with two odd cities.
  try {
    run_pipeline(random_metric(10, 9, MetricKind::euclidean), config);
    FAIL() << "expected a parity failure";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "parity");
  }
}

TEST(Artifacts, RoundTripAndTamper) {
  const RunResult res = run_with_swaps();
  ASSERT_FALSE(res.artifacts.trace.swaps.empty());
  const auto dir = fixtures::scratch_dir("artifacts");
  write_artifacts(res, dir);
  EXPECT_EQ(slurp(dir / "report.json"), res.report_json());
  const VerifyResult clean = verify_artifacts(dir);
  EXPECT_TRUE(clean.ok) << (clean.failures.empty() ? "" : clean.failures.front());

  const std::string bundle_text = slurp(dir / "bundle.json");
  const std::string trace_text = slurp(dir / "trace.jsonl");

  // One swapped edge in a serialized output tree.
  json bundle = json::parse(bundle_text);
  auto& edges = bundle["ensemble_out"][0]["edges"];
  const int n = res.instance.size();
  bool changed = false;
  for (auto& e : edges) {
    for (int w = 0; w < n && !changed; ++w) {
      const int u = e[0].get<int>();
      if (w == u || w == e[1].get<int>()) continue;
      bool present = false;
      for (const auto& other : edges) {
        if ((other[0] == u && other[1] == w) || (other[0] == w && other[1] == u)) present = true;
      }
      if (!present) {
        e[1] = w;
        changed = true;
      }
    }
    if (changed) break;
  }
  ASSERT_TRUE(changed);
  dump(dir / "bundle.json", bundle.dump(1));
  const VerifyResult tampered = verify_artifacts(dir);
  EXPECT_FALSE(tampered.ok);
  ASSERT_FALSE(tampered.failures.empty());
  dump(dir / "bundle.json", bundle_text);

  // Trace replay mismatch: drop the last exchange.
  std::string shorter = trace_text;
  shorter.pop_back();
  shorter = shorter.substr(0, shorter.rfind('\n') + 1);
  if (shorter.empty() || shorter == "\n") shorter = "";
  dump(dir / "trace.jsonl", shorter);
  const VerifyResult replay = verify_artifacts(dir);
  EXPECT_FALSE(replay.ok);
  bool mentions_trace = false;
  for (const auto& f : replay.failures) mentions_trace = mentions_trace || f.find("trace") != std::string::npos;
  EXPECT_TRUE(mentions_trace);
  dump(dir / "trace.jsonl", trace_text);
  EXPECT_TRUE(verify_artifacts(dir).ok);
}

TEST(Artifacts, MissingDirectory) {
  const VerifyResult res = verify_artifacts(fixtures::scratch_dir("empty"));
  EXPECT_FALSE(res.ok);
}

TEST(Batch, EmptyRange) {
  BatchConfig config;
  config.first_seed = 5;
  config.end_seed = 5;
  const BatchResult res = run_batch(config);
  EXPECT_TRUE(res.entries.empty());
  EXPECT_TRUE(res.ok());
  EXPECT_EQ(json::parse(res.summary_json()).at("runs"), 0);
}

TEST(Batch, RatiosWithinBound) {
  BatchConfig config;
  config.n = 8;
  config.first_seed = 0;
  config.end_seed = 100;
  config.threads = 2;
  const BatchResult res = run_batch(config);
  EXPECT_TRUE(res.ok());
  const Rational eps = resolve_epsilon(config.run, 8);
  const Rational limit = 2 - AnalysisParams{}.beta + eps;
  for (const auto& e : res.entries) EXPECT_LE(e.ratio_lp, limit) << "seed " << e.seed;
  const json doc = json::parse(res.summary_json());
  EXPECT_EQ(doc.at("runs"), 100);
  EXPECT_LE(parse_rational(doc.at("max_ratio_lp").at("exact").get<std::string>()), limit);
}

TEST(Batch, FailingSeedListed) {
  BatchConfig config;
  config.n = 9;
  config.kind = MetricKind::euclidean;
  config.first_seed = 0;
  config.end_seed = 30;
  // Trees with odd cities exceed a matching cap of one.
  config.run.matching_cap = 1;
  const BatchResult res = run_batch(config);
  EXPECT_FALSE(res.ok());
  const json doc = json::parse(res.summary_json());
  std::vector<std::uint64_t> failing;
  for (const auto& e : res.entries) {
    if (!e.ok) failing.push_back(e.seed);
  }
  EXPECT_EQ(doc.at("failing_seeds").get<std::vector<std::uint64_t>>(), failing);
  EXPECT_FALSE(failing.empty());
  EXPECT_LT(failing.size(), res.entries.size());
}

TEST(LoadInstance, ByExtension) {
  const auto dir = fixtures::scratch_dir("load");
  const Instance inst = random_metric(2, 6, MetricKind::euclidean);
  dump(dir / "a.json", to_native_json(inst));
  dump(dir / "b.tsp",
       "NAME: b\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 6 8\nEOF\n");
  EXPECT_EQ(to_native_json(load_instance(dir / "a.json")), to_native_json(inst));
  EXPECT_EQ(load_instance(dir / "b.tsp").cost(0, 2), 10);
  EXPECT_THROW(load_instance(dir / "missing.json"), InputError);
}
