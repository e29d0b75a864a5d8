#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stpath/pipeline.hpp"

namespace {

using namespace stpath;

struct SourceArgs {
  std::string file;
  std::string format;
  std::string random;
  int n = 8;
  std::uint64_t seed = 0;
  std::optional<int> s;
  std::optional<int> t;
};

void add_source(CLI::App* cmd, SourceArgs& src) {
  cmd->add_option("instance", src.file, "Instance file (TSPLIB or native JSON)");
  cmd->add_option("--format", src.format, "Instance format: tsplib or json (default: by extension)");
  cmd->add_option("--random", src.random, "Generate a random metric instead: euclidean, graph-metric, random-closure");
  cmd->add_option("--n", src.n, "Cities for --random")->check(CLI::Range(3, 64));
  cmd->add_option("--seed", src.seed, "Seed for --random");
  cmd->add_option("--s", src.s, "Start city (file input)");
  cmd->add_option("--t", src.t, "End city (file input)");
}

Instance load(const SourceArgs& src) {
  if (!src.random.empty()) {
    if (!src.file.empty()) throw InputError("give either an instance file or --random, not both");
    return random_metric(src.seed, src.n, parse_metric_kind(src.random));
  }
  if (src.file.empty()) throw InputError("no instance given");
  std::optional<InstanceFormat> format;
  if (!src.format.empty()) format = parse_instance_format(src.format);
  return load_instance(src.file, format, ParseOptions{src.s, src.t});
}

struct RunArgs {
  std::string epsilon;
  bool exact = false;
  int max_brute_n = 10;
  int matching_cap = kDefaultMatchingCap;
  int polyhedron_cap = kPolyhedronExhaustiveCap;
  std::string cut_mode = "auto";
  std::int64_t max_r = 2'000'000;
  int threads = 1;
};

void add_run(CLI::App* cmd, RunArgs& run) {
  cmd->add_option("--epsilon", run.epsilon, "Rounding parameter in [0,1], e.g. 1/100 (default n^3/50000)");
  cmd->add_flag("--exact", run.exact, "Rational LP from the start; epsilon defaults to 0");
  cmd->add_option("--max-brute-n", run.max_brute_n, "Largest n for the brute-force optimum (0 disables)");
  cmd->add_option("--matching-cap", run.matching_cap, "Largest T for the matching DP");
  cmd->add_option("--polyhedron-cap", run.polyhedron_cap, "Largest n for exhaustive T-join polyhedron checks");
  cmd->add_option("--cuts", run.cut_mode, "Narrow cut search: auto, exhaustive, flow");
  cmd->add_option("--max-r", run.max_r, "Largest ensemble size");
  cmd->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber);
}

RunConfig to_config(const RunArgs& args) {
  RunConfig config;
  if (!args.epsilon.empty()) {
    config.epsilon = parse_rational(args.epsilon);
  } else if (args.exact) {
    config.epsilon = Rational(0);
  }
  config.exact_lp = args.exact;
  config.max_brute_n = args.max_brute_n;
  config.matching_cap = args.matching_cap;
  config.polyhedron_cap = args.polyhedron_cap;
  config.max_r = args.max_r;
  config.threads = args.threads;
  if (args.cut_mode == "auto") {
    config.cut_mode = CutMode::automatic;
  } else if (args.cut_mode == "exhaustive") {
    config.cut_mode = CutMode::exhaustive;
  } else if (args.cut_mode == "flow") {
    config.cut_mode = CutMode::flow;
  } else {
    throw InputError("unknown cut mode " + args.cut_mode);
  }
  config.validate();
  return config;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string path_text(const HamPath& path) {
  std::string out;
  for (City v : path.order) out += (out.empty() ? "" : " ") + std::to_string(v);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-of-many Christofides for the s-t path TSP with certified reassembly"};
  app.require_subcommand(1);

  SourceArgs src;
  RunArgs run;
  std::string report_path;
  std::string artifact_dir;
  if (const char* env = std::getenv("STPATH_ARTIFACT_DIR")) artifact_dir = env;

  auto* solve = app.add_subcommand("solve", "Run the full pipeline and certify the result");
  add_source(solve, src);
  add_run(solve, run);
  solve->add_option("--report", report_path, "Write the JSON report here (- for stdout)");
  solve->add_option("--artifacts", artifact_dir, "Directory for bundle.json, trace.jsonl and report.json");

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Re-verify an artifact directory from its serialized data");
  verify->add_option("dir", verify_dir, "Artifact directory")->required();

  std::string kind = "euclidean";
  std::uint64_t first_seed = 0;
  std::uint64_t end_seed = 0;
  int batch_n = 8;
  auto* batch = app.add_subcommand("batch", "Run a seed range of random instances");
  add_run(batch, run);
  batch->add_option("--kind", kind, "euclidean, graph-metric or random-closure");
  batch->add_option("--n", batch_n, "Cities")->check(CLI::Range(3, 64));
  batch->add_option("--from", first_seed, "First seed");
  batch->add_option("--to", end_seed, "One past the last seed");
  batch->add_option("--report", report_path, "Write the JSON summary here (- for stdout)");

  int brute_cap = kDefaultBruteForceCap;
  auto* brute = app.add_subcommand("brute", "Exact optimum by dynamic programming");
  add_source(brute, src);
  brute->add_option("--max-n", brute_cap, "Largest n accepted");

  bool lp_exact = false;
  auto* lp = app.add_subcommand("lp", "Solve the path LP relaxation and print x*");
  add_source(lp, src);
  lp->add_flag("--exact", lp_exact, "Rational simplex from the start");
  lp->add_option("--report", report_path, "Write the solution here (- for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const Instance inst = load(src);
      const RunResult result = run_pipeline(inst, to_config(run));
      const std::string report = result.report_json();
      if (!report_path.empty()) emit(report, report_path);
      if (!artifact_dir.empty()) write_artifacts(result, artifact_dir);
      if (report_path != "-") {
        const bool pass = result.certificates.all();
        std::cout << inst.name() << ": n=" << inst.size() << " lp=" << to_double(result.lp.value)
                  << " best=" << to_double(result.best.cost) << " ratio_lp=" << to_double(result.bound.ratio_lp);
        if (result.opt) std::cout << " opt=" << to_double(result.opt->cost);
        std::cout << " r=" << result.ensemble.r << " eps=" << to_string(result.ensemble.epsilon)
                  << " narrow=" << result.chain.ell() << " swaps=" << result.artifacts.trace.swaps.size() << "\n"
                  << "path: " << path_text(result.best) << "\n"
                  << "certificates: " << (pass ? "pass" : "FAIL") << "\n";
      }
      return result.certificates.all() ? 0 : 1;
    }
    if (*verify) {
      const VerifyResult res = verify_artifacts(verify_dir);
      for (const auto& f : res.failures) std::cout << "fail: " << f << "\n";
      std::cout << (res.ok ? "verified" : "verification failed") << "\n";
      return res.ok ? 0 : 1;
    }
    if (*batch) {
      BatchConfig config;
      config.run = to_config(run);
      config.threads = config.run.threads;
      config.run.threads = 1;
      config.kind = parse_metric_kind(kind);
      config.n = batch_n;
      config.first_seed = first_seed;
      config.end_seed = std::max(first_seed, end_seed);
      const BatchResult res = run_batch(config);
      if (!report_path.empty()) emit(res.summary_json(), report_path);
      int failing = 0;
      for (const auto& e : res.entries) {
        if (!e.ok) {
          ++failing;
          std::cout << "seed " << e.seed << " failed: " << e.error << "\n";
        }
      }
      std::cout << res.entries.size() << " runs, " << failing << " failing\n";
      return res.ok() ? 0 : 1;
    }
    if (*brute) {
      const Instance inst = load(src);
      const HamPath opt = brute_force_opt(inst, brute_cap);
      std::cout << "opt=" << to_string(opt.cost) << " (" << to_double(opt.cost) << ")\npath: " << path_text(opt) << "\n";
      return 0;
    }
    if (*lp) {
      const Instance inst = load(src);
      const FractionalSolution sol = solve_relaxation(inst, LpOptions{lp_exact});
      emit(solution_to_json(sol, inst.edges()) + "\n", report_path);
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
