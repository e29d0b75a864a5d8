#include "stpath/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace stpath {

namespace {

using json = nlohmann::json;

json rational_json(const Rational& value) { return {{"exact", to_string(value)}, {"approx", value.get_d()}}; }

json blocks_json(std::span<const Block> blocks, const EdgeIndex& index) {
  json out = json::array();
  for (const auto& b : blocks) {
    json edges = json::array();
    for (EdgeId e : b.tree) edges.push_back(json::array({index.endpoints(e).u, index.endpoints(e).v}));
    out.push_back({{"edges", std::move(edges)}, {"count", b.count}});
  }
  return out;
}

std::vector<Block> blocks_from_json(const json& doc, const EdgeIndex& index) {
  std::vector<Block> out;
  for (const auto& entry : doc) {
    Block b;
    for (const auto& e : entry.at("edges")) {
      const City u = e.at(0).get<int>();
      const City v = e.at(1).get<int>();
      if (u == v || u < 0 || v < 0 || u >= index.num_cities() || v >= index.num_cities()) {
        throw InputError("ensemble names an invalid edge");
      }
      b.tree.push_back(index.id(u, v));
    }
    std::sort(b.tree.begin(), b.tree.end());
    b.count = entry.at("count").get<std::int64_t>();
    out.push_back(std::move(b));
  }
  return out;
}

json chain_json(const NarrowCutChain& chain) {
  json levels = json::array();
  json values = json::array();
  for (int i = 0; i < chain.size(); ++i) {
    levels.push_back(members(chain.levels[i]));
    values.push_back(to_string(chain.values[i]));
  }
  return {{"levels", std::move(levels)}, {"values", std::move(values)}};
}

NarrowCutChain chain_from_json(const json& doc, int n) {
  NarrowCutChain chain;
  for (const auto& level : doc.at("levels")) {
    VertexSet set = 0;
    for (const auto& v : level) {
      const int city = v.get<int>();
      if (city < 0 || city >= n) throw InputError("chain names an invalid city");
      set |= singleton(city);
    }
    chain.levels.push_back(set);
  }
  for (const auto& v : doc.at("values")) chain.values.push_back(parse_rational(v.get<std::string>()));
  return chain;
}

template <class Fn>
auto in_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

/// Property (2): one edge at s and t on average, and |x(F) - x*(F)| <= ε.
std::string check_rounding_property(std::span<const Rational> x, std::span<const Rational> xstar,
                                    const Rational& epsilon, const Instance& inst) {
  const EdgeIndex& index = inst.edges();
  if (cut_value<Rational>(x, index, singleton(inst.s())) != 1 ||
      cut_value<Rational>(x, index, singleton(inst.t())) != 1) {
    return "rounded ensemble does not have degree one at s and t";
  }
  const Rational deviation = max_subset_deviation(x, xstar);
  if (deviation > epsilon) return "rounded ensemble deviates from x* by " + to_string(deviation) + " > epsilon";
  return {};
}

/// Blocks cut at r/2 so each segment has a single gamma.
struct Segment {
  const EdgeSet* tree;
  std::int64_t count;
  Rational gamma;
};

std::vector<Segment> gamma_segments(const std::vector<Block>& blocks, const AnalysisParams& params) {
  std::vector<Segment> out;
  std::int64_t first = 1;
  const std::int64_t half = params.r / 2;
  for (const auto& b : blocks) {
    const std::int64_t last = first + b.count - 1;
    const std::int64_t low = std::max<std::int64_t>(0, std::min(last, half) - first + 1);
    if (low > 0) out.push_back({&b.tree, low, params.gamma(first)});
    if (b.count - low > 0) out.push_back({&b.tree, b.count - low, params.gamma(last)});
    first = last + 1;
  }
  return out;
}

/// Runs fn(i) for i in [0, count) on `threads` workers; rethrows the first
/// failure by index.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace

void RunConfig::validate() const {
  if (epsilon && (sgn(*epsilon) < 0 || *epsilon > 1)) throw InputError("epsilon must lie in [0, 1]");
  if (max_brute_n < 0) throw InputError("max-brute-n must be nonnegative");
  if (matching_cap <= 0 || matching_cap > 30) throw InputError("matching cap must lie in [1, 30]");
  if (polyhedron_cap <= 0 || polyhedron_cap > 24) throw InputError("polyhedron cap must lie in [1, 24]");
  if (max_r <= 0) throw InputError("max-r must be positive");
  if (threads <= 0) throw InputError("threads must be positive");
}

Rational resolve_epsilon(const RunConfig& config, int n) {
  if (config.epsilon) return *config.epsilon;
  const Rational automatic(Rational(static_cast<long>(n) * n * n) / Rational(50000));
  return automatic > 1 ? Rational(1) : automatic;
}

bool Certificates::all() const {
  return structure && benefit && tjoin_polyhedron && bound && gao_tree.value_or(true) && half_xstar.value_or(true);
}

RunResult run_pipeline(const Instance& inst, const RunConfig& config) {
  config.validate();
  const int n = inst.size();
  const EdgeIndex& index = inst.edges();
  if (n < 3) throw StageError("input", "instances need at least 3 cities");
  RunResult res(inst);

  res.lp = in_stage("lp", [&] { return solve_relaxation(inst, LpOptions{config.exact_lp}); });
  const auto& xstar = res.lp.x;
  {
    const auto feas = check_feasible(xstar, inst);
    if (!feas.feasible) throw StageError("lp", "returned point violates the LP by " + to_string(feas.worst));
  }
  res.chain = in_stage("cuts", [&] { return narrow_cuts(xstar, inst, config.cut_mode); });
  res.distribution = in_stage("decompose", [&] { return decompose(xstar, index, inst.s(), inst.t()); });
  res.ensemble = in_stage("round", [&] {
    return round_distribution(res.distribution, resolve_epsilon(config, n), n, index, RoundingOptions{config.max_r});
  });
  if (auto msg = check_rounding_property(res.ensemble.x, xstar, res.ensemble.epsilon, inst); !msg.empty()) {
    throw StageError("round", msg);
  }
  res.profile = theta_profile(res.chain, res.ensemble.r, res.ensemble.epsilon);

  auto reassembled = in_stage("reassemble", [&] { return reassemble(res.ensemble.blocks, res.chain, res.profile, index); });
  res.artifacts.ensemble_in = split_at_thresholds(res.ensemble.blocks, res.profile);
  res.artifacts.ensemble_out = std::move(reassembled.blocks);
  res.artifacts.trace = std::move(reassembled.trace);
  res.peak_blocks = reassembled.peak_blocks;
  const auto& out_blocks = res.artifacts.ensemble_out;

  {
    const auto report = verify_structure(res.artifacts.ensemble_in, out_blocks, res.chain, res.profile, index);
    const auto replay = replay_trace(res.artifacts.ensemble_in, res.artifacts.trace, index);
    const bool replay_ok = canonical_blocks(replay) == canonical_blocks(out_blocks);
    res.certificates.structure = report.ok() && replay_ok;
    res.structure_failure = !report.ok() ? report.failure : (replay_ok ? "" : "trace replay mismatch");
  }
  if (sgn(res.ensemble.epsilon) == 0) {
    res.certificates.gao_tree = is_global_gao_tree(out_blocks.front().tree, res.chain, index);
  }

  res.params.epsilon = res.ensemble.epsilon;
  res.params.r = res.ensemble.r;
  const auto& params = res.params;
  res.audits = check_benefit_inequality(out_blocks, res.chain, params, index);
  res.certificates.benefit = std::all_of(res.audits.begin(), res.audits.end(),
                                         [](const CutAudit& a) { return a.pass && a.pi_bound; });

  // One parity-correction candidate per distinct tree.
  std::vector<const EdgeSet*> distinct;
  std::map<EdgeSet, std::size_t> slot;
  auto add_tree = [&](const EdgeSet& tree) {
    if (slot.emplace(tree, distinct.size()).second) distinct.push_back(&tree);
  };
  for (const auto& b : out_blocks) add_tree(b.tree);
  for (const auto& b : res.ensemble.leftover.blocks) add_tree(b.tree);
  std::vector<std::optional<TourCandidate>> candidates(distinct.size());
  in_stage("parity", [&] {
    parallel_for(distinct.size(), config.threads,
                 [&](std::size_t i) { candidates[i] = parity_correct(inst, *distinct[i], config.matching_cap); });
    return 0;
  });
  res.candidates = static_cast<int>(candidates.size());
  for (const auto& c : candidates) {
    if (res.best.order.empty() || c->path.cost < res.best.cost) res.best = c->path;
  }

  // Correction vectors per (tree, gamma) segment.
  BoundInputs bound_in;
  bound_in.lp_value = res.lp.value;
  bound_in.kept = res.ensemble.kept;
  bound_in.leftover = res.ensemble.leftover.total();
  bound_in.best_cost = res.best.cost;
  bound_in.x_cost = 0;
  for (EdgeId e = 0; e < index.num_edges(); ++e) {
    if (sgn(res.ensemble.x[e]) != 0) bound_in.x_cost += inst.edge_cost(e) * res.ensemble.x[e];
  }
  bool polyhedron_ok = true;
  bool exhaustive = true;
  std::map<std::pair<EdgeSet, Rational>, std::pair<Rational, Rational>> seen;
  Rational tree_sum(0), y_sum(0), z_sum(0), path_sum(0);
  in_stage("analysis", [&] {
    for (const auto& seg : gamma_segments(out_blocks, params)) {
      const auto key = std::make_pair(*seg.tree, seg.gamma);
      auto it = seen.find(key);
      const auto& cand = *candidates[slot.at(*seg.tree)];
      if (it == seen.end()) {
        const auto cv = correction_vectors(inst, *seg.tree, seg.gamma, res.chain, params, xstar);
        Rational y_cost(0), z_cost(0);
        for (EdgeId e = 0; e < index.num_edges(); ++e) {
          if (sgn(cv.y[e]) != 0) y_cost += inst.edge_cost(e) * cv.y[e];
          if (sgn(cv.z[e]) != 0) z_cost += inst.edge_cost(e) * cv.z[e];
        }
        const auto check = check_tjoin_polyhedron(
            inst, cv.y, wrong_parity_set(*seg.tree, index, inst.s(), inst.t()), res.chain, config.polyhedron_cap);
        polyhedron_ok = polyhedron_ok && check.ok && cand.join.cost <= y_cost;
        exhaustive = exhaustive && check.exhaustive;
        it = seen.emplace(key, std::make_pair(y_cost, z_cost)).first;
      }
      const Rational count(seg.count);
      tree_sum += count * cand.tree_cost;
      y_sum += count * it->second.first;
      z_sum += count * it->second.second;
      path_sum += count * edge_set_cost(inst, split_tree(*seg.tree, index, inst.s(), inst.t()).path);
    }
    return 0;
  });
  bound_in.leftover_tree_cost = 0;
  for (const auto& b : res.ensemble.leftover.blocks) {
    const auto& cand = *candidates[slot.at(b.tree)];
    bound_in.leftover_tree_cost += b.weight * cand.tree_cost;
    // y = x* for trees lost to rounding.
    polyhedron_ok = polyhedron_ok && cand.join.cost <= res.lp.value;
  }
  const Rational r(res.ensemble.r);
  bound_in.mean_tree_cost = tree_sum / r;
  bound_in.mean_y_cost = y_sum / r;
  bound_in.mean_z_cost = z_sum / r;
  bound_in.mean_path_cost = path_sum / r;
  res.certificates.tjoin_polyhedron = polyhedron_ok;
  res.certificates.tjoin_exhaustive = exhaustive;
  res.bound = bound_report(bound_in, params);
  res.certificates.bound = res.bound.best_within_bound && res.bound.best_within_average;

  const EdgeSet& first = out_blocks.front().tree;
  if (is_global_gao_tree(first, res.chain, index)) {
    std::vector<Rational> half(xstar.size());
    for (std::size_t e = 0; e < xstar.size(); ++e) half[e] = xstar[e] / 2;
    res.certificates.half_xstar =
        check_tjoin_polyhedron(inst, half, wrong_parity_set(first, index, inst.s(), inst.t()), res.chain,
                               config.polyhedron_cap)
            .ok;
  }

  if (config.max_brute_n > 0 && n <= config.max_brute_n) {
    res.opt = in_stage("brute", [&] { return brute_force_opt(inst, config.max_brute_n); });
    if (res.opt->cost < res.lp.value) throw StageError("lp", "LP value exceeds the brute-force optimum");
    if (res.best.cost < res.opt->cost) throw StageError("parity", "tour cheaper than the brute-force optimum");
  }
  return res;
}

std::string RunResult::report_json() const {
  json cuts = json::array();
  for (std::size_t i = 0; i < audits.size(); ++i) {
    const auto& a = audits[i];
    cuts.push_back({{"size", a.size},
                    {"value", rational_json(a.xstar_value)},
                    {"theta", a.theta},
                    {"audit",
                     {{"x_value", rational_json(a.x_value)},
                      {"xi", rational_json(a.xi)},
                      {"pi", rational_json(a.pi)},
                      {"benefit", rational_json(a.benefit)},
                      {"required", rational_json(a.required)},
                      {"pi_bound", a.pi_bound},
                      {"pass", a.pass}}}});
  }
  json certs;
  certs["structure"] = {{"pass", certificates.structure}, {"swaps", artifacts.trace.swaps.size()}};
  if (!structure_failure.empty()) certs["structure"]["failure"] = structure_failure;
  certs["benefit"] = {{"pass", certificates.benefit}, {"cuts", audits.size()}};
  certs["tjoin_polyhedron"] = {{"pass", certificates.tjoin_polyhedron},
                               {"mode", certificates.tjoin_exhaustive ? "exhaustive" : "narrow-cuts-only"}};
  certs["bound"] = {{"pass", certificates.bound},
                    {"bound", rational_json(bound.bound)},
                    {"averaged", rational_json(bound.averaged)},
                    {"mean_y_bound", bound.mean_y_bound},
                    {"z_cost", bound.z_cost_bound},
                    {"kept_x_bound", bound.kept_x_bound}};
  if (certificates.gao_tree) certs["gao_tree"] = {{"pass", *certificates.gao_tree}};
  if (certificates.half_xstar) certs["half_xstar"] = {{"pass", *certificates.half_xstar}};

  json doc;
  doc["instance"] = {{"name", instance.name()}, {"n", instance.size()}, {"s", instance.s()}, {"t", instance.t()}};
  doc["lp_value"] = rational_json(lp.value);
  doc["ell"] = chain.ell();
  doc["cuts"] = std::move(cuts);
  doc["r"] = ensemble.r;
  doc["epsilon"] = rational_json(ensemble.epsilon);
  doc["beta"] = rational_json(params.beta);
  doc["delta"] = rational_json(params.delta);
  doc["num_blocks_peak"] = peak_blocks;
  doc["trees"] = distribution.blocks.size();
  doc["candidates"] = candidates;
  doc["leftover"] = rational_json(ensemble.leftover.total());
  doc["best_cost"] = rational_json(best.cost);
  doc["best_path"] = best.order;
  doc["ratio_lp"] = rational_json(bound.ratio_lp);
  if (opt) {
    doc["opt_cost"] = rational_json(opt->cost);
    doc["ratio_opt"] = rational_json(sgn(opt->cost) > 0 ? Rational(best.cost / opt->cost) : Rational(1));
  }
  doc["certificates"] = std::move(certs);
  doc["pass"] = certificates.all();
  return doc.dump(2) + "\n";
}

void write_artifacts(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const EdgeIndex& index = result.instance.edges();
  json bundle;
  bundle["instance"] = json::parse(to_native_json(result.instance));
  bundle["lp"] = json::parse(solution_to_json(result.lp, index));
  bundle["chain"] = chain_json(result.chain);
  bundle["r"] = result.ensemble.r;
  bundle["epsilon"] = to_string(result.ensemble.epsilon);
  bundle["theta"] = result.profile.theta;
  bundle["ensemble_in"] = blocks_json(result.artifacts.ensemble_in, index);
  bundle["ensemble_out"] = blocks_json(result.artifacts.ensemble_out, index);
  write_file(dir / "bundle.json", bundle.dump(1) + "\n");
  write_file(dir / "trace.jsonl", result.artifacts.trace.to_jsonl());
  write_file(dir / "report.json", result.report_json());
}

VerifyResult verify_artifacts(const std::filesystem::path& dir) {
  VerifyResult out;
  auto fail = [&](std::string msg) { out.failures.push_back(std::move(msg)); };
  try {
    const json bundle = json::parse(read_file(dir / "bundle.json"));
    const ExchangeTrace trace = ExchangeTrace::from_jsonl(read_file(dir / "trace.jsonl"));
    const Instance inst = parse_instance(bundle.at("instance").dump(), InstanceFormat::native_json);
    const EdgeIndex& index = inst.edges();
    const auto sol = solution_from_json(bundle.at("lp").dump(), index);
    const auto feas = check_feasible(sol.x, inst);
    if (!feas.feasible) fail("x* violates the LP by " + to_string(feas.worst));

    const NarrowCutChain chain = chain_from_json(bundle.at("chain"), inst.size());
    try {
      validate_chain(chain, sol.x, inst);
      if (feas.feasible && narrow_cuts(sol.x, inst).levels != chain.levels) {
        fail("stored narrow cuts differ from the recomputed chain");
      }
    } catch (const Error& e) {
      fail(std::string("narrow cut chain: ") + e.what());
    }

    const std::int64_t r = bundle.at("r").get<std::int64_t>();
    const Rational epsilon = parse_rational(bundle.at("epsilon").get<std::string>());
    const ThetaProfile profile = theta_profile(chain, r, epsilon);
    if (profile.theta != bundle.at("theta").get<std::vector<std::int64_t>>()) fail("stored theta values are wrong");

    const auto in = blocks_from_json(bundle.at("ensemble_in"), index);
    const auto outb = blocks_from_json(bundle.at("ensemble_out"), index);
    std::int64_t total = 0;
    for (const auto& b : in) {
      total += b.count;
      if (b.count <= 0 || !is_spanning_tree(b.tree, index)) fail("input ensemble holds an invalid tree");
    }
    if (total != r) fail("input ensemble has " + std::to_string(total) + " trees, expected " + std::to_string(r));
    std::vector<Rational> x(index.num_edges(), Rational(0));
    const auto counts = block_edge_counts(in, index);
    for (EdgeId e = 0; e < index.num_edges(); ++e) x[e] = Rational(counts[e]) / Rational(r);
    if (auto msg = check_rounding_property(x, sol.x, epsilon, inst); !msg.empty()) fail(msg);

    const auto report = verify_structure(in, outb, chain, profile, index);
    if (!report.ok()) fail("structure: " + report.failure);
    try {
      if (canonical_blocks(replay_trace(in, trace, index)) != canonical_blocks(outb)) {
        fail("trace replay does not reproduce the output ensemble");
      }
    } catch (const Error& e) {
      fail(std::string("trace replay: ") + e.what());
    }
    if (report.ok()) {
      AnalysisParams params;
      params.epsilon = epsilon;
      params.r = r;
      for (const auto& a : check_benefit_inequality(outb, chain, params, index)) {
        if (!a.pass || !a.pi_bound) fail("benefit inequality fails at cut " + std::to_string(a.cut));
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("unreadable artifacts: ") + e.what());
  }
  out.ok = out.failures.empty();
  return out;
}

bool BatchResult::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const BatchEntry& e) { return e.ok; });
}

std::string BatchResult::summary_json() const {
  json doc;
  json failing = json::array();
  json runs = json::array();
  Rational max_ratio(0), sum_ratio(0), max_opt(0);
  std::optional<Rational> min_slack;
  int completed = 0;
  for (const auto& e : entries) {
    json run{{"seed", e.seed}, {"ok", e.ok}};
    if (!e.error.empty()) {
      run["error"] = e.error;
    } else {
      ++completed;
      run["ratio_lp"] = rational_json(e.ratio_lp);
      max_ratio = std::max(max_ratio, e.ratio_lp);
      sum_ratio += e.ratio_lp;
      if (e.ratio_opt) {
        run["ratio_opt"] = rational_json(*e.ratio_opt);
        max_opt = std::max(max_opt, *e.ratio_opt);
      }
      if (!min_slack || e.min_benefit_slack < *min_slack) min_slack = e.min_benefit_slack;
    }
    if (!e.ok) failing.push_back(e.seed);
    runs.push_back(std::move(run));
  }
  doc["runs"] = entries.size();
  doc["failing_seeds"] = std::move(failing);
  doc["ok"] = ok();
  if (completed > 0) {
    doc["max_ratio_lp"] = rational_json(max_ratio);
    doc["mean_ratio_lp"] = rational_json(Rational(sum_ratio / Rational(completed)));
    doc["max_ratio_opt"] = rational_json(max_opt);
    doc["min_benefit_slack"] = rational_json(*min_slack);
  }
  doc["entries"] = std::move(runs);
  return doc.dump(2) + "\n";
}

BatchResult run_batch(const BatchConfig& config) {
  config.run.validate();
  if (config.end_seed < config.first_seed) throw InputError("seed range is reversed");
  if (config.threads <= 0) throw InputError("threads must be positive");
  BatchResult result;
  const std::size_t count = config.end_seed - config.first_seed;
  result.entries.resize(count);
  parallel_for(count, config.threads, [&](std::size_t i) {
    BatchEntry& entry = result.entries[i];
    entry.seed = config.first_seed + i;
    try {
      const Instance inst = random_metric(entry.seed, config.n, config.kind);
      const RunResult run = run_pipeline(inst, config.run);
      entry.ok = run.certificates.all();
      entry.ratio_lp = run.bound.ratio_lp;
      if (run.opt) entry.ratio_opt = sgn(run.opt->cost) > 0 ? Rational(run.best.cost / run.opt->cost) : Rational(1);
      bool first = true;
      for (const auto& a : run.audits) {
        const Rational slack = a.benefit - a.required;
        if (first || slack < entry.min_benefit_slack) entry.min_benefit_slack = slack;
        first = false;
      }
      if (!entry.ok) entry.error = "certificate failed";
    } catch (const std::exception& e) {
      entry.ok = false;
      entry.error = e.what();
    }
  });
  return result;
}

Instance load_instance(const std::filesystem::path& path, std::optional<InstanceFormat> format,
                       const ParseOptions& options) {
  if (!format) {
    format = path.extension() == ".json" ? InstanceFormat::native_json : InstanceFormat::tsplib;
  }
  return parse_instance(read_file(path), *format, options);
}

}  // namespace stpath
