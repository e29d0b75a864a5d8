#include "stpath/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stpath/error.hpp"

namespace stpath {

namespace {

using json = nlohmann::json;

void check_matrix_shape(const CostMatrix& costs, int n) {
  if (n < 2) throw InputError("instance needs at least 2 cities, got " + std::to_string(n));
  if (n > kMaxCities) throw InputError("instance exceeds 64 cities");
  if (costs.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw InputError("non-square matrix: expected " + std::to_string(n * n) + " entries, got " +
                     std::to_string(costs.size()));
  }
}

void check_symmetric_nonnegative(const CostMatrix& costs, int n) {
  for (int u = 0; u < n; ++u) {
    if (costs[u * n + u] != 0) throw InputError("nonzero diagonal entry at city " + std::to_string(u));
    for (int v = 0; v < n; ++v) {
      if (costs[u * n + v] < 0) {
        throw InputError("negative cost c(" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
      if (costs[u * n + v] != costs[v * n + u]) {
        throw InputError("asymmetric cost between " + std::to_string(u) + " and " + std::to_string(v));
      }
    }
  }
}

/// Uniform double in [0,1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

json cost_to_json(const Rational& value) {
  if (is_integral(value) && value.get_num().fits_slong_p()) return json(value.get_num().get_si());
  const double d = value.get_d();
  if (Rational(d) == value) return json(d);
  return json(to_string(value));
}

Rational cost_from_json(const json& node) {
  if (node.is_number_integer()) return Rational(static_cast<long>(node.get<std::int64_t>()));
  if (node.is_number()) return rational_from_double(node.get<double>());
  if (node.is_string()) return parse_rational(node.get<std::string>());
  throw InputError("cost entries must be numbers or rational strings");
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Instance finish(std::string name, int n, const ParseOptions& options, CostMatrix costs, City default_s,
                City default_t) {
  const City s = options.s.value_or(default_s);
  const City t = options.t.value_or(default_t);
  return Instance(std::move(name), n, s, t, std::move(costs));
}

Instance parse_tsplib(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  std::map<std::string, std::string> header;
  std::string line;
  std::vector<std::string> section_tokens;
  std::string section;
  while (std::getline(in, line)) {
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::string key = upper(trimmed);
    if (key == "EOF") break;
    if (key == "NODE_COORD_SECTION" || key == "EDGE_WEIGHT_SECTION") {
      section = key;
      continue;
    }
    if (key == "DISPLAY_DATA_SECTION" || key == "FIXED_EDGES_SECTION" || key == "DEMAND_SECTION") {
      throw InputError("unsupported format: section " + key);
    }
    if (section.empty()) {
      const auto colon = trimmed.find(':');
      if (colon == std::string::npos) throw InputError("malformed TSPLIB header line '" + trimmed + "'");
      header[upper(trim(trimmed.substr(0, colon)))] = trim(trimmed.substr(colon + 1));
      continue;
    }
    std::istringstream tokens(trimmed);
    std::string token;
    while (tokens >> token) section_tokens.push_back(token);
  }

  const std::string name = header.count("NAME") ? header["NAME"] : "tsplib";
  if (!header.count("DIMENSION")) throw InputError("TSPLIB document lacks DIMENSION");
  const int n = std::stoi(header["DIMENSION"]);
  if (n < 2) throw InputError("instance needs at least 2 cities, got " + std::to_string(n));
  if (n > kMaxCities) throw InputError("instance exceeds 64 cities");
  const std::string type = upper(header.count("EDGE_WEIGHT_TYPE") ? header["EDGE_WEIGHT_TYPE"] : "");

  CostMatrix costs(static_cast<std::size_t>(n) * n, Rational(0));
  if (type == "EUC_2D") {
    if (section != "NODE_COORD_SECTION") throw InputError("EUC_2D requires NODE_COORD_SECTION");
    if (section_tokens.size() != static_cast<std::size_t>(3 * n)) {
      throw InputError("NODE_COORD_SECTION must list exactly " + std::to_string(n) + " nodes");
    }
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = std::stod(section_tokens[3 * i + 1]);
      ys[i] = std::stod(section_tokens[3 * i + 2]);
    }
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const double d = std::hypot(xs[u] - xs[v], ys[u] - ys[v]);
        costs[u * n + v] = Rational(static_cast<long>(d + 0.5));
      }
    }
  } else if (type == "EXPLICIT") {
    const std::string format = upper(header.count("EDGE_WEIGHT_FORMAT") ? header["EDGE_WEIGHT_FORMAT"] : "");
    if (section != "EDGE_WEIGHT_SECTION") throw InputError("EXPLICIT requires EDGE_WEIGHT_SECTION");
    std::vector<Rational> values;
    values.reserve(section_tokens.size());
    for (const auto& tok : section_tokens) values.push_back(parse_rational(tok));
    if (format == "FULL_MATRIX") {
      if (values.size() != static_cast<std::size_t>(n) * n) {
        throw InputError("non-square matrix: FULL_MATRIX needs " + std::to_string(n * n) + " entries, got " +
                         std::to_string(values.size()));
      }
      costs = std::move(values);
    } else if (format == "UPPER_ROW") {
      if (values.size() != static_cast<std::size_t>(n) * (n - 1) / 2) {
        throw InputError("UPPER_ROW needs " + std::to_string(n * (n - 1) / 2) + " entries");
      }
      std::size_t k = 0;
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          costs[u * n + v] = values[k];
          costs[v * n + u] = values[k];
          ++k;
        }
      }
    } else {
      throw InputError("unsupported format: EDGE_WEIGHT_FORMAT " + format);
    }
  } else {
    throw InputError("unsupported format: EDGE_WEIGHT_TYPE " + (type.empty() ? std::string("<missing>") : type));
  }
  return finish(name, n, options, std::move(costs), 0, n - 1);
}

Instance parse_native(std::string_view text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON instance: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("costs")) {
    throw InputError("native instance needs fields n and costs");
  }
  const int n = doc.at("n").get<int>();
  if (n < 2) throw InputError("instance needs at least 2 cities, got " + std::to_string(n));
  if (n > kMaxCities) throw InputError("instance exceeds 64 cities");
  const json& tri = doc.at("costs");
  if (!tri.is_array() || tri.size() != static_cast<std::size_t>(n) * (n - 1) / 2) {
    throw InputError("native costs must list the " + std::to_string(n * (n - 1) / 2) + " upper-triangle entries");
  }
  CostMatrix costs(static_cast<std::size_t>(n) * n, Rational(0));
  std::size_t k = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const Rational c = cost_from_json(tri[k++]);
      costs[u * n + v] = c;
      costs[v * n + u] = c;
    }
  }
  const City s = doc.contains("s") ? doc.at("s").get<int>() : 0;
  const City t = doc.contains("t") ? doc.at("t").get<int>() : n - 1;
  return finish(doc.value("name", std::string("instance")), n, options, std::move(costs), s, t);
}

}  // namespace

InstanceFormat parse_instance_format(std::string_view name) {
  if (name == "tsplib") return InstanceFormat::tsplib;
  if (name == "native-json" || name == "json") return InstanceFormat::native_json;
  throw InputError("unknown instance format '" + std::string(name) + "'");
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "graph-metric") return MetricKind::graph_metric;
  if (name == "random-closure") return MetricKind::random_closure;
  throw InputError("unknown metric kind '" + std::string(name) + "'");
}

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::graph_metric: return "graph-metric";
    case MetricKind::random_closure: return "random-closure";
  }
  return "unknown";
}

Instance::Instance(std::string name, int n, City s, City t, CostMatrix costs)
    : name_(std::move(name)), n_(n), s_(s), t_(t) {
  check_matrix_shape(costs, n);
  if (s < 0 || s >= n || t < 0 || t >= n) throw InputError("endpoint out of range");
  if (s == t) throw InputError("endpoints must differ (s = t = " + std::to_string(s) + ")");
  check_symmetric_nonnegative(costs, n);
  for (auto& c : costs) c.canonicalize();
  if (!satisfies_triangle_inequality(costs, n)) {
    raw_ = costs;
    costs = metric_closure(costs, n);
  }
  index_ = EdgeIndex(n);
  edge_cost_.reserve(index_.num_edges());
  for (const Edge& e : index_.edges()) edge_cost_.push_back(costs[e.u * n + e.v]);
  kind_ = std::all_of(edge_cost_.begin(), edge_cost_.end(), [](const Rational& c) { return is_integral(c); })
              ? CostKind::integral
              : CostKind::real;
  edge_cost_d_.reserve(edge_cost_.size());
  for (const auto& c : edge_cost_) edge_cost_d_.push_back(c.get_d());
}

Instance Instance::relabeled(std::span<const City> perm) const {
  if (perm.size() != static_cast<std::size_t>(n_)) throw InputError("permutation size mismatch");
  CostMatrix costs(static_cast<std::size_t>(n_) * n_, Rational(0));
  for (City u = 0; u < n_; ++u) {
    for (City v = 0; v < n_; ++v) costs[perm[u] * n_ + perm[v]] = cost(u, v);
  }
  return Instance(name_, n_, perm[s_], perm[t_], std::move(costs));
}

Rational path_cost(const Instance& inst, std::span<const City> order) {
  Rational total(0);
  for (std::size_t i = 1; i < order.size(); ++i) total += inst.cost(order[i - 1], order[i]);
  return total;
}

bool is_hamiltonian_st_path(const Instance& inst, std::span<const City> order) {
  const int n = inst.size();
  if (order.size() != static_cast<std::size_t>(n)) return false;
  if (order.front() != inst.s() || order.back() != inst.t()) return false;
  VertexSet seen = 0;
  for (City v : order) {
    if (v < 0 || v >= n || contains(seen, v)) return false;
    seen |= singleton(v);
  }
  return true;
}

CostMatrix metric_closure(const CostMatrix& costs, int n) {
  check_matrix_shape(costs, n);
  check_symmetric_nonnegative(costs, n);
  CostMatrix d = costs;
  for (int k = 0; k < n; ++k) {
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        Rational via = d[u * n + k] + d[k * n + v];
        if (via < d[u * n + v]) d[u * n + v] = std::move(via);
      }
    }
  }
  return d;
}

bool satisfies_triangle_inequality(const CostMatrix& costs, int n) {
  for (int k = 0; k < n; ++k) {
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (costs[u * n + v] > costs[u * n + k] + costs[k * n + v]) return false;
      }
    }
  }
  return true;
}

Instance parse_instance(std::string_view text, InstanceFormat format, const ParseOptions& options) {
  switch (format) {
    case InstanceFormat::tsplib: return parse_tsplib(text, options);
    case InstanceFormat::native_json: return parse_native(text, options);
  }
  throw InputError("unknown instance format");
}

std::string to_native_json(const Instance& inst) {
  json doc;
  doc["name"] = inst.name();
  doc["n"] = inst.size();
  doc["s"] = inst.s();
  doc["t"] = inst.t();
  json tri = json::array();
  for (const auto& c : inst.edge_costs()) tri.push_back(cost_to_json(c));
  doc["costs"] = std::move(tri);
  return doc.dump();
}

HamPath brute_force_opt(const Instance& inst, int max_n) {
  const int n = inst.size();
  if (n > max_n) {
    throw InputError("brute force capped at n = " + std::to_string(max_n) + ", instance has " + std::to_string(n));
  }
  const City s = inst.s();
  const City t = inst.t();
  if (n == 2) return HamPath{{s, t}, inst.cost(s, t)};

  // Interior cities (all but s and t) are renumbered 0..m-1.
  std::vector<City> interior;
  for (City v = 0; v < n; ++v) {
    if (v != s && v != t) interior.push_back(v);
  }
  const int m = static_cast<int>(interior.size());
  const std::size_t states = std::size_t{1} << m;
  // best[mask * m + last]: cheapest s-path covering `mask`, ending at interior[last].
  std::vector<std::optional<Rational>> best(states * m);
  std::vector<int> parent(states * m, -1);
  for (int a = 0; a < m; ++a) best[(std::size_t{1} << a) * m + a] = inst.cost(s, interior[a]);
  for (std::size_t mask = 1; mask < states; ++mask) {
    for (int last = 0; last < m; ++last) {
      const auto& here = best[mask * m + last];
      if (!here) continue;
      for (int next = 0; next < m; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t grown = mask | (std::size_t{1} << next);
        Rational candidate = *here + inst.cost(interior[last], interior[next]);
        auto& slot = best[grown * m + next];
        if (!slot || candidate < *slot) {
          slot = std::move(candidate);
          parent[grown * m + next] = last;
        }
      }
    }
  }
  const std::size_t all = states - 1;
  int best_last = -1;
  Rational best_cost;
  for (int last = 0; last < m; ++last) {
    Rational total = *best[all * m + last] + inst.cost(interior[last], t);
    if (best_last < 0 || total < best_cost) {
      best_cost = total;
      best_last = last;
    }
  }
  std::vector<City> order{t};
  std::size_t mask = all;
  for (int last = best_last; last >= 0;) {
    order.push_back(interior[last]);
    const int prev = parent[mask * m + last];
    mask &= ~(std::size_t{1} << last);
    last = prev;
  }
  order.push_back(s);
  std::reverse(order.begin(), order.end());
  return HamPath{std::move(order), best_cost};
}

Instance random_metric(std::uint64_t seed, int n, MetricKind kind) {
  if (n < 2) throw InputError("random_metric needs n >= 2, got " + std::to_string(n));
  if (n > kMaxCities) throw InputError("random_metric supports at most 64 cities");
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n) * 31 +
                      static_cast<std::uint64_t>(kind));
  CostMatrix costs(static_cast<std::size_t>(n) * n, Rational(0));
  switch (kind) {
    case MetricKind::euclidean: {
      std::vector<double> xs(n), ys(n);
      for (int i = 0; i < n; ++i) {
        xs[i] = 1000.0 * unit_double(rng);
        ys[i] = 1000.0 * unit_double(rng);
      }
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          const Rational c = rational_from_double(std::hypot(xs[u] - xs[v], ys[u] - ys[v]));
          costs[u * n + v] = c;
          costs[v * n + u] = c;
        }
      }
      break;
    }
    case MetricKind::graph_metric: {
      std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
      for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(v)));
        adj[u][v] = adj[v][u] = true;
      }
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (unit_double(rng) < 0.25) adj[u][v] = adj[v][u] = true;
        }
      }
      for (int src = 0; src < n; ++src) {
        std::vector<int> dist(n, -1);
        std::vector<int> queue{src};
        dist[src] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
          const int v = queue[head];
          for (int w = 0; w < n; ++w) {
            if (adj[v][w] && dist[w] < 0) {
              dist[w] = dist[v] + 1;
              queue.push_back(w);
            }
          }
        }
        for (int w = 0; w < n; ++w) costs[src * n + w] = Rational(dist[w]);
      }
      break;
    }
    case MetricKind::random_closure: {
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          const Rational c(static_cast<long>(1 + bounded(rng, 100)));
          costs[u * n + v] = c;
          costs[v * n + u] = c;
        }
      }
      break;
    }
  }
  std::string name = to_string(kind) + "-n" + std::to_string(n) + "-seed" + std::to_string(seed);
  return Instance(std::move(name), n, 0, n - 1, std::move(costs));
}

}  // namespace stpath
