#include "gibbscert/temperedness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack for floating comparisons against exp-type bounds.
bool within(double value, double bound) { return value <= bound * (1.0 + 1e-12) + 1e-300; }

std::vector<double> vertex_weights(const Graph& host, const VertexSet& region,
                                   const GrowthFunction& g) {
  std::vector<double> w(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    w[i] = g(static_cast<double>(host.degree(region[i])));
  }
  return w;
}

bool improves(double candidate, const std::optional<double>& best) {
  return !best || candidate > *best;
}

// Max-plus knapsack over rooted subtrees. best[v][k] is the largest weight of a
// connected subset of v's subtree that contains v and has k vertices.
MaxAnimalAverage tree_max_average(const Graph& tree, const std::vector<double>& w,
                                  const VertexSet& host_ids, std::size_t min_vertices) {
  const std::size_t n = tree.num_vertices();
  std::vector<Vertex> order;
  std::vector<Vertex> parent(n, 0);
  std::vector<char> seen(n, 0);
  order.reserve(n);
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex c : tree.neighbors(order[i])) {
      if (!seen[c]) {
        seen[c] = 1;
        parent[c] = order[i];
        order.push_back(c);
      }
    }
  }

  struct Merge {
    Vertex child;
    std::vector<std::uint32_t> take;  // vertices taken from child, per total size
  };
  std::vector<std::vector<double>> best(n);
  std::vector<std::vector<Merge>> merges(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    std::vector<double> cur{kNegInf, w[v]};
    for (Vertex c : tree.neighbors(v)) {
      if (v != 0 && c == parent[v]) continue;
      const auto& child = best[c];
      std::vector<double> next(cur.size() + child.size() - 1, kNegInf);
      Merge m{c, std::vector<std::uint32_t>(next.size(), 0)};
      for (std::size_t k = 1; k < cur.size(); ++k) {
        if (cur[k] > next[k]) {
          next[k] = cur[k];
          m.take[k] = 0;
        }
        for (std::size_t j = 1; j < child.size(); ++j) {
          const double cand = cur[k] + child[j];
          if (cand > next[k + j]) {
            next[k + j] = cand;
            m.take[k + j] = static_cast<std::uint32_t>(j);
          }
        }
      }
      cur = std::move(next);
      merges[v].push_back(std::move(m));
    }
    best[v] = std::move(cur);
  }

  MaxAnimalAverage out;
  out.method = "tree-dp";
  Vertex arg_v = 0;
  std::size_t arg_k = 0;
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t k = std::max<std::size_t>(min_vertices, 1); k < best[v].size(); ++k) {
      if (best[v][k] == kNegInf) continue;
      ++out.animals_examined;
      const double avg = best[v][k] / static_cast<double>(k);
      if (improves(avg, out.value)) {
        out.value = avg;
        arg_v = v;
        arg_k = k;
      }
    }
  }
  if (!out.value) return out;

  std::vector<Vertex> picked;
  std::vector<std::pair<Vertex, std::size_t>> stack{{arg_v, arg_k}};
  while (!stack.empty()) {
    auto [v, k] = stack.back();
    stack.pop_back();
    picked.push_back(host_ids[v]);
    for (auto it = merges[v].rbegin(); it != merges[v].rend(); ++it) {
      const std::size_t j = it->take[k];
      if (j > 0) {
        stack.emplace_back(it->child, j);
        k -= j;
      }
    }
  }
  out.witness = make_vertex_set(std::move(picked));
  return out;
}

}  // namespace

GrowthFunction GrowthFunction::log() {
  return GrowthFunction(Kind::log, "log", [](double t) { return std::log(t); });
}

GrowthFunction GrowthFunction::t_log_t() {
  return GrowthFunction(Kind::t_log_t, "t_log_t", [](double t) { return t * std::log(t); });
}

GrowthFunction GrowthFunction::custom(std::string name, std::function<double(double)> fn) {
  return GrowthFunction(Kind::custom, std::move(name), std::move(fn));
}

double GrowthFunction::operator()(double t) const {
  if (!(t >= 1.0)) {
    throw InvalidInput("growth function argument must be >= 1, got " + std::to_string(t));
  }
  return fn_(t);
}

MonotoneMap MonotoneMap::power(double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent > 0.0)) {
    throw InvalidInput("power map needs positive scale and exponent");
  }
  std::string name = "power(" + std::to_string(scale) + "," + std::to_string(exponent) + ")";
  return MonotoneMap(
      std::move(name), [=](double t) { return scale * std::pow(t, exponent); },
      [=](double y) { return std::max(1.0, std::pow(std::max(y, 0.0) / scale, 1.0 / exponent)); });
}

MonotoneMap MonotoneMap::custom(std::string name, std::function<double(double)> fn) {
  auto inv = [fn](double y) {
    if (fn(1.0) >= y) return 1.0;
    double lo = 1.0;
    double hi = 2.0;
    while (fn(hi) < y) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw InvalidInput("phi^{-1}: value outside the range of phi");
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (fn(mid) >= y ? hi : lo) = mid;
    }
    return hi;
  };
  return MonotoneMap(std::move(name), std::move(fn), std::move(inv));
}

double MonotoneMap::inverse(double y) const { return inv_(y); }

double animal_average(std::span<const Vertex> animal_vertices, const GrowthFunction& g,
                      const Graph& host) {
  if (animal_vertices.empty()) throw InvalidInput("animal must have at least one vertex");
  double sum = 0.0;
  for (Vertex v : animal_vertices) sum += g(static_cast<double>(host.degree(v)));
  return sum / static_cast<double>(animal_vertices.size());
}

MaxAnimalAverage max_animal_average_exhaustive(const Graph& host, const VertexSet& region,
                                               const GrowthFunction& g,
                                               std::size_t min_vertices, const Caps& caps) {
  MaxAnimalAverage out;
  out.method = "exhaustive";
  if (region.size() < min_vertices) return out;
  std::vector<double> weight(host.num_vertices(), 0.0);
  for (Vertex v : region) weight[v] = g(static_cast<double>(host.degree(v)));
  const auto status = enumerate_animals(
      host, region, std::max<std::size_t>(min_vertices, 1), region.size(), caps,
      [&](std::span<const Vertex> a) {
        double sum = 0.0;
        for (Vertex v : a) sum += weight[v];
        const double avg = sum / static_cast<double>(a.size());
        if (improves(avg, out.value)) {
          out.value = avg;
          out.witness.assign(a.begin(), a.end());
        }
      });
  out.animals_examined = status.emitted;
  out.exact = status.complete;
  out.note = status.stop_reason;
  return out;
}

MaxAnimalAverage max_animal_average_greedy(const Graph& host, const VertexSet& region,
                                           const GrowthFunction& g,
                                           std::size_t min_vertices) {
  MaxAnimalAverage out;
  out.method = "greedy";
  out.exact = false;
  if (region.size() < min_vertices || region.empty()) return out;
  std::vector<double> weight(host.num_vertices(), 0.0);
  std::vector<char> in_region(host.num_vertices(), 0);
  for (Vertex v : region) {
    weight[v] = g(static_cast<double>(host.degree(v)));
    in_region[v] = 1;
  }
  // Start from the heaviest vertices (hubs); ties broken by id.
  std::vector<Vertex> starts(region.begin(), region.end());
  std::stable_sort(starts.begin(), starts.end(),
                   [&](Vertex a, Vertex b) { return weight[a] > weight[b]; });
  if (starts.size() > 64) starts.resize(64);

  std::vector<char> in_set(host.num_vertices(), 0);
  for (Vertex s : starts) {
    std::vector<Vertex> members{s};
    std::fill(in_set.begin(), in_set.end(), 0);
    in_set[s] = 1;
    double sum = weight[s];
    while (true) {
      if (members.size() >= std::max<std::size_t>(min_vertices, 1)) {
        ++out.animals_examined;
        const double avg = sum / static_cast<double>(members.size());
        if (improves(avg, out.value)) {
          out.value = avg;
          out.witness = make_vertex_set(members);
        }
      }
      Vertex pick = 0;
      double pick_w = kNegInf;
      for (Vertex m : members) {
        for (Vertex u : host.neighbors(m)) {
          if (in_region[u] && !in_set[u] && (weight[u] > pick_w || (weight[u] == pick_w && u < pick))) {
            pick = u;
            pick_w = weight[u];
          }
        }
      }
      if (pick_w == kNegInf) break;
      in_set[pick] = 1;
      members.push_back(pick);
      sum += pick_w;
    }
  }
  return out;
}

MaxAnimalAverage max_animal_average(const Graph& host, const VertexSet& region,
                                    const GrowthFunction& g, std::size_t min_vertices,
                                    const Caps& caps) {
  if (region.size() < min_vertices || region.empty()) {
    MaxAnimalAverage out;
    out.method = "empty";
    return out;
  }
  const auto sub = induced_subgraph(host, region);
  if (sub.graph.num_edges() + 1 == sub.graph.num_vertices() && sub.graph.is_connected()) {
    return tree_max_average(sub.graph, vertex_weights(host, region, g), region, min_vertices);
  }
  auto out = max_animal_average_exhaustive(host, region, g, min_vertices, caps);
  if (!out.exact) {
    const auto greedy = max_animal_average_greedy(host, region, g, min_vertices);
    if (greedy.value && improves(*greedy.value, out.value)) {
      out.value = greedy.value;
      out.witness = greedy.witness;
      out.method = "exhaustive+greedy";
    }
  }
  return out;
}

std::string to_string(TemperednessVerdict v) {
  switch (v) {
    case TemperednessVerdict::certified_on_window: return "certified-on-window";
    case TemperednessVerdict::failed: return "failed";
    case TemperednessVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

TemperednessReport check_tempered(const Graph& g, const GrowthFunction& gf, Vertex x,
                                  const std::vector<std::size_t>& radii,
                                  std::optional<double> gamma_target, const Caps& caps) {
  if (x >= g.num_vertices()) throw InvalidInput("root " + std::to_string(x) + " not in graph");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) throw InvalidInput("radii must be strictly increasing");
  }
  TemperednessReport report;
  report.root = x;
  report.growth = gf.name();
  report.gamma_target = gamma_target;

  bool all_exact = true;
  std::optional<double> gamma;
  for (std::size_t r : radii) {
    RadiusMaximum row;
    row.radius = r;
    const VertexSet region = ball_vertices(g, x, r);
    row.ball_size = region.size();
    row.maximum = max_animal_average(g, region, gf, r + 1, caps);
    all_exact = all_exact && row.maximum.exact;
    if (row.maximum.value && improves(*row.maximum.value, gamma)) gamma = row.maximum.value;
    report.per_radius.push_back(std::move(row));
  }
  report.gamma = gamma.value_or(0.0);

  if (gamma_target) {
    for (const auto& row : report.per_radius) {
      if (row.maximum.value && *row.maximum.value > *gamma_target + 1e-12) {
        report.verdict = TemperednessVerdict::failed;
        report.witness = row.maximum.witness;
        return report;
      }
    }
  }
  report.verdict = all_exact ? TemperednessVerdict::certified_on_window
                             : TemperednessVerdict::inconclusive;
  return report;
}

RepulsivenessReport check_repulsive(const Graph& g, const RepulsivenessSpec& spec) {
  if (spec.n_star < 1) throw InvalidInput("n_star must be at least 1");
  RepulsivenessReport report;
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> hubs;
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) >= spec.n_star) hubs.push_back(v);
  }
  for (Vertex x : hubs) {
    const auto dist = bfs_distances(g, x);
    for (Vertex y = 0; y < n; ++y) {
      if (y == x) continue;
      const bool y_hub = g.degree(y) >= spec.n_star;
      double m = 0.0;
      if (spec.mode == RepulsionMode::min_degree) {
        if (!y_hub || y < x) continue;
        m = static_cast<double>(std::min(g.degree(x), g.degree(y)));
      } else {
        if (y_hub && y < x) continue;
        m = static_cast<double>(std::max(g.degree(x), g.degree(y)));
      }
      ++report.pairs_checked;
      if (dist[y] == kUnreachable) continue;
      const double required = spec.phi(m);
      if (static_cast<double>(dist[y]) < required) {
        report.holds = false;
        report.violations.push_back(
            RepulsionViolation{std::min(x, y), std::max(x, y), dist[y], required});
      }
    }
  }
  std::sort(report.violations.begin(), report.violations.end(),
            [](const auto& a, const auto& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  return report;
}

std::string to_string(SeriesDiagnostic d) {
  return d == SeriesDiagnostic::converging ? "converging" : "diverging";
}

SummabilityReport check_summability(const GrowthFunction& g, const MonotoneMap& phi,
                                    std::span<const double> t_seq, std::size_t terms,
                                    double tolerance) {
  if (t_seq.size() < terms + 1) {
    throw InvalidInput("t sequence needs at least terms + 1 entries");
  }
  if (!t_seq.empty() && !(t_seq[0] >= 1.0)) throw InvalidInput("t_1 must be >= 1");
  for (std::size_t i = 1; i < t_seq.size(); ++i) {
    if (!(t_seq[i] > t_seq[i - 1])) throw InvalidInput("t sequence must be strictly increasing");
  }
  SummabilityReport report;
  report.terms = terms;
  double prev = 0.0;
  for (std::size_t k = 1; k <= terms; ++k) {
    const double denom = phi(t_seq[k - 1]);
    if (!(denom > 0.0)) throw InvalidInput("phi must be positive on the sequence");
    const double term = g(t_seq[k]) / denom;
    report.partial_sum += term;
    prev = report.last_term;
    report.last_term = term;
  }
  report.gamma = 2.0 * report.partial_sum;
  if (report.last_term == 0.0) {
    report.tail_estimate = 0.0;
  } else if (terms >= 2 && prev > 0.0 && report.last_term < prev) {
    const double ratio = report.last_term / prev;
    report.tail_estimate = report.last_term * ratio / (1.0 - ratio);
  } else {
    report.tail_estimate = kInf;
  }
  report.diagnostic =
      report.tail_estimate <= tolerance * std::max(1.0, std::abs(report.partial_sum))
          ? SeriesDiagnostic::converging
          : SeriesDiagnostic::diverging;
  return report;
}

bool verify_separation_bound(std::span<const Vertex> animal_vertices, double lambda,
                             std::span<const Vertex> b, const Graph& host) {
  if (!(lambda > 1.0)) throw InvalidInput("lambda must exceed 1");
  const VertexSet a = make_vertex_set({animal_vertices.begin(), animal_vertices.end()});
  for (Vertex v : b) {
    if (!contains(a, v)) {
      throw InvalidInput("B not inside the animal: vertex " + std::to_string(v));
    }
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto dist = bfs_distances(host, b[i]);
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      if (b[i] == b[j] || static_cast<double>(dist[b[j]]) < lambda) {
        throw InvalidInput("B not lambda-separated: vertices " + std::to_string(b[i]) +
                           " and " + std::to_string(b[j]));
      }
    }
  }
  const double bound =
      std::max(1.0, (2.0 * static_cast<double>(a.size()) - 1.0) / lambda);
  return static_cast<double>(b.size()) <= bound;
}

NkSelection select_Nk(const Graph& g, Vertex x, const RepulsivenessSpec& spec,
                      std::size_t r_max) {
  NkSelection out;
  if (r_max == 0) return out;
  const auto dist = bfs_distances(g, x, r_max);
  std::vector<std::size_t> layer_max(r_max + 1, 0);
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v] <= r_max) layer_max[dist[v]] = std::max(layer_max[dist[v]], g.degree(v));
  }
  std::size_t running = layer_max[0];
  for (std::size_t r = 1; r <= r_max; ++r) {
    running = std::max(running, layer_max[r]);
    const double limit = spec.phi.inverse(2.0 * static_cast<double>(r) + 1.0);
    if (static_cast<double>(running) <= limit * (1.0 + 1e-12)) out.radii.push_back(r);
  }
  return out;
}

std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::holds: return "holds";
    case BoundStatus::violated: return "violated";
    case BoundStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

CountingReport verify_counting_bounds(const Graph& g, Vertex x, std::size_t n_k,
                                      double gamma, CountedFamily family,
                                      const std::vector<std::size_t>& n_values,
                                      const Caps& caps) {
  CountingReport report;
  report.family = family;
  report.root = x;
  report.n_k = n_k;
  report.gamma = gamma;
  const VertexSet region = ball_vertices(g, x, n_k);
  const std::size_t threshold = family == CountedFamily::simple_paths ? n_k : n_k + 1;

  std::map<std::size_t, std::uint64_t> counts;
  std::size_t hi = 0;
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  for (std::size_t n : n_values) {
    if (n >= threshold) {
      hi = std::max(hi, n);
      lo = std::min(lo, n);
    }
  }
  if (hi > 0) {
    EnumerationStatus status;
    if (family == CountedFamily::simple_paths) {
      status = enumerate_simple_paths(g, region, x, region, hi, caps,
                                      [&](std::span<const Vertex> p) { ++counts[p.size() - 1]; });
    } else {
      status = enumerate_animals(g, region, lo, hi, caps,
                                 [&](std::span<const Vertex> a) { ++counts[a.size()]; });
    }
    report.complete = status.complete;
  }

  bool any_violation = false;
  bool any_open = false;
  for (std::size_t n : n_values) {
    CountRow row;
    row.n = n;
    row.bound = std::exp(gamma * static_cast<double>(n));
    row.provable_bound = family == CountedFamily::simple_paths
                             ? std::exp(gamma * static_cast<double>(n + 1))
                             : row.bound;
    if (n >= threshold) row.count = counts[n];
    const double c = static_cast<double>(row.count);
    if (!within(c, row.bound)) {
      row.status = BoundStatus::violated;
      any_violation = true;
    } else if (n >= threshold && !report.complete) {
      row.status = BoundStatus::inconclusive;
      any_open = true;
    }
    report.rows.push_back(row);
  }
  report.status = any_violation ? BoundStatus::violated
                  : any_open    ? BoundStatus::inconclusive
                                : BoundStatus::holds;
  return report;
}

double randic_index(const Graph& g, Vertex x, double theta) {
  if (!(theta > 0.0)) throw InvalidInput("theta must be positive");
  const double nx = static_cast<double>(g.degree(x));
  double sum = 0.0;
  for (Vertex y : g.neighbors(x)) sum += std::pow(nx * static_cast<double>(g.degree(y)), theta);
  return sum;
}

double log_path_family_majorant(const Graph& g, std::span<const SimplePath> family) {
  double best = kNegInf;
  for (const auto& p : family) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
      s += std::log(static_cast<double>(g.degree(p.vertices[i])));
    }
    best = std::max(best, s);
  }
  return best;
}

}  // namespace gibbscert
