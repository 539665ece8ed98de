#include "gibbscert/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

Json vertex_array(std::span<const Vertex> vs) {
  Json a = Json::array();
  for (Vertex v : vs) a.push_back(v);
  return a;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json bc_json(const BoundaryCondition& bc) {
  Json a = Json::array();
  for (Spin s : bc.values) a.push_back(static_cast<int>(s));
  return a;
}

std::uint64_t parse_unsigned(std::string_view token, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InvalidInput("line " + std::to_string(line) + ": expected a vertex id, got '" +
                       std::string(token) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string write_edge_list(const Graph& g) {
  std::string out = "# graph vertices=" + std::to_string(g.num_vertices()) +
                    " edges=" + std::to_string(g.num_edges()) + "\n";
  for (const Edge& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

Graph parse_edge_list(std::string_view text) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::size_t min_vertices = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto key = line.find("vertices=");
      if (line.find("graph", first) != std::string::npos && key != std::string::npos) {
        std::string_view rest(line);
        rest.remove_prefix(key + 9);
        rest = rest.substr(0, rest.find_first_of(" \t"));
        min_vertices = parse_unsigned(rest, number);
      }
      continue;
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw InvalidInput("line " + std::to_string(number) + ": expected two vertex ids");
    }
    edges.emplace_back(static_cast<Vertex>(parse_unsigned(a, number)),
                       static_cast<Vertex>(parse_unsigned(b, number)));
  }
  return Graph::from_edges(edges, min_vertices);
}

Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("edges") || !j["edges"].is_array()) {
    throw InvalidInput("graph JSON needs an \"edges\" array");
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const auto& e = j["edges"][i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw InvalidInput("edges[" + std::to_string(i) + "] must be a pair of vertex ids");
    }
    edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
  }
  std::size_t n = 0;
  if (j.contains("vertices")) {
    if (!j["vertices"].is_number_unsigned()) throw InvalidInput("\"vertices\" must be a count");
    n = j["vertices"].get<std::size_t>();
  }
  return Graph::from_edges(edges, n);
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return Json{{"vertices", g.num_vertices()}, {"edges", edges}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Graph read_graph_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InvalidInput(path.string() + ": " + e.what());
    }
    return graph_from_json(j);
  }
  return parse_edge_list(text);
}

std::string graph_hash(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : write_edge_list(g)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json distribution_to_json(const NormDistribution& d) {
  return Json{{"family", d.family_name()}, {d.parameter_name(), d.parameter()}};
}

NormDistribution distribution_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw InvalidInput("distribution needs a \"family\" string");
  }
  const std::string family = j["family"];
  auto param = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_number()) {
      throw InvalidInput("distribution family " + family + " needs numeric \"" + name + "\"");
    }
    return j[name].get<double>();
  };
  if (family == "exponential") return NormDistribution::exponential(param("rate"));
  if (family == "uniform") return NormDistribution::uniform(param("upper"));
  if (family == "half_normal") return NormDistribution::half_normal(param("scale"));
  if (family == "constant") return NormDistribution::constant(param("value"));
  throw InvalidInput("unknown distribution family '" + family + "'");
}

Json disorder_to_json(const DisorderSample& w, const Graph& g) {
  if (w.size() != g.num_edges()) throw InvalidInput("disorder sample does not match the graph");
  Json edges = Json::array();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    edges.push_back({{"u", g.edge(e).u}, {"v", g.edge(e).v}, {"norm", w.norms[e]}, {"sign", w.signs[e]}});
  }
  return Json{{"distribution", distribution_to_json(w.distribution)},
              {"sign_mode", to_string(w.sign_mode)},
              {"seed", w.seed},
              {"edges", edges}};
}

DisorderSample disorder_from_json(const Json& j, const Graph& g) {
  if (!j.is_object() || !j.contains("edges") || !j["edges"].is_array()) {
    throw InvalidInput("disorder sample needs an \"edges\" array");
  }
  const auto& edges = j["edges"];
  if (edges.size() != g.num_edges()) {
    throw InvalidInput("disorder sample has " + std::to_string(edges.size()) + " edges, graph has " +
                       std::to_string(g.num_edges()));
  }
  DisorderSample w;
  try {
    w.distribution = distribution_from_json(j.at("distribution"));
    w.sign_mode = sign_mode_from_string(j.at("sign_mode").get<std::string>());
    w.seed = j.at("seed").get<std::uint64_t>();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& row = edges[e];
      const Edge want = g.edge(e);
      if (row.at("u").get<Vertex>() != want.u || row.at("v").get<Vertex>() != want.v) {
        throw InvalidInput("disorder edge " + std::to_string(e) + " does not match graph edge (" +
                           std::to_string(want.u) + "," + std::to_string(want.v) + ")");
      }
      const double norm = row.at("norm").get<double>();
      const int sign = row.at("sign").get<int>();
      if (!(norm >= 0.0) || (sign != 1 && sign != -1)) {
        throw InvalidInput("disorder edge " + std::to_string(e) + " needs norm >= 0 and sign +-1");
      }
      w.norms.push_back(norm);
      w.signs.push_back(sign);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed disorder sample: ") + e.what());
  }
  return w;
}

NormDistribution parse_distribution(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("distribution must look like family:parameter, got '" + std::string(text) + "'");
  }
  const std::string family(text.substr(0, colon));
  const std::string value(text.substr(colon + 1));
  double p = 0.0;
  try {
    std::size_t used = 0;
    p = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw InvalidInput("distribution parameter '" + value + "' is not a number");
  }
  if (family == "exponential") return NormDistribution::exponential(p);
  if (family == "uniform") return NormDistribution::uniform(p);
  if (family == "half_normal" || family == "half-normal") return NormDistribution::half_normal(p);
  if (family == "constant") return NormDistribution::constant(p);
  throw InvalidInput("unknown distribution family '" + family + "'");
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Json to_json(const TemperednessReport& r) {
  Json radii = Json::array();
  for (const auto& pr : r.per_radius) {
    Json row{{"radius", pr.radius},
             {"ball_size", pr.ball_size},
             {"max_average", pr.maximum.value ? Json(*pr.maximum.value) : Json(nullptr)},
             {"witness", vertex_array(pr.maximum.witness)},
             {"exact", pr.maximum.exact},
             {"method", pr.maximum.method},
             {"animals_examined", pr.maximum.animals_examined}};
    if (!pr.maximum.note.empty()) row["note"] = pr.maximum.note;
    radii.push_back(row);
  }
  Json j{{"root", r.root}, {"growth", r.growth}, {"gamma", r.gamma}};
  j["gamma_target"] = r.gamma_target ? Json(*r.gamma_target) : Json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["per_radius"] = radii;
  if (r.witness) j["witness"] = vertex_array(*r.witness);
  return j;
}

Json to_json(const RepulsivenessReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"x", x.x}, {"y", x.y}, {"distance", x.distance}, {"required", x.required}});
  }
  return Json{{"holds", r.holds}, {"pairs_checked", r.pairs_checked}, {"violations", v}};
}

Json to_json(const CountingReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"N", row.n},
                    {"count", row.count},
                    {"bound", row.bound},
                    {"provable_bound", row.provable_bound},
                    {"status", to_string(row.status)}});
  }
  return Json{{"family", r.family == CountedFamily::simple_paths ? "simple_paths" : "animals"},
              {"root", r.root},
              {"N_k", r.n_k},
              {"gamma", r.gamma},
              {"complete", r.complete},
              {"status", to_string(r.status)},
              {"rows", rows}};
}

Json to_json(const BetaStar& b) {
  return Json{{"beta_star", b.beta},
              {"target_kappa", b.target_kappa},
              {"kappa", b.kappa},
              {"iterations", b.iterations}};
}

Json to_json(const QResult& q) {
  Json per = Json::array();
  for (const auto& [x, v] : q.per_target) per.push_back({{"x", x}, {"Q", v}});
  return Json{{"z", q.z},
              {"total", q.total},
              {"paths", q.paths},
              {"exact", q.exact},
              {"per_target", per}};
}

Json to_json(const Lemma27Report& r) {
  return Json{{"z", r.z},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"status", to_string(r.status)},
              {"exhaustive", r.exhaustive},
              {"xi", bc_json(r.xi)},
              {"eta", bc_json(r.eta)},
              {"Q", to_json(r.q)}};
}

Json to_json(const ExpansionReport& r) {
  Json sites = Json::array();
  for (const auto& s : r.sites) {
    sites.push_back({{"z", s.z},
                     {"direct", s.direct},
                     {"expanded", s.expanded},
                     {"defect", s.defect},
                     {"max_disconnected_term", s.max_disconnected_term}});
  }
  return Json{{"method", r.method},
              {"subsets", r.subsets},
              {"max_defect", r.max_defect},
              {"log_scale", r.log_scale},
              {"min_gamma", r.min_gamma},
              {"max_gamma_excess", r.max_gamma_excess},
              {"gamma_nonnegative", r.gamma_nonnegative},
              {"gamma_bounded", r.gamma_bounded},
              {"sites", sites}};
}

Json to_json(const DlrReport& r) {
  return Json{{"consistency_defect", r.consistency_defect},
              {"joint_defect", r.joint_defect},
              {"properness_defect", r.properness_defect},
              {"events", r.events},
              {"inner_kernels", r.inner_kernels}};
}

Json to_json(const UniquenessCertificate& c) {
  Json tails = Json::array();
  for (const auto& t : c.tail_bounds) tails.push_back({{"N_k", t.n_k}, {"bound", t.bound}});
  return Json{{"gamma", c.gamma},
              {"beta", c.beta},
              {"kappa", c.kappa},
              {"product", c.product},
              {"beta_star", finite_or_null(c.beta_star)},
              {"verdict", to_string(c.verdict)},
              {"tail_bounds", tails}};
}

Json to_json(const DecayTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"N_k", r.n_k},
                    {"mean", r.mean},
                    {"se", r.se},
                    {"bound_a", r.bound_a ? Json(*r.bound_a) : Json(nullptr)},
                    {"bound_b", finite_or_null(r.bound_b)},
                    {"mode", r.mode},
                    {"samples", r.samples},
                    {"seed", r.seed},
                    {"within_bound", r.within_bound}});
  }
  return Json{{"rows", rows},
              {"notices", t.notices},
              {"all_within", t.all_within},
              {"strictly_decreasing", t.strictly_decreasing}};
}

std::string decay_csv(const DecayTable& t) {
  std::string out = "N_k,mean,se,bound_a,bound_b,mode,samples,seed\n";
  for (const auto& r : t.rows) {
    out += std::to_string(r.n_k) + "," + format_double(r.mean) + "," + format_double(r.se) + "," +
           (r.bound_a ? format_double(*r.bound_a) : std::string()) + "," +
           format_double(r.bound_b) + "," + r.mode + "," + std::to_string(r.samples) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

}  // namespace gibbscert
