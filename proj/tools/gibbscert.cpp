// Command-line driver. Exit codes: 0 pass, 1 fail with witness,
// 2 inconclusive, 64 usage or configuration error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gibbscert/disorder.hpp"
#include "gibbscert/errors.hpp"
#include "gibbscert/generators.hpp"
#include "gibbscert/gibbs.hpp"
#include "gibbscert/io.hpp"
#include "gibbscert/temperedness.hpp"
#include "gibbscert/uniqueness.hpp"

using namespace gibbscert;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInconclusive = 2;
constexpr int kUsage = 64;

constexpr double kEqualityTolerance = 1e-10;

struct Options {
  std::string graph_file;
  std::string graph_spec;
  std::string output;
  std::uint64_t max_paths = 0;
  std::uint64_t max_configs = 0;
  std::uint64_t max_animals = 0;
  std::int64_t time_limit_ms = -1;
};

struct CapProfile {
  std::uint64_t items;
  std::uint64_t configs;
  std::int64_t time_ms;
};

CapProfile cap_profile() {
  const char* env = std::getenv("GIBBSCERT_CAPS");
  const std::string name = env ? env : "default";
  if (name == "default") return {10'000'000, 1ULL << 24, 0};
  if (name == "quick") return {1'000'000, 1ULL << 20, 10'000};
  if (name == "thorough") return {100'000'000, 1ULL << 28, 0};
  throw InvalidInput("GIBBSCERT_CAPS must be default, quick or thorough, got '" + name + "'");
}

Caps path_caps(const Options& o) {
  const auto p = cap_profile();
  Caps c;
  c.max_items = o.max_paths ? o.max_paths : p.items;
  c.time_limit = std::chrono::milliseconds(o.time_limit_ms >= 0 ? o.time_limit_ms : p.time_ms);
  return c;
}

Caps animal_caps(const Options& o) {
  Caps c = path_caps(o);
  c.max_items = o.max_animals ? o.max_animals : cap_profile().items;
  return c;
}

GibbsCaps gibbs_caps(const Options& o) {
  GibbsCaps c;
  c.max_configurations = o.max_configs ? o.max_configs : cap_profile().configs;
  c.paths = path_caps(o);
  return c;
}

Graph load_graph(const Options& o) {
  if (!o.graph_file.empty() && !o.graph_spec.empty()) {
    throw InvalidInput("--graph and --family are mutually exclusive");
  }
  if (!o.graph_file.empty()) return read_graph_file(o.graph_file);
  if (!o.graph_spec.empty()) return generate_named(o.graph_spec);
  throw InvalidInput("a graph is required: pass --graph FILE or --family SPEC");
}

void check_vertex(const Graph& g, Vertex v, const std::string& field) {
  if (v >= g.num_vertices()) {
    throw InvalidInput(field + ": vertex " + std::to_string(v) + " is not in the graph");
  }
}

/// "1,2,3" or "ball:CENTER:RADIUS".
VertexSet parse_vertices(const Graph& g, const std::string& text, const std::string& field) {
  if (text.rfind("ball:", 0) == 0) {
    const auto rest = text.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw InvalidInput(field + ": expected ball:CENTER:RADIUS");
    Vertex c = 0;
    std::size_t r = 0;
    try {
      c = static_cast<Vertex>(std::stoul(rest.substr(0, colon)));
      r = std::stoul(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput(field + ": expected ball:CENTER:RADIUS, got '" + text + "'");
    }
    check_vertex(g, c, field);
    return ball_vertices(g, c, r);
  }
  std::vector<Vertex> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string tok = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      const auto v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(static_cast<Vertex>(v));
    } catch (const std::exception&) {
      throw InvalidInput(field + ": '" + tok + "' is not a vertex id");
    }
    check_vertex(g, out.back(), field);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return make_vertex_set(out);
}

BoundaryCondition parse_bc(const Volume& vol, const SpinModel& sm, const std::vector<int>& spins,
                           const std::string& field) {
  if (spins.empty()) return BoundaryCondition::uniform(vol, 0);
  if (spins.size() != vol.outer.size()) {
    throw InvalidInput(field + ": expected " + std::to_string(vol.outer.size()) +
                       " spin indices, one per outer boundary vertex");
  }
  BoundaryCondition bc;
  for (int s : spins) {
    if (s < 0 || static_cast<std::size_t>(s) >= sm.size()) {
      throw InvalidInput(field + ": spin index " + std::to_string(s) + " out of range");
    }
    bc.values.push_back(static_cast<Spin>(s));
  }
  return bc;
}

Json resolved_config(const CLI::App& app) {
  Json cfg = Json::object();
  for (const CLI::App* a : {app.get_parent(), &app}) {
    if (!a) continue;
    for (const CLI::Option* opt : a->get_options()) {
      const std::string name = opt->get_name(false, true);
      const std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
      if (key.empty() || key == "help") continue;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (res.size() == 1) {
          cfg[key] = res.front();
        } else {
          cfg[key] = res;
        }
      } else {
        cfg[key] = opt->get_default_str();
      }
    }
  }
  return cfg;
}

struct Emitter {
  const Options& options;
  Json doc;

  void emit(int code) {
    doc["exit_code"] = code;
    const std::string text = doc.dump(2) + "\n";
    if (options.output.empty()) {
      std::cout << text;
    } else {
      write_atomic(options.output, text);
    }
  }
};

Json header(const std::string& command, const CLI::App& sub) {
  return Json{{"command", command}, {"config", resolved_config(sub)}};
}

void add_graph_options(CLI::App* sub, Options& o) {
  sub->add_option("--graph", o.graph_file, "Graph file (edge list or .json)");
  sub->add_option("--family", o.graph_spec, "Named graph: chain:N, cycle:N, grid:AxB, star:K, growing-tree:D, star-chain");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume certificates for Gibbs uniqueness with random interactions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Options o;
  app.add_option("--output,-o", o.output, "Write the JSON report here (atomic)");
  app.add_option("--max-paths", o.max_paths, "Simple-path enumeration cap");
  app.add_option("--max-configs", o.max_configs, "Configuration count cap for exact sums");
  app.add_option("--max-animals", o.max_animals, "Animal enumeration cap");
  app.add_option("--time-limit", o.time_limit_ms, "Wall-clock cap per enumeration in ms");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a graph in edge-list format");
  std::string gen_kind;
  std::string gen_format = "edges";
  std::vector<std::size_t> hubs;
  std::size_t spine = 0;
  double phi_scale = 1.0, phi_exp = 1.0;
  std::size_t n_star = 1;
  std::string rep_mode = "min";
  gen->add_option("kind", gen_kind, "Named graph spec, or repulsive-tree")->required();
  gen->add_option("--format", gen_format, "edges or json")->check(CLI::IsMember({"edges", "json"}));
  gen->add_option("--hubs", hubs, "Hub degrees for repulsive-tree")->delimiter(',');
  gen->add_option("--spine", spine, "Spine length for repulsive-tree");
  gen->add_option("--phi-scale", phi_scale, "phi(t) = scale * t^exponent");
  gen->add_option("--phi-exponent", phi_exp);
  gen->add_option("--n-star", n_star, "Degree threshold n*");
  gen->add_option("--mode", rep_mode)->check(CLI::IsMember({"min", "max"}));

  // check-tempered
  auto* tmp = app.add_subcommand("check-tempered", "Per-radius max animal average of g(degree)");
  add_graph_options(tmp, o);
  Vertex root = 0;
  std::vector<std::size_t> radii{1, 2, 3};
  std::string growth = "log";
  std::optional<double> gamma_target;
  std::string target_family;
  Vertex target_root = 0;
  tmp->add_option("--root", root);
  tmp->add_option("--radii", radii)->delimiter(',');
  tmp->add_option("--growth", growth)->check(CLI::IsMember({"log", "tlogt"}));
  tmp->add_option("--gamma-target", gamma_target);
  tmp->add_option("--target-family", target_family, "Take gamma_target from this named graph");
  tmp->add_option("--target-root", target_root);

  // check-repulsive
  auto* rep = app.add_subcommand("check-repulsive", "Check rho(x,y) >= phi(m(x,y)) for hubs");
  add_graph_options(rep, o);
  rep->add_option("--phi-scale", phi_scale);
  rep->add_option("--phi-exponent", phi_exp);
  rep->add_option("--n-star", n_star);
  rep->add_option("--mode", rep_mode)->check(CLI::IsMember({"min", "max"}));

  // kappa / beta-star
  std::string dist_text = "constant:1";
  double beta = 0.0;
  double gamma = 0.0;
  double tol = 1e-12;
  auto* kap = app.add_subcommand("kappa", "kappa(beta) = E[exp(4 beta ||W||)] - 1");
  kap->add_option("--dist", dist_text, "family:param, e.g. exponential:8");
  kap->add_option("--beta", beta)->required();
  kap->add_option("--gamma", gamma, "Also report kappa e^gamma");
  auto* bst = app.add_subcommand("beta-star", "Solve kappa(beta) = e^{-gamma}");
  bst->add_option("--dist", dist_text);
  bst->add_option("--gamma", gamma)->required();
  bst->add_option("--tol", tol);

  // Gibbs commands
  std::string model_text = "ising";
  std::string sign_text = "all_positive";
  std::optional<std::uint64_t> seed;
  std::string delta_text, lambda_text;
  std::vector<Vertex> zs;
  std::string strategy_text = "automatic";
  std::vector<int> xi_spins, eta_spins, bc_spins;
  std::string method_text = "automatic";
  std::string disorder_file;
  auto add_gibbs = [&](CLI::App* sub, bool replay) {
    add_graph_options(sub, o);
    sub->add_option("--model", model_text, "ising, spin_one, potts:Q, grid:LO:HI:N");
    sub->add_option("--dist", dist_text);
    sub->add_option("--sign-mode", sign_text)->check(CLI::IsMember({"all_positive", "rademacher"}));
    sub->add_option("--beta", beta)->required();
    if (replay) {
      sub->add_option("--seed", seed, "Disorder seed (required unless --disorder is given)");
      sub->add_option("--disorder", disorder_file, "Replay a disorder sample JSON file");
    } else {
      sub->add_option("--seed", seed, "Disorder seed (required)")->required();
    }
  };
  auto* l27 = app.add_subcommand("verify-lemma27", "Boundary sensitivity versus the path sum Q");
  add_gibbs(l27, true);
  l27->add_option("--delta", delta_text, "Vertex list or ball:CENTER:RADIUS")->required();
  l27->add_option("--z", zs, "Interior vertices (default: all)")->delimiter(',');
  l27->add_option("--strategy", strategy_text)->check(CLI::IsMember({"automatic", "exhaustive", "ascent"}));

  auto* exp = app.add_subcommand("verify-expansion", "Edge-subset expansion identity");
  add_gibbs(exp, true);
  exp->add_option("--delta", delta_text)->required();
  exp->add_option("--z", zs)->delimiter(',');
  exp->add_option("--xi", xi_spins, "Spin indices on the outer boundary")->delimiter(',');
  exp->add_option("--eta", eta_spins)->delimiter(',');
  exp->add_option("--method", method_text)->check(CLI::IsMember({"automatic", "pairwise", "factorized"}));

  auto* dlr = app.add_subcommand("dlr-check", "Consistency and properness of the local kernels");
  add_gibbs(dlr, true);
  dlr->add_option("--delta", delta_text)->required();
  dlr->add_option("--lambda", lambda_text)->required();
  dlr->add_option("--bc", bc_spins, "Spin indices on the outer boundary of delta")->delimiter(',');

  auto* cert = app.add_subcommand("certificate", "kappa e^gamma < 1 and the tail bounds");
  std::optional<double> gamma_opt;
  cert->add_option("--gamma", gamma_opt);
  add_graph_options(cert, o);
  cert->add_option("--root", root, "Root for gamma from check-tempered");
  cert->add_option("--dist", dist_text);
  cert->add_option("--beta", beta)->required();
  cert->add_option("--radii", radii)->delimiter(',');

  auto* dec = app.add_subcommand("decay", "Quenched decay experiment");
  add_gibbs(dec, false);
  std::size_t samples = 100;
  std::string csv_path;
  Vertex z0 = 0;
  dec->add_option("--z", z0)->required();
  dec->add_option("--radii", radii)->delimiter(',');
  dec->add_option("--gamma", gamma)->required();
  dec->add_option("--samples", samples);
  dec->add_option("--csv", csv_path, "Write the decay table as CSV");
  dec->add_option("--strategy", strategy_text)->check(CLI::IsMember({"automatic", "exhaustive", "ascent"}));

  auto* smp = app.add_subcommand("sample-disorder", "Write one disorder sample as edge-annotated JSON");
  add_graph_options(smp, o);
  smp->add_option("--dist", dist_text);
  smp->add_option("--sign-mode", sign_text)->check(CLI::IsMember({"all_positive", "rademacher"}));
  smp->add_option("--seed", seed, "Disorder seed (required)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Emitter out{o, {}};
  try {
    if (gen->parsed()) {
      Graph g;
      if (gen_kind == "repulsive-tree") {
        RepulsiveTreeSpec spec;
        spec.hub_degrees = hubs;
        spec.spine_length = spine;
        spec.repulsion = {MonotoneMap::power(phi_scale, phi_exp), n_star,
                          rep_mode == "min" ? RepulsionMode::min_degree : RepulsionMode::max_degree};
        g = repulsive_tree(spec);
      } else {
        g = generate_named(gen_kind);
      }
      const std::string text = gen_format == "json" ? graph_to_json(g).dump() + "\n" : write_edge_list(g);
      if (o.output.empty()) {
        std::cout << text;
      } else {
        write_atomic(o.output, text);
      }
      return kPass;
    }

    if (kap->parsed()) {
      const auto d = parse_distribution(dist_text);
      out.doc = header("kappa", *kap);
      out.doc["distribution"] = distribution_to_json(d);
      const double k = mean_kappa(d, beta);
      out.doc["result"] = Json{{"kappa", k}, {"product", k * std::exp(gamma)}};
      out.emit(kPass);
      return kPass;
    }

    if (bst->parsed()) {
      const auto d = parse_distribution(dist_text);
      out.doc = header("beta-star", *bst);
      out.doc["distribution"] = distribution_to_json(d);
      out.doc["result"] = to_json(beta_star(d, gamma, tol));
      out.emit(kPass);
      return kPass;
    }

    if (rep->parsed()) {
      const Graph g = load_graph(o);
      RepulsivenessSpec spec{MonotoneMap::power(phi_scale, phi_exp), n_star,
                             rep_mode == "min" ? RepulsionMode::min_degree : RepulsionMode::max_degree};
      const auto r = check_repulsive(g, spec);
      out.doc = header("check-repulsive", *rep);
      out.doc["graph_hash"] = graph_hash(g);
      out.doc["result"] = to_json(r);
      const int code = r.holds ? kPass : kFail;
      out.emit(code);
      return code;
    }

    if (tmp->parsed()) {
      const Graph g = load_graph(o);
      check_vertex(g, root, "--root");
      const auto gf = growth == "log" ? GrowthFunction::log() : GrowthFunction::t_log_t();
      std::optional<double> target = gamma_target;
      Json target_info;
      if (!target_family.empty()) {
        if (target) throw InvalidInput("--gamma-target and --target-family are mutually exclusive");
        const Graph tg = generate_named(target_family);
        check_vertex(tg, target_root, "--target-root");
        const auto tr = check_tempered(tg, gf, target_root, radii, std::nullopt, animal_caps(o));
        target = tr.gamma;
        target_info = Json{{"family", target_family}, {"root", target_root}, {"gamma", tr.gamma}};
      }
      const auto r = check_tempered(g, gf, root, radii, target, animal_caps(o));
      out.doc = header("check-tempered", *tmp);
      out.doc["graph_hash"] = graph_hash(g);
      if (!target_info.is_null()) out.doc["gamma_target_source"] = target_info;
      out.doc["result"] = to_json(r);
      const int code = r.verdict == TemperednessVerdict::failed       ? kFail
                       : r.verdict == TemperednessVerdict::inconclusive ? kInconclusive
                                                                        : kPass;
      out.emit(code);
      return code;
    }

    if (cert->parsed()) {
      const auto d = parse_distribution(dist_text);
      out.doc = header("certificate", *cert);
      out.doc["distribution"] = distribution_to_json(d);
      double gam = 0.0;
      if (gamma_opt) {
        if (!o.graph_file.empty() || !o.graph_spec.empty()) {
          throw InvalidInput("--gamma and a graph source are mutually exclusive");
        }
        gam = *gamma_opt;
        out.doc["gamma_source"] = "given";
      } else {
        const Graph g = load_graph(o);
        check_vertex(g, root, "--root");
        const auto tr = check_tempered(g, GrowthFunction::log(), root, radii, std::nullopt, animal_caps(o));
        gam = tr.gamma;
        out.doc["graph_hash"] = graph_hash(g);
        out.doc["gamma_source"] = to_json(tr);
        if (tr.verdict != TemperednessVerdict::certified_on_window) {
          out.doc["result"] = to_json(certificate(gam, d, beta, radii));
          out.emit(kInconclusive);
          return kInconclusive;
        }
      }
      const auto c = certificate(gam, d, beta, radii);
      out.doc["result"] = to_json(c);
      const int code = c.verdict == RegimeVerdict::certified ? kPass : kFail;
      out.emit(code);
      return code;
    }

    // Remaining commands share graph, model and disorder.
    const Graph g = load_graph(o);
    if (smp->parsed()) {
      const auto w = sample_disorder(parse_distribution(dist_text), g, sign_mode_from_string(sign_text), *seed);
      out.doc = header("sample-disorder", *smp);
      out.doc["graph_hash"] = graph_hash(g);
      out.doc["result"] = disorder_to_json(w, g);
      out.emit(kPass);
      return kPass;
    }
    const SpinModel sm = parse_spin_model(model_text);
    DisorderSample w;
    if (!disorder_file.empty()) {
      if (seed) throw InvalidInput("--seed and --disorder are mutually exclusive");
      Json j;
      try {
        j = Json::parse(read_text_file(disorder_file));
      } catch (const Json::parse_error& e) {
        throw InvalidInput(disorder_file + ": " + e.what());
      }
      w = disorder_from_json(j.contains("result") ? j["result"] : j, g);
    } else {
      if (!seed) throw InvalidInput("--seed is required unless --disorder is given");
      w = sample_disorder(parse_distribution(dist_text), g, sign_mode_from_string(sign_text), *seed);
    }
    const auto& d = w.distribution;
    const SignMode sign = w.sign_mode;
    const GibbsCaps caps = gibbs_caps(o);
    auto base = [&](const std::string& name, const CLI::App& sub) {
      out.doc = header(name, sub);
      out.doc["seed"] = w.seed;
      out.doc["distribution"] = distribution_to_json(d);
      out.doc["sign_mode"] = to_string(sign);
      out.doc["graph_hash"] = graph_hash(g);
      if (!disorder_file.empty()) out.doc["disorder_file"] = disorder_file;
    };

    if (l27->parsed()) {
      const Volume vol = boundaries(g, parse_vertices(g, delta_text, "--delta"));
      const auto strategy = boundary_strategy_from_string(strategy_text);
      std::vector<Lemma27Report> reports;
      if (zs.empty()) {
        reports = verify_lemma27_all(g, vol, sm, w, beta, strategy, caps, w.seed);
      } else {
        for (Vertex z : zs) {
          check_vertex(g, z, "--z");
          reports.push_back(verify_lemma27(g, vol, z, sm, w, beta, strategy, caps, w.seed));
        }
      }
      base("verify-lemma27", *l27);
      Json arr = Json::array();
      int code = kPass;
      for (const auto& r : reports) {
        arr.push_back(to_json(r));
        if (r.status == Lemma27Status::violated) {
          code = kFail;
        } else if (r.status != Lemma27Status::proven && code == kPass) {
          code = kInconclusive;
        }
      }
      out.doc["result"] = arr;
      out.emit(code);
      return code;
    }

    if (exp->parsed()) {
      const Volume vol = boundaries(g, parse_vertices(g, delta_text, "--delta"));
      std::vector<Vertex> targets = zs.empty() ? std::vector<Vertex>(vol.delta) : zs;
      for (Vertex z : targets) check_vertex(g, z, "--z");
      BoundaryCondition xi = parse_bc(vol, sm, xi_spins, "--xi");
      BoundaryCondition eta = parse_bc(vol, sm, eta_spins, "--eta");
      if (xi_spins.empty()) xi = BoundaryCondition::uniform(vol, static_cast<Spin>(sm.size() - 1));
      ExpansionMethod method = method_text == "pairwise"     ? ExpansionMethod::pairwise
                               : method_text == "factorized" ? ExpansionMethod::factorized
                                                             : ExpansionMethod::automatic;
      const auto r = verify_expansion_identity(g, vol, targets, sm, w, beta, xi, eta, method, caps);
      base("verify-expansion", *exp);
      out.doc["result"] = to_json(r);
      const bool ok = r.max_defect <= kEqualityTolerance && r.gamma_nonnegative && r.gamma_bounded;
      out.emit(ok ? kPass : kFail);
      return ok ? kPass : kFail;
    }

    if (dlr->parsed()) {
      const VertexSet delta = parse_vertices(g, delta_text, "--delta");
      const VertexSet lambda = parse_vertices(g, lambda_text, "--lambda");
      const Volume vol = boundaries(g, delta);
      const BoundaryCondition bc = parse_bc(vol, sm, bc_spins, "--bc");
      const auto r = dlr_consistency_check(g, lambda, delta, sm, w, beta, bc, {}, caps);
      base("dlr-check", *dlr);
      out.doc["result"] = to_json(r);
      const bool ok = r.consistency_defect <= kEqualityTolerance &&
                      r.joint_defect <= kEqualityTolerance &&
                      r.properness_defect <= kEqualityTolerance;
      out.emit(ok ? kPass : kFail);
      return ok ? kPass : kFail;
    }

    if (dec->parsed()) {
      check_vertex(g, z0, "--z");
      DecayConfig cfg;
      cfg.radii = radii;
      cfg.gamma = gamma;
      cfg.beta = beta;
      cfg.samples = samples;
      cfg.seed = *seed;
      cfg.sign_mode = sign;
      cfg.strategy = boundary_strategy_from_string(strategy_text);
      const auto t = decay_experiment(g, z0, sm, d, cfg, caps);
      base("decay", *dec);
      out.doc["result"] = to_json(t);
      if (!csv_path.empty()) write_atomic(csv_path, decay_csv(t));
      int code = t.all_within ? kPass : kFail;
      const bool partial = !t.notices.empty() ||
                           std::any_of(t.rows.begin(), t.rows.end(),
                                       [](const DecayRow& r) { return r.mode != "exhaustive"; });
      if (code == kPass && partial) code = kInconclusive;
      out.emit(code);
      return code;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
