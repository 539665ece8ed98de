// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gibbscert/disorder.hpp"
#include "gibbscert/enumerate.hpp"
#include "gibbscert/generators.hpp"
#include "gibbscert/gibbs.hpp"
#include "gibbscert/temperedness.hpp"
#include "gibbscert/uniqueness.hpp"

using namespace gibbscert;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& run) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = run();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) {
    out.pass = false;
    out.detail += "; over time limit " + std::to_string(static_cast<int>(limit_s)) + " s";
  }
  if (!out.pass) ++failures;
  std::printf("%s C%d %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Host {
  std::string name;
  Graph g;
};

std::vector<Host> suite_hosts() {
  return {{"P5", chain(5)}, {"C6", cycle(6)}, {"grid3x3", grid(3, 3)}, {"star-chain", star_chain()}};
}

// Distinct balls of radius 1 and 2 with a nonempty interior.
std::vector<Volume> suite_volumes(const Graph& g) {
  std::set<VertexSet> seen;
  std::vector<Volume> out;
  for (Vertex c = 0; c < g.num_vertices(); ++c) {
    for (std::size_t r : {1u, 2u}) {
      VertexSet delta = ball_vertices(g, c, r);
      if (!seen.insert(delta).second) continue;
      Volume vol = boundaries(g, delta);
      if (!vol.interior.empty()) out.push_back(std::move(vol));
    }
  }
  return out;
}

struct SuiteStats {
  std::size_t instances = 0;
  std::size_t z_checks = 0;
  std::size_t violations = 0;
  std::size_t not_proven = 0;
  double worst_margin = -1e300;  // max of lhs - rhs
  std::size_t expansions = 0;
  std::size_t expansion_failures = 0;
  double worst_expansion = 0.0;
  std::size_t degeneracy_checks = 0;
  double worst_tilt = 0.0;
  double worst_norm = 0.0;
  double worst_beta0 = 0.0;
  double seconds_c1 = 0.0;
};

SuiteStats run_suite() {
  SuiteStats st;
  const std::vector<SpinModel> models{SpinModel::ising(), SpinModel::spin_one()};
  const std::vector<NormDistribution> dists{NormDistribution::constant(1.0), NormDistribution::exponential(8.0)};
  const double betas[] = {0.1, 0.3, 0.7};
  GibbsCaps caps;
  std::uint64_t seed_counter = 0;
  for (const auto& host : suite_hosts()) {
    for (const Volume& vol : suite_volumes(host.g)) {
      std::vector<std::size_t> interior_pos;
      for (Vertex z : vol.interior) interior_pos.push_back(*vol.position(z));
      for (const auto& sm : models) {
        const std::size_t q = sm.size();
        for (const auto& d : dists) {
          for (std::size_t s = 0; s < 50; ++s) {
            const auto w = sample_disorder(d, host.g, SignMode::rademacher, derive_seed(20260101, seed_counter++));
            // Criterion 9 at beta = 0: M = 1/q, gap = 0, Q = 0.
            {
              const LocalSpecification flat(host.g, vol, sm, w, 0.0, true, caps);
              const auto ev = flat.evaluate(BoundaryCondition::uniform(vol, 0));
              for (std::size_t i = 0; i < vol.delta.size(); ++i)
                st.worst_beta0 = std::max(st.worst_beta0, std::abs(ev.expectation(i, sm.observables()) - 1.0 / q));
              for (const auto& gap : boundary_gaps(flat, interior_pos, BoundaryStrategy::exhaustive, caps))
                st.worst_beta0 = std::max(st.worst_beta0, gap.gap);
              for (Vertex z : vol.interior)
                st.worst_beta0 = std::max(st.worst_beta0, compute_Q(host.g, vol, z, 0.0, w).total);
              ++st.degeneracy_checks;
            }
            for (double beta : betas) {
              ++st.instances;
              const auto t0 = Clock::now();
              const auto reports = verify_lemma27_all(host.g, vol, sm, w, beta, BoundaryStrategy::exhaustive, caps);
              st.seconds_c1 += std::chrono::duration<double>(Clock::now() - t0).count();
              for (const auto& r : reports) {
                ++st.z_checks;
                st.worst_margin = std::max(st.worst_margin, r.lhs - r.rhs);
                if (r.lhs > r.rhs + 1e-9) ++st.violations;
                if (r.status != Lemma27Status::proven) ++st.not_proven;
              }
              // Criterion 2 with each witness pair.
              if (vol.interior_edges.size() <= 12) {
                std::map<std::pair<std::vector<Spin>, std::vector<Spin>>, std::vector<Vertex>> by_pair;
                for (const auto& r : reports) by_pair[{r.xi.values, r.eta.values}].push_back(r.z);
                for (const auto& [pair, zs] : by_pair) {
                  const auto e = verify_expansion_identity(host.g, vol, zs, sm, w, beta, BoundaryCondition{pair.first},
                                                           BoundaryCondition{pair.second}, ExpansionMethod::automatic, caps);
                  ++st.expansions;
                  st.worst_expansion = std::max(st.worst_expansion, e.max_defect);
                  if (!(e.max_defect <= 1e-10) || !e.gamma_nonnegative || !e.gamma_bounded) ++st.expansion_failures;
                }
              }
              // Criterion 9: tilt invariance and normalization at the witness boundary.
              const auto& bc = reports.front().xi;
              const auto a = partition(host.g, vol, bc, sm, w, beta, true, caps);
              const auto b = partition(host.g, vol, bc, sm, w, beta, false, caps);
              for (std::size_t i = 0; i < vol.delta.size(); ++i) {
                double row = 0.0;
                for (Spin x = 0; x < q; ++x) {
                  st.worst_tilt = std::max(st.worst_tilt, std::abs(a.marginal(i, x) - b.marginal(i, x)));
                  row += a.marginal(i, x);
                }
                st.worst_norm = std::max(st.worst_norm, std::abs(row - 1.0));
              }
            }
          }
        }
      }
    }
  }
  return st;
}

Outcome criterion3() {
  std::size_t checks = 0;
  double worst = 0.0;
  const Graph p5 = chain(5);
  const Graph g3 = grid(3, 3);
  struct Case {
    const Graph* g;
    VertexSet delta;
    std::vector<VertexSet> lambdas;
  };
  const std::vector<Case> cases{
      {&p5, {1, 2, 3}, {{2}, {1, 2}, {1, 3}, {1, 2, 3}}},
      {&p5, {0, 1, 2, 3, 4}, {{2}, {0, 4}, {1, 2, 3}}},
      {&g3, ball_vertices(g3, 4, 1), {{4}, {1, 4}, {1, 3, 5, 7}}},
      {&g3, {0, 1, 2, 3, 4, 5, 6, 7, 8}, {{4}, {0, 1, 3, 4}, ball_vertices(g3, 4, 1)}},
  };
  for (const auto& c : cases) {
    const Volume vol = boundaries(*c.g, c.delta);
    for (const auto& sm : {SpinModel::ising(), SpinModel::spin_one()}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto w = sample_disorder(NormDistribution::exponential(8.0), *c.g, SignMode::rademacher, seed);
        const LocalSpecification spec(*c.g, vol, sm, w, 0.0);
        const std::uint64_t nbc = std::min<std::uint64_t>(spec.boundary_condition_count(), 16);
        for (double beta : {0.0, 0.5}) {
          for (std::uint64_t k = 0; k < nbc; ++k) {
            for (const auto& lambda : c.lambdas) {
              const auto r = dlr_consistency_check(*c.g, lambda, c.delta, sm, w, beta, spec.boundary_condition(k));
              worst = std::max({worst, r.consistency_defect, r.joint_defect, r.properness_defect});
              ++checks;
            }
          }
        }
      }
    }
  }
  return {worst <= 1e-10, std::to_string(checks) + " nested-volume checks, max defect " + fmt("%.3g", worst)};
}

Outcome criterion4() {
  const double a = beta_star(NormDistribution::exponential(8.0), std::log(2.0), 1e-9).beta;
  const double b = beta_star(NormDistribution::constant(1.0), 0.0, 1e-9).beta;
  const double ea = std::abs(a - 2.0 / 3.0), eb = std::abs(b - std::log(2.0) / 4.0);
  return {ea <= 1e-8 && eb <= 1e-8, "exponential(8): " + fmt("%.10f", a) + " (err " + fmt("%.2g", ea) +
                                        "), constant(1): " + fmt("%.10f", b) + " (err " + fmt("%.2g", eb) + ")"};
}

Outcome criterion5() {
  std::size_t rows = 0, violated = 0, incomplete = 0;
  auto run = [&](const Graph& g, Vertex x, const std::vector<std::size_t>& radii, CountedFamily fam) {
    const auto gf = fam == CountedFamily::simple_paths ? GrowthFunction::log() : GrowthFunction::t_log_t();
    const double gamma = check_tempered(g, gf, x, radii, std::nullopt).gamma;
    std::vector<std::size_t> ns;
    for (std::size_t n = 0; n <= g.num_vertices(); ++n) ns.push_back(n);
    for (std::size_t nk : radii) {
      const auto r = verify_counting_bounds(g, x, nk, gamma, fam, ns);
      rows += r.rows.size();
      if (r.status == BoundStatus::violated) ++violated;
      if (!r.complete) ++incomplete;
    }
  };
  const Graph c20 = cycle(20);
  std::vector<std::size_t> all_r;
  for (std::size_t r = 1; r <= 10; ++r) all_r.push_back(r);
  run(c20, 0, all_r, CountedFamily::simple_paths);
  run(c20, 0, all_r, CountedFamily::animals);
  const Graph g3 = grid(3, 3);
  for (Vertex x = 0; x < 9; ++x) {
    run(g3, x, {2}, CountedFamily::simple_paths);
    run(g3, x, {1, 2}, CountedFamily::animals);
  }
  return {violated == 0 && incomplete == 0,
          std::to_string(rows) + " (N_k, N) rows on C20 and the 3x3 grid, " + std::to_string(violated) +
              " violated windows, " + std::to_string(incomplete) + " incomplete"};
}

Outcome criterion6() {
  const Graph g = grid(3, 3);
  VertexSet all(9);
  for (Vertex i = 0; i < 9; ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> dist;
  for (Vertex v = 0; v < 9; ++v) dist.push_back(bfs_distances(g, v));
  std::size_t animals = 0, checks = 0, violations = 0;
  enumerate_animals(g, all, 1, 7, {}, [&](std::span<const Vertex> a) {
    ++animals;
    const std::size_t n = a.size();
    for (double lambda : {2.0, 3.0}) {
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        VertexSet b;
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1) b.push_back(a[i]);
        bool separated = true;
        for (std::size_t i = 0; i < b.size() && separated; ++i)
          for (std::size_t j = i + 1; j < b.size() && separated; ++j)
            separated = static_cast<double>(dist[b[i]][b[j]]) >= lambda;
        if (!separated) continue;
        ++checks;
        if (!verify_separation_bound(a, lambda, b, g)) ++violations;
      }
    }
  });
  return {violations == 0 && checks > 0, std::to_string(animals) + " animals, " + std::to_string(checks) +
                                             " separated subsets, " + std::to_string(violations) + " violations"};
}

Outcome criterion7() {
  DecayConfig cfg{{1, 2, 3, 4, 5, 6}, std::log(2.0), 0.05, 200, 7, SignMode::all_positive, BoundaryStrategy::exhaustive};
  const auto d = NormDistribution::constant(1.0);
  const auto cert = certificate(cfg.gamma, d, cfg.beta, cfg.radii);
  const auto t = decay_experiment(chain(41), 20, SpinModel::ising(), d, cfg);
  bool ok = cert.verdict == RegimeVerdict::certified && t.rows.size() == 6 && t.strictly_decreasing && t.notices.empty();
  std::string detail = "kappa e^gamma = " + fmt("%.6f", cert.product) + "; means";
  for (const auto& r : t.rows) {
    const bool within = r.bound_a && r.mean <= *r.bound_a + 3 * r.se;
    ok = ok && within;
    detail += " " + fmt("%.3e", r.mean) + (within ? "<=" : ">") + (r.bound_a ? fmt("%.3e", *r.bound_a) : "n/a");
  }
  detail += t.strictly_decreasing ? "; strictly decreasing" : "; NOT strictly decreasing";
  return {ok, detail};
}

Outcome criterion8() {
  const Graph g = growing_tree(5);
  const auto r = check_tempered(g, GrowthFunction::log(), 0, {1, 2, 3, 4}, std::nullopt);
  bool ok = r.per_radius.size() == 4;
  std::string detail = "maxima";
  for (std::size_t i = 0; i < r.per_radius.size(); ++i) {
    const auto& m = r.per_radius[i].maximum;
    ok = ok && m.value && m.exact && m.witness.size() >= r.per_radius[i].radius + 1 &&
         is_animal(g, induced_animal(g, m.witness)) &&
         std::abs(animal_average(m.witness, GrowthFunction::log(), g) - *m.value) <= 1e-12;
    for (Vertex v : m.witness) ok = ok && contains(ball_vertices(g, 0, r.per_radius[i].radius), v);
    if (i > 0) ok = ok && *m.value > *r.per_radius[i - 1].maximum.value;
    detail += " " + fmt("%.6f", m.value.value_or(NAN)) + " (|A|=" + std::to_string(m.witness.size()) + ")";
  }
  return {ok, detail + (ok ? ", strictly increasing with verified witnesses" : "")};
}

}  // namespace

int main() {
  std::printf("gibbscert acceptance suite\n");
  SuiteStats st;
  report(1, "Lemma 27 exhaustive suite", 300, [&] {
    const auto t0 = Clock::now();
    st = run_suite();
    st.seconds_c1 = std::chrono::duration<double>(Clock::now() - t0).count();
    return Outcome{st.violations == 0 && st.not_proven == 0,
                   std::to_string(st.instances) + " instances, " + std::to_string(st.z_checks) +
                       " (instance, z) checks, " + std::to_string(st.violations) + " violations, max lhs-rhs " +
                       fmt("%.3g", st.worst_margin)};
  });
  report(2, "expansion identity", 0, [&] {
    return Outcome{st.expansion_failures == 0 && st.expansions > 0,
                   std::to_string(st.expansions) + " witness-pair expansions, max defect " +
                       fmt("%.3g", st.worst_expansion) + " (run inside C1)"};
  });
  report(3, "DLR consistency and properness", 0, criterion3);
  report(4, "beta_star closed forms", 0, criterion4);
  report(5, "counting bounds", 120, criterion5);
  report(6, "separation bound", 0, criterion6);
  report(7, "decay experiment", 180, criterion7);
  report(8, "non-temperedness witness", 0, criterion8);
  report(9, "tilt invariance, normalization, beta = 0", 0, [&] {
    const double worst = std::max({st.worst_tilt, st.worst_norm, st.worst_beta0});
    return Outcome{worst <= 1e-12 && st.degeneracy_checks > 0,
                   "tilt " + fmt("%.2g", st.worst_tilt) + ", normalization " + fmt("%.2g", st.worst_norm) +
                       ", beta=0 " + fmt("%.2g", st.worst_beta0) + " over " + std::to_string(st.instances) +
                       " instances (run inside C1)"};
  });
  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
