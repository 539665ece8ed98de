#include <cmath>
#include <random>

#include "doctest.h"

#include "gibbscert/enumerate.hpp"
#include "gibbscert/errors.hpp"
#include "gibbscert/generators.hpp"
#include "gibbscert/temperedness.hpp"
#include "oracles.hpp"

using namespace gibbscert;
using doctest::Approx;

namespace {

VertexSet all_vertices(const Graph& g) {
  VertexSet v(g.num_vertices());
  for (Vertex i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

// Max of the degree average by brute force over connected subsets.
std::optional<double> brute_max_average(const Graph& g, const VertexSet& region,
                                        const GrowthFunction& gf, std::size_t min_vertices) {
  std::optional<double> best;
  for (const auto& s : oracle::connected_subsets(g, region)) {
    if (s.size() < min_vertices) continue;
    double sum = 0.0;
    for (Vertex v : s) sum += gf(static_cast<double>(g.degree(v)));
    const double avg = sum / static_cast<double>(s.size());
    if (!best || avg > *best) best = avg;
  }
  return best;
}

Graph random_tree(std::size_t n, std::mt19937_64& rng) { return oracle::random_connected_graph(n, 0, rng); }

// Chain 0..20 with a degree-9 hub at vertex 13.
Graph chain_with_hub() {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < 20; ++i) e.emplace_back(i, i + 1);
  for (Vertex leaf = 21; leaf < 28; ++leaf) e.emplace_back(13, leaf);
  return Graph::from_edges(e);
}

}  // namespace

TEST_CASE("animal_average examples") {
  const Graph s = star(4);
  CHECK(animal_average(all_vertices(s), GrowthFunction::log(), s) == Approx(std::log(4.0) / 5.0).epsilon(1e-12));
  CHECK(animal_average(all_vertices(s), GrowthFunction::log(), s) == Approx(0.2772588722239781));
  const Graph c = cycle(7);
  CHECK(animal_average(VertexSet{1, 2, 3}, GrowthFunction::log(), c) == Approx(std::log(2.0)));
  CHECK(animal_average(VertexSet{1}, GrowthFunction::log(), chain(2)) == 0.0);
}

TEST_CASE("growth functions reject arguments below one") {
  CHECK_THROWS_AS(GrowthFunction::log()(0.5), InvalidInput);
  CHECK(GrowthFunction::t_log_t()(3.0) == Approx(3.0 * std::log(3.0)));
}

TEST_CASE("bounded-degree animal averages never exceed g(max degree)") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = oracle::random_connected_graph(9, trial % 5, rng);
    std::size_t dmax = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) dmax = std::max(dmax, g.degree(v));
    for (const auto& gf : {GrowthFunction::log(), GrowthFunction::t_log_t()}) {
      const double cap = gf(static_cast<double>(dmax));
      enumerate_animals(g, all_vertices(g), 1, g.num_vertices(), {}, [&](std::span<const Vertex> a) {
        CHECK(animal_average(a, gf, g) <= cap + 1e-12);
      });
    }
  }
}

TEST_CASE("check_tempered on P9 gives log 2") {
  const Graph p9 = chain(9);
  const auto r = check_tempered(p9, GrowthFunction::log(), 4, {2, 4}, std::nullopt);
  CHECK(r.gamma == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(r.verdict == TemperednessVerdict::certified_on_window);
  REQUIRE(r.per_radius.size() == 2);
  CHECK(r.per_radius[0].ball_size == 5);
}

TEST_CASE("check_tempered on a single edge is degenerate") {
  const auto r = check_tempered(chain(2), GrowthFunction::log(), 0, {1, 2}, std::nullopt);
  CHECK(r.gamma == 0.0);
}

TEST_CASE("growing tree fails temperedness against a flat target") {
  const Graph g = growing_tree(5);
  const double target = check_tempered(chain(41), GrowthFunction::log(), 20, {1, 2, 3, 4}, std::nullopt).gamma;
  CHECK(target == Approx(std::log(2.0)));
  const auto r = check_tempered(g, GrowthFunction::log(), 0, {1, 2, 3, 4}, target);
  CHECK(r.verdict == TemperednessVerdict::failed);
  REQUIRE(r.witness.has_value());
  CHECK(is_animal(g, induced_animal(g, *r.witness)));
  CHECK(animal_average(*r.witness, GrowthFunction::log(), g) > target);

  const auto full = check_tempered(g, GrowthFunction::log(), 0, {1, 2, 3, 4}, std::nullopt);
  const double expected[] = {1.155245, 1.553652, 1.755295, 1.920218};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& m = full.per_radius[i].maximum;
    REQUIRE(m.value.has_value());
    CHECK(*m.value == Approx(expected[i]).epsilon(1e-6));
    CHECK(animal_average(m.witness, GrowthFunction::log(), g) == Approx(*m.value).epsilon(1e-12));
    CHECK(m.witness.size() >= full.per_radius[i].radius + 1);
    if (i > 0) CHECK(*m.value > *full.per_radius[i - 1].maximum.value);
  }
  const double r1 = (std::log(2.0) + 2.0 * std::log(4.0)) / 3.0;
  CHECK(*full.per_radius[0].maximum.value == Approx(r1).epsilon(1e-12));
  const auto ball2 = ball_vertices(g, 0, 2);
  CHECK(*full.per_radius[1].maximum.value ==
        Approx(*brute_max_average(g, ball2, GrowthFunction::log(), 3)).epsilon(1e-12));
}

TEST_CASE("tree dynamic program agrees with exhaustive search") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph t = random_tree(6 + trial % 9, rng);
    const auto region = all_vertices(t);
    for (const auto& gf : {GrowthFunction::log(), GrowthFunction::t_log_t()}) {
      for (std::size_t min_v : {1u, 2u, 4u}) {
        const auto dp = max_animal_average(t, region, gf, min_v, {});
        const auto ex = max_animal_average_exhaustive(t, region, gf, min_v, {});
        CHECK(dp.method == "tree-dp");
        REQUIRE(dp.value.has_value());
        REQUIRE(ex.value.has_value());
        CHECK(*dp.value == Approx(*ex.value).epsilon(1e-12));
        CHECK(dp.witness.size() >= min_v);
        CHECK(is_animal(t, induced_animal(t, dp.witness)));
        CHECK(animal_average(dp.witness, gf, t) == Approx(*dp.value).epsilon(1e-12));
        const auto greedy = max_animal_average_greedy(t, region, gf, min_v);
        CHECK(*greedy.value <= *dp.value + 1e-12);
      }
    }
  }
}

TEST_CASE("exhaustive maximum matches the subset oracle on general graphs") {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = oracle::random_connected_graph(9, 3 + trial % 4, rng);
    const auto region = ball_vertices(g, 0, 2);
    const auto got = max_animal_average(g, region, GrowthFunction::log(), 3, {});
    const auto want = brute_max_average(g, region, GrowthFunction::log(), 3);
    CHECK(got.value.has_value() == want.has_value());
    if (want) CHECK(*got.value == Approx(*want).epsilon(1e-12));
  }
}

TEST_CASE("capped enumeration is inconclusive with a lower bound") {
  const Graph g = grid(4, 4);
  Caps caps;
  caps.max_items = 50;
  const auto r = check_tempered(g, GrowthFunction::log(), 5, {3}, std::nullopt, caps);
  CHECK(r.verdict == TemperednessVerdict::inconclusive);
  const auto exact = check_tempered(g, GrowthFunction::log(), 5, {3}, std::nullopt);
  CHECK(r.gamma <= exact.gamma + 1e-12);
}

TEST_CASE("repulsiveness examples") {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < 10; ++i) e.emplace_back(i, i + 1);
  Vertex next = 11;
  for (Vertex hub : {0u, 10u})
    for (int k = 0; k < (hub == 0 ? 5 : 5); ++k) e.emplace_back(hub, next++);
  const Graph far = Graph::from_edges(e);
  CHECK(far.degree(0) == 6);
  CHECK(far.degree(10) == 6);
  RepulsivenessSpec spec{MonotoneMap::identity(), 3, RepulsionMode::min_degree};
  CHECK(check_repulsive(far, spec).holds);

  spec.n_star = 7;
  CHECK(check_repulsive(far, spec).holds);

  std::vector<std::pair<Vertex, Vertex>> e2{{0, 1}};
  next = 2;
  for (Vertex hub : {0u, 1u})
    for (int k = 0; k < 5; ++k) e2.emplace_back(hub, next++);
  const Graph near = Graph::from_edges(e2);
  spec.n_star = 5;
  const auto rep = check_repulsive(near, spec);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].distance == 1);
  CHECK(rep.violations[0].required == 6.0);
}

TEST_CASE("repulsive trees pass their own check") {
  RepulsiveTreeSpec spec{{6, 5, 7}, 40, {MonotoneMap::identity(), 4, RepulsionMode::min_degree}};
  const Graph g = repulsive_tree(spec);
  CHECK(check_repulsive(g, spec.repulsion).holds);
  const auto pos = repulsive_hub_positions(spec);
  for (std::size_t i = 0; i < pos.size(); ++i) CHECK(g.degree(pos[i]) == spec.hub_degrees[i]);
  RepulsiveTreeSpec tight{{6, 6, 6}, 10, {MonotoneMap::identity(), 4, RepulsionMode::min_degree}};
  CHECK_THROWS_AS(repulsive_tree(tight), InvalidInput);
}

TEST_CASE("summability examples") {
  std::vector<double> t;
  for (int k = 1; k <= 21; ++k) t.push_back(std::ldexp(1.0, k));
  const auto r = check_summability(GrowthFunction::log(), MonotoneMap::power(1.0, 2.0), t, 20);
  double oracle_sum = 0.0;
  for (int k = 1; k <= 20; ++k) oracle_sum += std::log(std::ldexp(1.0, k + 1)) / std::pow(std::ldexp(1.0, k), 2);
  CHECK(r.partial_sum == Approx(oracle_sum).epsilon(1e-13));
  CHECK(r.partial_sum == Approx(0.5391144737641532).epsilon(1e-12));
  CHECK(r.gamma == Approx(2.0 * oracle_sum));
  CHECK(r.diagnostic == SeriesDiagnostic::converging);

  const auto zero = check_summability(GrowthFunction::custom("zero", [](double) { return 0.0; }),
                                      MonotoneMap::identity(), t, 20);
  CHECK(zero.partial_sum == 0.0);

  std::vector<double> lin;
  for (int k = 1; k <= 201; ++k) lin.push_back(k + 1.0);
  const auto div = check_summability(GrowthFunction::log(), MonotoneMap::identity(), lin, 200);
  CHECK(div.diagnostic == SeriesDiagnostic::diverging);

  const auto bad = MonotoneMap::custom("zero", [](double) { return 0.0; });
  CHECK_THROWS_WITH_AS(check_summability(GrowthFunction::log(), bad, t, 5),
                       "phi must be positive on the sequence", InvalidInput);
}

TEST_CASE("repulsive graphs have gamma below twice the summability sum") {
  // Sparse hubs of degree 5 on a long spine, phi(t) = t^2, t_k = 2^k.
  RepulsiveTreeSpec spec{{5, 5, 5}, 120, {MonotoneMap::power(1.0, 2.0), 3, RepulsionMode::min_degree}};
  const Graph g = repulsive_tree(spec);
  std::vector<double> t;
  for (int k = 1; k <= 31; ++k) t.push_back(std::ldexp(1.0, k));
  const auto s = check_summability(GrowthFunction::log(), spec.repulsion.phi, t, 30);
  const auto radii = select_Nk(g, 60, spec.repulsion, 6);
  REQUIRE_FALSE(radii.empty());
  const auto rep = check_tempered(g, GrowthFunction::log(), 60, radii.radii, std::nullopt);
  CHECK(rep.gamma <= s.gamma + 1e-12);
}

TEST_CASE("separation bound examples") {
  const Graph p5 = chain(5);
  CHECK(verify_separation_bound(all_vertices(p5), 2.0, VertexSet{0, 2, 4}, p5));
  CHECK(verify_separation_bound(all_vertices(p5), 2.0, VertexSet{3}, p5));
  CHECK_THROWS_AS(verify_separation_bound(all_vertices(p5), 2.0, VertexSet{0, 1}, p5), InvalidInput);
  CHECK_THROWS_AS(verify_separation_bound(VertexSet{0, 1}, 2.0, VertexSet{3}, p5), InvalidInput);
  CHECK_THROWS_AS(verify_separation_bound(all_vertices(p5), 1.0, VertexSet{0}, p5), InvalidInput);
}

TEST_CASE("select_Nk examples") {
  const RepulsivenessSpec spec{MonotoneMap::identity(), 1, RepulsionMode::min_degree};
  CHECK(select_Nk(cycle(30), 0, spec, 6).radii == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
  CHECK(select_Nk(cycle(30), 0, spec, 0).empty());
  CHECK(select_Nk(chain_with_hub(), 10, spec, 5).radii == std::vector<std::size_t>{1, 2, 4, 5});
}

TEST_CASE("counting bounds on C20 hold with gamma log 2") {
  const Graph c = cycle(20);
  for (std::size_t nk = 1; nk <= 10; ++nk) {
    std::vector<std::size_t> ns;
    for (std::size_t n = 0; n <= 20; ++n) ns.push_back(n);
    const auto r = verify_counting_bounds(c, 0, nk, std::log(2.0), CountedFamily::simple_paths, ns);
    CHECK(r.status == BoundStatus::holds);
    for (const auto& row : r.rows) {
      if (row.n < nk) CHECK(row.count == 0);
      CHECK(row.count <= 2);
      CHECK(row.provable_bound == Approx(std::exp(std::log(2.0) * (row.n + 1.0))));
    }
  }
}

TEST_CASE("path counts match the bitmask oracle inside balls") {
  const Graph g = grid(3, 3);
  const auto region = ball_vertices(g, 4, 2);
  const auto expected = oracle::path_counts_by_length(g, region, 4);
  std::vector<std::size_t> ns;
  for (std::size_t n = 0; n < expected.size(); ++n) ns.push_back(n);
  const auto r = verify_counting_bounds(g, 4, 2, 100.0, CountedFamily::simple_paths, ns);
  for (const auto& row : r.rows) CHECK(row.count == (row.n >= 2 ? expected[row.n] : 0));
}

TEST_CASE("certified windows satisfy their counting bounds") {
  const Graph g = grid(3, 3);
  const auto paths_gamma = check_tempered(g, GrowthFunction::log(), 4, {2}, std::nullopt).gamma;
  const auto r = verify_counting_bounds(g, 4, 2, paths_gamma, CountedFamily::simple_paths,
                                        {2, 3, 4, 5, 6, 7, 8});
  CHECK(r.status == BoundStatus::holds);
  const auto animals_gamma = check_tempered(g, GrowthFunction::t_log_t(), 4, {2}, std::nullopt).gamma;
  const auto a = verify_counting_bounds(g, 4, 2, animals_gamma, CountedFamily::animals,
                                        {3, 4, 5, 6, 7, 8, 9});
  CHECK(a.status == BoundStatus::holds);
}

TEST_CASE("path family majorant bounds the family size") {
  std::mt19937_64 rng(90);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = oracle::random_connected_graph(9, trial % 6, rng);
    const auto all = all_vertices(g);
    const auto paths = collect_simple_paths(g, all, 0, all, 8).paths;
    if (paths.empty()) continue;
    CHECK(std::log(static_cast<double>(paths.size())) <= log_path_family_majorant(g, paths) + 1e-12);
  }
}

TEST_CASE("Randic index examples") {
  CHECK(randic_index(star(4), 0, 1.0) == Approx(16.0));
  CHECK(randic_index(chain(2), 0, 0.7) == Approx(1.0));
  CHECK(randic_index(cycle(9), 3, 0.5) == Approx(4.0));
}
