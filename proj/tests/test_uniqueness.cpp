#include <cmath>
#include <limits>
#include <map>

#include "doctest.h"

#include "gibbscert/errors.hpp"
#include "gibbscert/generators.hpp"
#include "gibbscert/uniqueness.hpp"
#include "oracles.hpp"

using namespace gibbscert;
using doctest::Approx;

namespace {

// Sum of kappa^length over simple paths from x to the inner boundary of the ball.
double bound_a_oracle(const Graph& g, Vertex x, std::size_t n_k, double kappa) {
  const Volume vol = boundaries(g, ball_vertices(g, x, n_k));
  double sum = 0.0;
  oracle::bitmask_paths(g, vol.delta, x, [&](Vertex, Vertex) { return kappa; },
                        [&](std::size_t, Vertex end, double w, std::uint64_t) {
                          if (contains(vol.inner, end)) sum += w;
                        });
  return sum;
}

}  // namespace

TEST_CASE("certificate example in the regime") {
  const auto c = certificate(std::log(2.0), NormDistribution::constant(1.0), 0.05, {1, 5, 10});
  const double kappa = std::exp(0.2) - 1.0;
  const double p = kappa * 2.0;
  CHECK(c.kappa == Approx(kappa).epsilon(1e-14));
  CHECK(c.kappa == Approx(0.22140275816).epsilon(1e-10));
  CHECK(c.product == Approx(0.44280551632).epsilon(1e-10));
  CHECK(c.verdict == RegimeVerdict::certified);
  REQUIRE(c.tail_bounds.size() == 3);
  CHECK(c.tail_bounds[2].n_k == 10);
  CHECK(c.tail_bounds[2].bound == Approx(std::pow(p, 10) / (1 - p)).epsilon(1e-13));
  CHECK(c.tail_bounds[2].bound == Approx(0.00052014379).epsilon(1e-8));
  CHECK(c.beta_star == Approx(std::log(1.5) / 4.0).epsilon(1e-10));
}

TEST_CASE("certificate outside the regime has no tail bounds") {
  const auto d = NormDistribution::constant(1.0);
  const double bs = beta_star(d, std::log(2.0)).beta;
  for (double beta : {bs * 1.0001, bs * 2.0}) {
    const auto c = certificate(std::log(2.0), d, beta, {1, 2, 3});
    CHECK(c.verdict == RegimeVerdict::outside_regime);
    CHECK(c.tail_bounds.empty());
    CHECK(c.product >= 1.0);
  }
}

TEST_CASE("gamma zero certificate uses beta_star ln2/4") {
  const auto c = certificate(0.0, NormDistribution::constant(1.0), 0.1, {2});
  CHECK(c.verdict == RegimeVerdict::certified);
  CHECK(c.beta_star == Approx(std::log(2.0) / 4.0).epsilon(1e-10));
  CHECK(to_string(c.verdict) == "certified");
  CHECK(to_string(RegimeVerdict::outside_regime) == "outside-regime");
}

TEST_CASE("certificate input validation") {
  const auto d = NormDistribution::exponential(8.0);
  CHECK_THROWS_AS(certificate(1.0, d, 0.1, {2, 2}), InvalidInput);
  CHECK_THROWS_AS(certificate(1.0, d, 0.1, {0, 2}), InvalidInput);
  CHECK_THROWS_AS(certificate(1.0, d, 3.0, {1}), DomainError);
}

TEST_CASE("geometric tail bounds decrease to zero in the regime") {
  const double kappa = 0.3, gamma = 0.5;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 60; ++n) {
    const double b = geometric_tail_bound(kappa, gamma, n);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 1e-6);
  CHECK(std::isinf(geometric_tail_bound(0.5, std::log(2.0), 3)));
  CHECK(std::isinf(geometric_tail_bound(0.9, 1.0, 3)));
}

TEST_CASE("enumerated bound on a chain is two kappa powers") {
  const Graph g = chain(41);
  const auto d = NormDistribution::constant(1.0);
  for (std::size_t nk = 1; nk <= 6; ++nk) {
    const auto b = expected_gap_bound(g, 20, nk, std::log(2.0), d, 0.05);
    REQUIRE(b.enumerated.has_value());
    CHECK(b.paths == 2);
    CHECK(*b.enumerated == Approx(2.0 * std::pow(b.kappa, nk)).epsilon(1e-13));
    CHECK(b.counting == BoundStatus::holds);
    CHECK(b.ordered == std::optional<bool>(true));
  }
}

TEST_CASE("gap bounds vanish as beta goes to zero") {
  const Graph g = grid(5, 5);
  const auto d = NormDistribution::exponential(8.0);
  const auto b = expected_gap_bound(g, 12, 2, 1.0, d, 1e-9);
  CHECK(*b.enumerated < 1e-12);
  CHECK(b.geometric < 1e-12);
}

TEST_CASE("grid gap bounds are ordered and match the path oracle") {
  const auto d = NormDistribution::uniform(0.5);
  for (auto [g, x] : {std::pair{grid(3, 3), Vertex{4}}, std::pair{grid(5, 5), Vertex{12}}}) {
    const double gamma = check_tempered(g, GrowthFunction::log(), x, {2}, std::nullopt).gamma;
    const double beta = beta_star(d, gamma).beta / 2.0;
    const auto b = expected_gap_bound(g, x, 2, gamma, d, beta);
    REQUIRE(b.enumerated.has_value());
    CHECK(*b.enumerated == Approx(bound_a_oracle(g, x, 2, b.kappa)).epsilon(1e-12));
    CHECK(*b.enumerated <= b.geometric);
  }
}

TEST_CASE("capped path enumeration drops bound (a)") {
  Caps caps;
  caps.max_items = 2;
  const auto b = expected_gap_bound(grid(5, 5), 12, 2, 1.0, NormDistribution::constant(1.0), 0.01, caps);
  CHECK_FALSE(b.enumerated.has_value());
  CHECK(b.geometric > 0.0);
}

TEST_CASE("decay at beta zero is identically zero") {
  DecayConfig cfg{{1, 2, 3}, std::log(2.0), 0.0, 10, 5, SignMode::rademacher, BoundaryStrategy::automatic};
  const auto t = decay_experiment(chain(21), 10, SpinModel::ising(), NormDistribution::exponential(8.0), cfg);
  REQUIRE(t.rows.size() == 3);
  for (const auto& r : t.rows) {
    CHECK(r.mean == 0.0);
    CHECK(r.se == 0.0);
    CHECK(r.within_bound);
  }
}

TEST_CASE("decay rows reproduce per-sample boundary gaps") {
  const Graph g = grid(4, 4);
  const auto d = NormDistribution::exponential(8.0);
  DecayConfig cfg{{1, 2}, 1.0, 0.3, 6, 99, SignMode::rademacher, BoundaryStrategy::automatic};
  const auto t = decay_experiment(g, 5, SpinModel::ising(), d, cfg);
  REQUIRE(t.rows.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const Volume vol = boundaries(g, ball_vertices(g, 5, cfg.radii[k]));
    double sum = 0.0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const auto w = sample_disorder(d, g, cfg.sign_mode, derive_seed(cfg.seed, s));
      sum += boundary_gap(g, vol, 5, SpinModel::ising(), w, cfg.beta).gap;
    }
    CHECK(t.rows[k].mean == Approx(sum / cfg.samples).epsilon(1e-12));
    CHECK(t.rows[k].mode == "exhaustive");
  }
  const auto again = decay_experiment(g, 5, SpinModel::ising(), d, cfg);
  CHECK(again.rows[1].mean == t.rows[1].mean);
}

TEST_CASE("decay on a chain decreases and respects bound (a)") {
  DecayConfig cfg{{1, 2, 3, 4}, std::log(2.0), 0.05, 60, 2024, SignMode::all_positive,
                  BoundaryStrategy::automatic};
  const auto t = decay_experiment(chain(41), 20, SpinModel::ising(), NormDistribution::constant(1.0), cfg);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.strictly_decreasing);
  CHECK(t.all_within);
  for (const auto& r : t.rows) {
    REQUIRE(r.bound_a.has_value());
    CHECK(r.mean <= *r.bound_a + 3 * r.se + 1e-9);
    CHECK(*r.bound_a <= r.bound_b);
  }
}

TEST_CASE("radii over the configuration cap are dropped with a notice") {
  DecayConfig cfg{{1, 2, 6}, 1.0, 0.1, 2, 1, SignMode::all_positive, BoundaryStrategy::automatic};
  const auto t = decay_experiment(grid(7, 7), 24, SpinModel::ising(), NormDistribution::constant(1.0), cfg,
                                  GibbsCaps{.max_configurations = 1 << 16});
  CHECK(t.rows.size() == 2);
  REQUIRE(t.notices.size() == 1);
  CHECK(t.notices[0].find("radius 6") != std::string::npos);
}
