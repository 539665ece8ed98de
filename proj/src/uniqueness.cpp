#include "gibbscert/uniqueness.hpp"

#include <cmath>
#include <limits>

#include "gibbscert/enumerate.hpp"
#include "gibbscert/errors.hpp"

namespace gibbscert {

std::string to_string(RegimeVerdict v) {
  return v == RegimeVerdict::certified ? "certified" : "outside-regime";
}

double geometric_tail_bound(double kappa, double gamma, std::size_t n_k) {
  const double p = kappa * std::exp(gamma);
  if (!(p < 1.0)) return std::numeric_limits<double>::infinity();
  return std::pow(p, static_cast<double>(n_k)) / (1.0 - p);
}

UniquenessCertificate certificate(double gamma, const NormDistribution& d, double beta,
                                  const std::vector<std::size_t>& radii) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("gamma must be a nonnegative finite number");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] == 0 || (i > 0 && radii[i] <= radii[i - 1])) {
      throw InvalidInput("radii must be positive and strictly increasing");
    }
  }
  UniquenessCertificate c;
  c.gamma = gamma;
  c.beta = beta;
  c.kappa = mean_kappa(d, beta);
  c.product = c.kappa * std::exp(gamma);
  try {
    c.beta_star = beta_star(d, gamma).beta;
  } catch (const DomainError&) {
    c.beta_star = std::numeric_limits<double>::infinity();
  }
  c.verdict = c.product < 1.0 ? RegimeVerdict::certified : RegimeVerdict::outside_regime;
  if (c.verdict == RegimeVerdict::certified) {
    for (std::size_t r : radii) c.tail_bounds.push_back({r, geometric_tail_bound(c.kappa, gamma, r)});
  }
  return c;
}

GapBound expected_gap_bound(const Graph& g, Vertex x, std::size_t n_k, double gamma,
                            const NormDistribution& d, double beta, const Caps& caps) {
  if (n_k == 0) throw InvalidInput("N_k must be positive");
  GapBound out;
  out.kappa = mean_kappa(d, beta);
  out.geometric = geometric_tail_bound(out.kappa, gamma, n_k);

  const Volume vol = boundaries(g, ball_vertices(g, x, n_k));
  double sum = 0.0;
  std::size_t longest = 0;
  const auto status = enumerate_simple_paths(
      g, vol.delta, x, vol.inner, vol.delta.size(), caps, [&](std::span<const Vertex> path) {
        const std::size_t len = path.size() - 1;
        sum += std::pow(out.kappa, static_cast<double>(len));
        longest = std::max(longest, len);
        ++out.paths;
      });
  if (!status.complete) return out;
  out.enumerated = sum;

  if (out.paths == 0) {
    out.counting = BoundStatus::holds;
  } else {
    std::vector<std::size_t> ns;
    for (std::size_t n = n_k; n <= longest; ++n) ns.push_back(n);
    out.counting = verify_counting_bounds(g, x, n_k, gamma, CountedFamily::simple_paths, ns, caps).status;
  }
  if (out.counting == BoundStatus::holds) {
    out.ordered = sum <= out.geometric * (1.0 + 1e-12);
  }
  return out;
}

DecayTable decay_experiment(const Graph& g, Vertex z, const SpinModel& sm,
                            const NormDistribution& d, const DecayConfig& config,
                            const GibbsCaps& caps) {
  if (config.samples == 0) throw InvalidInput("samples must be positive");
  for (std::size_t i = 0; i < config.radii.size(); ++i) {
    if (config.radii[i] == 0 || (i > 0 && config.radii[i] <= config.radii[i - 1])) {
      throw InvalidInput("radii must be positive and strictly increasing");
    }
  }
  if (z >= g.num_vertices()) throw InvalidInput("z is not a vertex of the graph");

  DecayTable table;
  std::vector<std::size_t> kept;
  std::vector<Volume> volumes;
  for (std::size_t r : config.radii) {
    Volume vol = boundaries(g, ball_vertices(g, z, r));
    const double configs =
        std::pow(static_cast<double>(sm.size()), static_cast<double>(vol.delta.size()));
    if (configs > static_cast<double>(caps.max_configurations)) {
      table.notices.push_back("radius " + std::to_string(r) + " dropped: " +
                              std::to_string(vol.delta.size()) +
                              " sites exceed the configuration cap");
      continue;
    }
    kept.push_back(r);
    volumes.push_back(std::move(vol));
  }

  std::vector<std::vector<double>> values(volumes.size());
  std::vector<bool> exhaustive(volumes.size(), true);
  for (std::size_t s = 0; s < config.samples; ++s) {
    const std::uint64_t sample_seed = derive_seed(config.seed, s);
    const DisorderSample w = sample_disorder(d, g, config.sign_mode, sample_seed);
    for (std::size_t k = 0; k < volumes.size(); ++k) {
      const LocalSpecification spec(g, volumes[k], sm, w, config.beta, true, caps);
      const std::size_t pos[1] = {*volumes[k].position(z)};
      const auto gap = boundary_gaps(spec, pos, config.strategy, caps, sample_seed).front();
      values[k].push_back(gap.gap);
      exhaustive[k] = exhaustive[k] && gap.exhaustive;
    }
  }

  const double kappa = mean_kappa(d, config.beta);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto& v = values[k];
    DecayRow row;
    row.n_k = kept[k];
    row.samples = v.size();
    row.seed = config.seed;
    row.mode = exhaustive[k] ? "exhaustive" : "ascent";
    double sum = 0.0;
    for (double x : v) sum += x;
    row.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - row.mean) * (x - row.mean);
      row.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    const auto bound = expected_gap_bound(g, z, kept[k], config.gamma, d, config.beta, caps.paths);
    row.bound_a = bound.enumerated;
    row.bound_b = geometric_tail_bound(kappa, config.gamma, kept[k]);
    const double reference = row.bound_a.value_or(row.bound_b);
    row.within_bound = row.mean <= reference + 3.0 * row.se + kInequalitySlack;
    table.all_within = table.all_within && row.within_bound;
    if (!table.rows.empty() && !(row.mean < table.rows.back().mean)) {
      table.strictly_decreasing = false;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace gibbscert
