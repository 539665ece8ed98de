#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbscert/caps.hpp"
#include "gibbscert/disorder.hpp"
#include "gibbscert/gibbs.hpp"
#include "gibbscert/graph.hpp"
#include "gibbscert/spin_model.hpp"
#include "gibbscert/temperedness.hpp"

namespace gibbscert {

enum class RegimeVerdict { certified, outside_regime };
std::string to_string(RegimeVerdict v);

struct TailBound {
  std::size_t n_k = 0;
  double bound = 0.0;  ///< p^{N_k} / (1 - p), p = kappa e^gamma
};

struct UniquenessCertificate {
  double gamma = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  double product = 0.0;  ///< kappa(beta) e^gamma
  /// Root of kappa(beta) = e^{-gamma}; infinite when kappa never gets there.
  double beta_star = 0.0;
  std::vector<TailBound> tail_bounds;  ///< empty outside the regime
  RegimeVerdict verdict = RegimeVerdict::outside_regime;
};

/// Throws InvalidInput unless radii are strictly increasing and positive;
/// DomainError from the MGF propagates.
UniquenessCertificate certificate(double gamma, const NormDistribution& d, double beta,
                                  const std::vector<std::size_t>& radii);

/// p^{N_k} / (1 - p) with p = kappa e^gamma; infinite when p >= 1.
double geometric_tail_bound(double kappa, double gamma, std::size_t n_k);

struct GapBound {
  std::optional<double> enumerated;  ///< bound (a); absent if enumeration was capped
  double geometric = 0.0;            ///< bound (b)
  std::uint64_t paths = 0;
  double kappa = 0.0;
  /// Result of the path counting check that licenses (a) <= (b).
  BoundStatus counting = BoundStatus::inconclusive;
  /// Set when counting holds: whether (a) <= (b) was observed.
  std::optional<bool> ordered;
};

/// Bound (a): sum over simple paths from x to the inner boundary of the ball
/// of radius N_k of kappa^length. Bound (b): the geometric tail.
GapBound expected_gap_bound(const Graph& g, Vertex x, std::size_t n_k, double gamma,
                            const NormDistribution& d, double beta, const Caps& caps = {});

struct DecayRow {
  std::size_t n_k = 0;
  double mean = 0.0;
  double se = 0.0;
  std::optional<double> bound_a;
  double bound_b = 0.0;
  std::string mode;  ///< exhaustive or ascent
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool within_bound = true;  ///< mean <= bound + 3 se
};

struct DecayTable {
  std::vector<DecayRow> rows;
  std::vector<std::string> notices;  ///< radii dropped by caps
  bool all_within = true;
  bool strictly_decreasing = true;
};

struct DecayConfig {
  std::vector<std::size_t> radii;
  double gamma = 0.0;
  double beta = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  SignMode sign_mode = SignMode::all_positive;
  BoundaryStrategy strategy = BoundaryStrategy::automatic;
};

/// Quenched decay experiment: for each disorder sample (seeded by
/// derive_seed(seed, s)) computes the exact boundary gap on the ball of each
/// radius around z and aggregates mean and standard error.
DecayTable decay_experiment(const Graph& g, Vertex z, const SpinModel& sm,
                            const NormDistribution& d, const DecayConfig& config,
                            const GibbsCaps& caps = {});

}  // namespace gibbscert
