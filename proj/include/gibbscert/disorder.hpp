#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gibbscert/graph.hpp"

namespace gibbscert {

/// Law of the interaction norm ||W_xy||. Every family is supported on
/// [0, inf); the exponential family has a finite MGF only for t < rate.
class NormDistribution {
 public:
  enum class Family { exponential, uniform, half_normal, constant };

  static NormDistribution exponential(double rate);
  static NormDistribution uniform(double upper);
  static NormDistribution half_normal(double scale);
  static NormDistribution constant(double value);

  Family family() const { return family_; }
  double parameter() const { return param_; }
  std::string family_name() const;
  /// Name of the single parameter: rate, upper, scale or value.
  std::string parameter_name() const;

  /// E[exp(t ||W||)]; throws DomainError for t >= rate (exponential).
  double mgf(double t) const;
  /// mgf(t) - 1 without cancellation near t = 0.
  double mgf_minus_one(double t) const;
  /// Supremum of the MGF domain (inf except for the exponential family).
  double mgf_domain_sup() const;

  double mean() const;
  double cdf(double x) const;

  template <class Engine>
  double sample(Engine& engine) const {
    switch (family_) {
      case Family::exponential: return std::exponential_distribution<double>(param_)(engine);
      case Family::uniform: return std::uniform_real_distribution<double>(0.0, param_)(engine);
      case Family::half_normal: {
        const double z = std::normal_distribution<double>(0.0, param_)(engine);
        return z < 0.0 ? -z : z;
      }
      case Family::constant: return param_;
    }
    return param_;
  }

  friend bool operator==(const NormDistribution&, const NormDistribution&) = default;

 private:
  NormDistribution(Family f, double p) : family_(f), param_(p) {}
  Family family_;
  double param_;
};

/// kappa_xy(beta) = exp(4 beta ||W_xy||) - 1.
double edge_kappa(double norm, double beta);

/// kappa(beta) = E[kappa_xy(beta)] = mgf(4 beta) - 1.
double mean_kappa(const NormDistribution& d, double beta);

/// kappa(beta) * e^gamma; the certified regime is product < 1.
double regime_product(const NormDistribution& d, double gamma, double beta);

struct BetaStar {
  double beta = 0.0;
  double target_kappa = 0.0;  ///< e^{-gamma}
  double kappa = 0.0;         ///< mean_kappa at the returned beta
  int iterations = 0;
};

/// Solves mean_kappa(d, beta) = e^{-gamma} by bisection to bracket width tol.
/// Throws DomainError when the target exceeds every attainable kappa.
BetaStar beta_star(const NormDistribution& d, double gamma, double tol = 1e-12);

enum class SignMode { all_positive, rademacher };
std::string to_string(SignMode m);
SignMode sign_mode_from_string(const std::string& s);

/// Frozen disorder: one norm and one sign per host edge (indexed like
/// Graph::edges()). W_xy(s, s') = sign * norm * K(s, s').
struct DisorderSample {
  NormDistribution distribution = NormDistribution::constant(0.0);
  SignMode sign_mode = SignMode::all_positive;
  std::uint64_t seed = 0;
  std::vector<double> norms;
  std::vector<int> signs;

  double coupling(std::size_t edge) const { return signs[edge] * norms[edge]; }
  std::size_t size() const { return norms.size(); }
};

/// Random stream for one edge: mt19937_64 keyed by splitmix64(seed, edge).
/// Samples do not depend on the order in which edges are visited.
std::mt19937_64 edge_stream(std::uint64_t seed, std::uint64_t edge_id);

/// Mixes (seed, index) into a derived seed; used for per-sample seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

DisorderSample sample_disorder(const NormDistribution& d, const Graph& g, SignMode sign_mode,
                               std::uint64_t seed);

/// Sample with the given norms for every edge (signs +1); handy for tests.
DisorderSample uniform_disorder(const Graph& g, double norm);

}  // namespace gibbscert
