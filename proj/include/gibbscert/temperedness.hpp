#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbscert/caps.hpp"
#include "gibbscert/enumerate.hpp"
#include "gibbscert/graph.hpp"

namespace gibbscert {

/// Nonnegative nondecreasing g on [1, inf), applied to vertex degrees.
class GrowthFunction {
 public:
  enum class Kind { log, t_log_t, custom };

  static GrowthFunction log();      ///< g1(t) = log t
  static GrowthFunction t_log_t();  ///< g2(t) = t log t
  static GrowthFunction custom(std::string name, std::function<double(double)> fn);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  GrowthFunction(Kind kind, std::string name, std::function<double(double)> fn)
      : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  Kind kind_;
  std::string name_;
  std::function<double(double)> fn_;
};

/// Strictly increasing phi on [1, inf) with an inverse. Built-in power maps
/// invert in closed form; custom maps invert by bisection to 1e-12.
class MonotoneMap {
 public:
  /// phi(t) = scale * t^exponent
  static MonotoneMap power(double scale, double exponent);
  static MonotoneMap identity() { return power(1.0, 1.0); }
  static MonotoneMap custom(std::string name, std::function<double(double)> fn);

  double operator()(double t) const { return fn_(t); }
  /// Smallest t >= 1 with phi(t) >= y (phi^{-1}(y) for y in the range).
  double inverse(double y) const;
  const std::string& name() const { return name_; }

 private:
  MonotoneMap(std::string name, std::function<double(double)> fn,
              std::function<double(double)> inv)
      : name_(std::move(name)), fn_(std::move(fn)), inv_(std::move(inv)) {}

  std::string name_;
  std::function<double(double)> fn_;
  std::function<double(double)> inv_;
};

enum class RepulsionMode { min_degree, max_degree };

struct RepulsivenessSpec {
  MonotoneMap phi = MonotoneMap::identity();
  std::size_t n_star = 1;
  RepulsionMode mode = RepulsionMode::min_degree;
};

/// G(A; g): mean of g(n(x)) over the animal's vertices, degrees taken in host.
double animal_average(std::span<const Vertex> animal_vertices,
                      const GrowthFunction& g, const Graph& host);

/// Result of maximizing G(A; g) over connected vertex subsets of a region.
struct MaxAnimalAverage {
  std::optional<double> value;  ///< nullopt when no admissible animal exists
  VertexSet witness;
  bool exact = true;            ///< false: value is only a lower bound
  std::string method;           ///< "exhaustive", "tree-dp" or "greedy"
  std::uint64_t animals_examined = 0;
  std::string note;
};

/// Maximum of G(A; g) over animals with vertex set inside `region` and at
/// least `min_vertices` vertices. Uses an exact tree dynamic program when the
/// induced region is a tree, exhaustive enumeration otherwise; if the
/// enumeration cap is hit the greedy lower bound is merged in and the result
/// is flagged inexact.
MaxAnimalAverage max_animal_average(const Graph& host, const VertexSet& region,
                                    const GrowthFunction& g,
                                    std::size_t min_vertices, const Caps& caps);

/// Exhaustive enumeration only (no tree shortcut).
MaxAnimalAverage max_animal_average_exhaustive(const Graph& host, const VertexSet& region,
                                               const GrowthFunction& g,
                                               std::size_t min_vertices, const Caps& caps);

/// Greedy hub-growing search; always a lower bound.
MaxAnimalAverage max_animal_average_greedy(const Graph& host, const VertexSet& region,
                                           const GrowthFunction& g,
                                           std::size_t min_vertices);

enum class TemperednessVerdict { certified_on_window, failed, inconclusive };
std::string to_string(TemperednessVerdict v);

struct RadiusMaximum {
  std::size_t radius = 0;
  std::size_t ball_size = 0;
  MaxAnimalAverage maximum;
};

struct TemperednessReport {
  Vertex root = 0;
  std::string growth;
  std::vector<RadiusMaximum> per_radius;
  double gamma = 0.0;  ///< max over radii; 0 when every window is empty
  std::optional<double> gamma_target;
  TemperednessVerdict verdict = TemperednessVerdict::certified_on_window;
  std::optional<VertexSet> witness;  ///< set when verdict == failed
};

/// Finite-window surrogate of g-temperedness at root x over the given radii.
TemperednessReport check_tempered(const Graph& g, const GrowthFunction& gf, Vertex x,
                                  const std::vector<std::size_t>& radii,
                                  std::optional<double> gamma_target,
                                  const Caps& caps = {});

struct RepulsionViolation {
  Vertex x;
  Vertex y;
  std::size_t distance;  ///< kUnreachable never occurs: disconnected pairs pass
  double required;
};

struct RepulsivenessReport {
  bool holds = true;
  std::vector<RepulsionViolation> violations;
  std::size_t pairs_checked = 0;
};

/// Checks rho(x, y) >= phi(m(x, y)) for all distinct pairs with m >= n*.
RepulsivenessReport check_repulsive(const Graph& g, const RepulsivenessSpec& spec);

enum class SeriesDiagnostic { converging, diverging };
std::string to_string(SeriesDiagnostic d);

struct SummabilityReport {
  double partial_sum = 0.0;
  double gamma = 0.0;  ///< 2 * partial_sum
  std::size_t terms = 0;
  double last_term = 0.0;
  double tail_estimate = 0.0;  ///< geometric extrapolation; inf if ratio >= 1
  SeriesDiagnostic diagnostic = SeriesDiagnostic::converging;
};

/// Partial sum of g(t_{k+1}) / phi(t_k), k = 1..terms, with a convergence
/// diagnostic: converging when the geometric tail extrapolated from the last
/// two terms is below tolerance * max(1, |sum|).
SummabilityReport check_summability(const GrowthFunction& g, const MonotoneMap& phi,
                                    std::span<const double> t_seq, std::size_t terms,
                                    double tolerance = 1e-6);

/// |B| <= max{1, (2|V(A)| - 1) / lambda} for a lambda-separated B inside V(A).
/// Throws InvalidInput if B is not lambda-separated in the host metric or
/// not contained in the animal.
bool verify_separation_bound(std::span<const Vertex> animal_vertices, double lambda,
                             std::span<const Vertex> b, const Graph& host);

struct NkSelection {
  std::vector<std::size_t> radii;
  bool empty() const { return radii.empty(); }
};

/// All r in 1..r_max with max degree over V_r(x) <= phi^{-1}(2r + 1).
NkSelection select_Nk(const Graph& g, Vertex x, const RepulsivenessSpec& spec,
                      std::size_t r_max);

enum class CountedFamily { simple_paths, animals };
enum class BoundStatus { holds, violated, inconclusive };
std::string to_string(BoundStatus s);

struct CountRow {
  std::size_t n = 0;
  std::uint64_t count = 0;
  double bound = 0.0;            ///< exp(gamma * N)
  double provable_bound = 0.0;   ///< paths: exp(gamma * (N + 1)); animals: same as bound
  BoundStatus status = BoundStatus::holds;
};

struct CountingReport {
  CountedFamily family = CountedFamily::simple_paths;
  Vertex root = 0;
  std::size_t n_k = 0;
  double gamma = 0.0;
  std::vector<CountRow> rows;
  bool complete = true;
  BoundStatus status = BoundStatus::holds;
};

/// Counts simple paths from x of length N inside G_{N_k}(x) (N >= N_k), or
/// connected vertex sets of size N inside it (N >= N_k + 1), and compares
/// each count with exp(gamma * N). Sizes below the family's threshold have
/// an empty set by definition.
CountingReport verify_counting_bounds(const Graph& g, Vertex x, std::size_t n_k,
                                      double gamma, CountedFamily family,
                                      const std::vector<std::size_t>& n_values,
                                      const Caps& caps = {});

/// Generalized Randic index sum_{y ~ x} [n(x) n(y)]^theta.
double randic_index(const Graph& g, Vertex x, double theta);

/// log of max over the family of exp(sum over left vertices of log n(y)),
/// the majorant of the family size; -inf for an empty family.
double log_path_family_majorant(const Graph& g, std::span<const SimplePath> family);

}  // namespace gibbscert
