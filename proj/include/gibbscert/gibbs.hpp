#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gibbscert/caps.hpp"
#include "gibbscert/disorder.hpp"
#include "gibbscert/graph.hpp"
#include "gibbscert/spin_model.hpp"

namespace gibbscert {

/// Spins on Volume::delta, aligned with its sorted order.
using Configuration = std::vector<Spin>;

/// Builds a configuration on `domain`; throws InvalidInput naming the first
/// vertex without an assignment.
Configuration configuration_from_map(const VertexSet& domain,
                                     const std::map<Vertex, Spin>& assignment);

/// Boundary spins on the outer boundary of a volume, aligned with Volume::outer.
struct BoundaryCondition {
  std::vector<Spin> values;

  static BoundaryCondition from_map(const Volume& vol, const std::map<Vertex, Spin>& assignment);
  static BoundaryCondition uniform(const Volume& vol, Spin s);

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

struct GibbsCaps {
  std::uint64_t max_configurations = 1ULL << 24;  ///< |S|^|delta|
  std::uint64_t max_boundary_conditions = 4096;   ///< exhaustive boundary sup
  std::size_t max_expansion_edges = 12;
  std::uint64_t max_pairwise_work = 1ULL << 22;   ///< pairs * 2^|E| for the literal route
  unsigned restarts = 8;                          ///< heuristic boundary search
  unsigned max_sweeps = 64;
  Caps paths;                                     ///< simple-path enumeration for Q
};

/// H(sigma|xi), or the tilted variant that adds ||W_xy|| to every interior
/// pair term. Each interior edge is counted once.
double hamiltonian(const Graph& g, const Volume& vol, std::span<const Spin> config,
                   const BoundaryCondition& bc, const SpinModel& sm, const DisorderSample& w,
                   bool tilted);

struct KernelEvaluation {
  double log_partition = 0.0;
  std::size_t q = 0;
  std::vector<double> marginals;  ///< |delta| x q, row-major
  std::uint64_t configurations = 0;

  double marginal(std::size_t position, Spin s) const { return marginals[position * q + s]; }
  /// Sum over s of h(s) times the marginal at `position`.
  double expectation(std::size_t position, std::span<const double> h) const;
};

/// Precomputed local kernel for one (volume, model, disorder, beta). Evaluates
/// exact sums over all |S|^|delta| configurations in the log domain.
class LocalSpecification {
 public:
  using Visitor = std::function<void(std::uint64_t index, std::span<const Spin> config,
                                     double log_weight)>;

  /// Throws CapExceeded when |S|^|delta| exceeds caps.max_configurations.
  LocalSpecification(const Graph& g, const Volume& vol, const SpinModel& sm,
                     const DisorderSample& w, double beta, bool tilted = true,
                     const GibbsCaps& caps = {});

  const Volume& volume() const { return vol_; }
  const SpinModel& model() const { return sm_; }
  double beta() const { return beta_; }
  bool tilted() const { return tilted_; }
  std::size_t q() const { return q_; }
  std::uint64_t configuration_count() const { return configs_; }

  /// |S|^|outer|, saturating at UINT64_MAX.
  std::uint64_t boundary_condition_count() const;
  /// Odometer decoding: outer position 0 varies fastest.
  BoundaryCondition boundary_condition(std::uint64_t index) const;

  /// -beta H + sum_x log chi_x(sigma(x)).
  double log_weight(std::span<const Spin> config, const BoundaryCondition& bc) const;
  /// Visits every configuration in odometer order (delta position 0 fastest).
  void for_each_configuration(const BoundaryCondition& bc, const Visitor& visit) const;
  KernelEvaluation evaluate(const BoundaryCondition& bc) const;

  /// Log weight restricted to single-site and boundary terms (no interior edges).
  std::vector<double> site_field(const BoundaryCondition& bc) const;

  struct Bond {
    std::size_t a;  ///< position in delta
    std::size_t b;  ///< position in delta (interior) or outer (boundary)
    std::size_t edge;
  };
  const std::vector<Bond>& interior_bonds() const { return bonds_; }
  const std::vector<Bond>& boundary_bonds() const { return boundary_bonds_; }
  /// beta * (W_e(s, t) [+ ||W_e||]) for interior bond i, q x q row-major.
  const std::vector<double>& bond_table(std::size_t i) const { return bond_tables_[i]; }

 private:
  void check_bc(const BoundaryCondition& bc) const;
  template <class F>
  void sweep(const std::vector<double>& field, F&& f) const;

  Volume vol_;
  SpinModel sm_;
  double beta_;
  bool tilted_;
  std::size_t q_;
  std::uint64_t configs_;
  std::vector<Bond> bonds_;
  std::vector<Bond> boundary_bonds_;
  std::vector<std::vector<double>> bond_tables_;
  std::vector<std::vector<double>> boundary_tables_;
  std::vector<double> log_chi_;  ///< |delta| x q
};

KernelEvaluation partition(const Graph& g, const Volume& vol, const BoundaryCondition& bc,
                           const SpinModel& sm, const DisorderSample& w, double beta,
                           bool tilted = true, const GibbsCaps& caps = {});

/// Exact expectation of h(sigma(z)) under the local kernel.
double magnetization(const Graph& g, const Volume& vol, Vertex z, const BoundaryCondition& bc,
                     const SpinModel& sm, const DisorderSample& w, double beta,
                     bool tilted = true, const GibbsCaps& caps = {});

/// Event {sigma(site) = spin}.
struct SiteEvent {
  Vertex site;
  Spin spin;
};

struct DlrReport {
  double consistency_defect = 0.0;  ///< max over site events
  double joint_defect = 0.0;        ///< max over full configurations on delta
  double properness_defect = 0.0;   ///< max |total mass - 1| over evaluated kernels
  std::size_t events = 0;
  std::uint64_t inner_kernels = 0;  ///< distinct boundary conditions seen by lambda
};

/// Compares pi_delta(A|xi) with the composition of pi_lambda inside pi_delta
/// for every event, with untilted Hamiltonians. An empty event list means
/// all single-site indicators on delta and its outer boundary.
DlrReport dlr_consistency_check(const Graph& g, const VertexSet& lambda, const VertexSet& delta,
                                const SpinModel& sm, const DisorderSample& w, double beta,
                                const BoundaryCondition& bc,
                                const std::vector<SiteEvent>& events = {},
                                const GibbsCaps& caps = {});

struct QResult {
  Vertex z = 0;
  std::vector<std::pair<Vertex, double>> per_target;  ///< aligned with Volume::inner
  double total = 0.0;
  std::uint64_t paths = 0;
  bool exact = true;
  EnumerationStatus status;
};

/// Path sum over simple paths inside delta from z to each inner boundary vertex
/// of the product of edge_kappa. Requires z in the interior.
QResult compute_Q(const Graph& g, const Volume& vol, Vertex z, double beta,
                  const DisorderSample& w, const Caps& caps = {});

enum class BoundaryStrategy { automatic, exhaustive, ascent };
std::string to_string(BoundaryStrategy s);
BoundaryStrategy boundary_strategy_from_string(const std::string& s);

struct BoundaryGap {
  Vertex z = 0;
  double gap = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  BoundaryCondition argmax;
  BoundaryCondition argmin;
  bool exhaustive = true;
  std::uint64_t evaluated = 0;
};

/// Sup over boundary pairs of |M(h|xi) - M(h|eta)| for every z (delta
/// positions). Exhaustive mode is exact; ascent mode is a lower bound.
std::vector<BoundaryGap> boundary_gaps(const LocalSpecification& spec,
                                       std::span<const std::size_t> z_positions,
                                       BoundaryStrategy strategy, const GibbsCaps& caps = {},
                                       std::uint64_t seed = 0);

BoundaryGap boundary_gap(const Graph& g, const Volume& vol, Vertex z, const SpinModel& sm,
                         const DisorderSample& w, double beta,
                         BoundaryStrategy strategy = BoundaryStrategy::automatic,
                         const GibbsCaps& caps = {}, std::uint64_t seed = 0);

enum class Lemma27Status { proven, consistent, violated, inconclusive };
std::string to_string(Lemma27Status s);

struct Lemma27Report {
  Vertex z = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  Lemma27Status status = Lemma27Status::proven;
  bool exhaustive = true;
  BoundaryCondition xi;
  BoundaryCondition eta;
  QResult q;
};

inline constexpr double kInequalitySlack = 1e-9;

/// lhs = sup |M(h|xi) - M(h|eta)|, rhs = total Q. Proven when exhaustive,
/// consistent when a heuristic lower bound respects rhs.
Lemma27Report verify_lemma27(const Graph& g, const Volume& vol, Vertex z, const SpinModel& sm,
                             const DisorderSample& w, double beta,
                             BoundaryStrategy strategy = BoundaryStrategy::automatic,
                             const GibbsCaps& caps = {}, std::uint64_t seed = 0);

/// Same check for every interior vertex, sharing one boundary sweep.
std::vector<Lemma27Report> verify_lemma27_all(const Graph& g, const Volume& vol,
                                              const SpinModel& sm, const DisorderSample& w,
                                              double beta,
                                              BoundaryStrategy strategy = BoundaryStrategy::automatic,
                                              const GibbsCaps& caps = {}, std::uint64_t seed = 0);

enum class ExpansionMethod { automatic, pairwise, factorized };
std::string to_string(ExpansionMethod m);

struct ExpansionSite {
  Vertex z = 0;
  double direct = 0.0;    ///< M(h|xi) - M(h|eta)
  double expanded = 0.0;  ///< sum over edge subsets, divided by Z~(xi) Z~(eta)
  double defect = 0.0;
  /// Largest |term| among subsets that do not connect z to the inner boundary.
  double max_disconnected_term = 0.0;
};

struct ExpansionReport {
  std::vector<ExpansionSite> sites;
  double max_defect = 0.0;
  double log_scale = 0.0;  ///< log Z~(xi) + log Z~(eta)
  std::size_t subsets = 0;
  std::string method;
  double min_gamma = 0.0;         ///< min of Gamma_xy over edges and spin quadruples
  double max_gamma_excess = 0.0;  ///< max of Gamma_xy - kappa_xy
  bool gamma_nonnegative = true;
  /// Per-edge maxima of Gamma multiply to at most the kappa product along
  /// every path, so 0 <= Gamma(E_path) <= prod kappa.
  bool gamma_bounded = true;
};

/// Expands Z~(xi) Z~(eta) (M(h|xi) - M(h|eta)) over all subsets of interior
/// edges and compares with the direct value for each z.
ExpansionReport verify_expansion_identity(const Graph& g, const Volume& vol,
                                          std::span<const Vertex> zs, const SpinModel& sm,
                                          const DisorderSample& w, double beta,
                                          const BoundaryCondition& xi,
                                          const BoundaryCondition& eta,
                                          ExpansionMethod method = ExpansionMethod::automatic,
                                          const GibbsCaps& caps = {});

}  // namespace gibbscert
