#include "gibbscert/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "gibbscert/enumerate.hpp"
#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t saturating_power(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r *= base;
  }
  return r;
}

void check_spins(std::span<const Spin> spins, std::size_t q, const char* what) {
  for (Spin s : spins) {
    if (s >= q) {
      throw InvalidInput(std::string(what) + " contains spin index " + std::to_string(s) +
                         " outside the spin set of size " + std::to_string(q));
    }
  }
}

std::size_t require_position(const Volume& vol, Vertex z) {
  auto pos = vol.position(z);
  if (!pos) throw InvalidInput("vertex " + std::to_string(z) + " is not in delta");
  return *pos;
}

// Endpoint positions of a boundary edge: (position in delta, position in outer).
std::pair<std::size_t, std::size_t> boundary_endpoints(const Graph& g, const Volume& vol,
                                                       std::size_t e) {
  const Edge& ed = g.edge(e);
  if (auto pu = vol.position(ed.u)) return {*pu, *vol.outer_position(ed.v)};
  return {*vol.position(ed.v), *vol.outer_position(ed.u)};
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Configuration configuration_from_map(const VertexSet& domain,
                                     const std::map<Vertex, Spin>& assignment) {
  Configuration out;
  out.reserve(domain.size());
  for (Vertex v : domain) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw InvalidInput("missing spin assignment for vertex " + std::to_string(v));
    }
    out.push_back(it->second);
  }
  return out;
}

BoundaryCondition BoundaryCondition::from_map(const Volume& vol,
                                              const std::map<Vertex, Spin>& assignment) {
  BoundaryCondition bc;
  bc.values.reserve(vol.outer.size());
  for (Vertex v : vol.outer) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw InvalidInput("missing boundary value for vertex " + std::to_string(v));
    }
    bc.values.push_back(it->second);
  }
  return bc;
}

BoundaryCondition BoundaryCondition::uniform(const Volume& vol, Spin s) {
  return BoundaryCondition{std::vector<Spin>(vol.outer.size(), s)};
}

double hamiltonian(const Graph& g, const Volume& vol, std::span<const Spin> config,
                   const BoundaryCondition& bc, const SpinModel& sm, const DisorderSample& w,
                   bool tilted) {
  if (config.size() != vol.delta.size()) {
    throw InvalidInput("configuration must assign every vertex of delta");
  }
  if (bc.values.size() != vol.outer.size()) {
    throw InvalidInput("boundary condition must assign every outer boundary vertex");
  }
  if (w.size() != g.num_edges()) throw InvalidInput("disorder sample does not match the graph");
  check_spins(config, sm.size(), "configuration");
  check_spins(bc.values, sm.size(), "boundary condition");

  double h = 0.0;
  for (std::size_t e : vol.interior_edges) {
    const Edge& ed = g.edge(e);
    const Spin s = config[*vol.position(ed.u)];
    const Spin t = config[*vol.position(ed.v)];
    h -= w.coupling(e) * sm.coupling(s, t) + (tilted ? w.norms[e] : 0.0);
  }
  for (std::size_t e : vol.boundary_edges) {
    auto [inner, outer] = boundary_endpoints(g, vol, e);
    h -= w.coupling(e) * sm.coupling(config[inner], bc.values[outer]);
  }
  return h;
}

double KernelEvaluation::expectation(std::size_t position, std::span<const double> h) const {
  double m = 0.0;
  for (std::size_t s = 0; s < q; ++s) m += h[s] * marginals[position * q + s];
  return m;
}

LocalSpecification::LocalSpecification(const Graph& g, const Volume& vol, const SpinModel& sm,
                                       const DisorderSample& w, double beta, bool tilted,
                                       const GibbsCaps& caps)
    : vol_(vol), sm_(sm), beta_(beta), tilted_(tilted), q_(sm.size()) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("beta must be a nonnegative finite number");
  }
  if (w.size() != g.num_edges()) throw InvalidInput("disorder sample does not match the graph");
  if (vol.delta.empty()) throw InvalidInput("volume must be nonempty");
  configs_ = saturating_power(q_, vol.delta.size());
  if (configs_ > caps.max_configurations) {
    throw CapExceeded("configuration count |S|^|delta|", configs_, caps.max_configurations);
  }

  const std::size_t n = vol.delta.size();
  log_chi_.resize(n * q_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < q_; ++s) {
      log_chi_[i * q_ + s] = std::log(sm.weight(vol.delta[i], static_cast<Spin>(s)));
    }
  }
  for (std::size_t e : vol.interior_edges) {
    const Edge& ed = g.edge(e);
    bonds_.push_back({*vol.position(ed.u), *vol.position(ed.v), e});
    std::vector<double> t(q_ * q_);
    for (std::size_t s = 0; s < q_; ++s) {
      for (std::size_t r = 0; r < q_; ++r) {
        t[s * q_ + r] = beta * (w.coupling(e) * sm.coupling(static_cast<Spin>(s), static_cast<Spin>(r)) +
                                (tilted ? w.norms[e] : 0.0));
      }
    }
    bond_tables_.push_back(std::move(t));
  }
  for (std::size_t e : vol.boundary_edges) {
    auto [inner, outer] = boundary_endpoints(g, vol, e);
    boundary_bonds_.push_back({inner, outer, e});
    std::vector<double> t(q_ * q_);
    for (std::size_t s = 0; s < q_; ++s) {
      for (std::size_t r = 0; r < q_; ++r) {
        t[s * q_ + r] = beta * w.coupling(e) * sm.coupling(static_cast<Spin>(s), static_cast<Spin>(r));
      }
    }
    boundary_tables_.push_back(std::move(t));
  }
}

std::uint64_t LocalSpecification::boundary_condition_count() const {
  return saturating_power(q_, vol_.outer.size());
}

BoundaryCondition LocalSpecification::boundary_condition(std::uint64_t index) const {
  BoundaryCondition bc;
  bc.values.resize(vol_.outer.size());
  for (auto& v : bc.values) {
    v = static_cast<Spin>(index % q_);
    index /= q_;
  }
  return bc;
}

void LocalSpecification::check_bc(const BoundaryCondition& bc) const {
  if (bc.values.size() != vol_.outer.size()) {
    throw InvalidInput("boundary condition must assign every outer boundary vertex");
  }
  check_spins(bc.values, q_, "boundary condition");
}

std::vector<double> LocalSpecification::site_field(const BoundaryCondition& bc) const {
  check_bc(bc);
  std::vector<double> f = log_chi_;
  for (std::size_t k = 0; k < boundary_bonds_.size(); ++k) {
    const auto& b = boundary_bonds_[k];
    const auto& t = boundary_tables_[k];
    for (std::size_t s = 0; s < q_; ++s) f[b.a * q_ + s] += t[s * q_ + bc.values[b.b]];
  }
  return f;
}

double LocalSpecification::log_weight(std::span<const Spin> config,
                                      const BoundaryCondition& bc) const {
  if (config.size() != vol_.delta.size()) {
    throw InvalidInput("configuration must assign every vertex of delta");
  }
  check_spins(config, q_, "configuration");
  const auto f = site_field(bc);
  double lw = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i) lw += f[i * q_ + config[i]];
  for (std::size_t k = 0; k < bonds_.size(); ++k) {
    lw += bond_tables_[k][config[bonds_[k].a] * q_ + config[bonds_[k].b]];
  }
  return lw;
}

template <class F>
void LocalSpecification::sweep(const std::vector<double>& field, F&& f) const {
  const std::size_t n = vol_.delta.size();
  Configuration c(n, 0);
  for (std::uint64_t idx = 0; idx < configs_; ++idx) {
    double lw = 0.0;
    for (std::size_t i = 0; i < n; ++i) lw += field[i * q_ + c[i]];
    for (std::size_t k = 0; k < bonds_.size(); ++k) {
      lw += bond_tables_[k][c[bonds_[k].a] * q_ + c[bonds_[k].b]];
    }
    f(idx, std::span<const Spin>(c), lw);
    for (std::size_t i = 0; i < n; ++i) {
      if (++c[i] < q_) break;
      c[i] = 0;
    }
  }
}

void LocalSpecification::for_each_configuration(const BoundaryCondition& bc,
                                                const Visitor& visit) const {
  sweep(site_field(bc), visit);
}

KernelEvaluation LocalSpecification::evaluate(const BoundaryCondition& bc) const {
  KernelEvaluation out;
  out.q = q_;
  out.configurations = configs_;
  const std::size_t n = vol_.delta.size();
  std::vector<double> acc(n * q_, 0.0);
  double shift = -kInf;
  double total = 0.0;
  sweep(site_field(bc), [&](std::uint64_t, std::span<const Spin> c, double lw) {
    if (lw > shift) {
      const double scale = shift == -kInf ? 0.0 : std::exp(shift - lw);
      total *= scale;
      for (auto& a : acc) a *= scale;
      shift = lw;
    }
    const double p = std::exp(lw - shift);
    total += p;
    for (std::size_t i = 0; i < n; ++i) acc[i * q_ + c[i]] += p;
  });
  out.log_partition = shift + std::log(total);
  for (auto& a : acc) a /= total;
  out.marginals = std::move(acc);
  return out;
}

KernelEvaluation partition(const Graph& g, const Volume& vol, const BoundaryCondition& bc,
                           const SpinModel& sm, const DisorderSample& w, double beta,
                           bool tilted, const GibbsCaps& caps) {
  return LocalSpecification(g, vol, sm, w, beta, tilted, caps).evaluate(bc);
}

double magnetization(const Graph& g, const Volume& vol, Vertex z, const BoundaryCondition& bc,
                     const SpinModel& sm, const DisorderSample& w, double beta, bool tilted,
                     const GibbsCaps& caps) {
  const std::size_t pos = require_position(vol, z);
  const auto ev = partition(g, vol, bc, sm, w, beta, tilted, caps);
  return ev.expectation(pos, sm.observables());
}

DlrReport dlr_consistency_check(const Graph& g, const VertexSet& lambda_in,
                                const VertexSet& delta_in, const SpinModel& sm,
                                const DisorderSample& w, double beta,
                                const BoundaryCondition& bc,
                                const std::vector<SiteEvent>& events_in,
                                const GibbsCaps& caps) {
  const VertexSet lambda = make_vertex_set(lambda_in);
  const VertexSet delta = make_vertex_set(delta_in);
  if (lambda.empty()) throw InvalidInput("lambda must be nonempty");
  for (Vertex v : lambda) {
    if (!contains(delta, v)) {
      throw InvalidInput("lambda is not contained in delta: vertex " + std::to_string(v));
    }
  }
  const Volume vd = boundaries(g, delta);
  const Volume vl = boundaries(g, lambda);
  const LocalSpecification sd(g, vd, sm, w, beta, false, caps);
  const LocalSpecification sl(g, vl, sm, w, beta, false, caps);
  const std::size_t q = sm.size();
  const auto ed = sd.evaluate(bc);

  struct Source {
    bool in_delta;
    std::size_t pos;
  };
  std::vector<Source> sources;
  for (Vertex y : vl.outer) {
    if (auto p = vd.position(y)) {
      sources.push_back({true, *p});
    } else {
      sources.push_back({false, *vd.outer_position(y)});
    }
  }
  std::vector<std::size_t> lpos;
  for (Vertex x : vl.delta) lpos.push_back(*vd.position(x));

  std::vector<std::uint64_t> stride(vd.delta.size(), 1);
  for (std::size_t i = 1; i < stride.size(); ++i) stride[i] = stride[i - 1] * q;
  // Offset of each lambda configuration inside a delta configuration index.
  std::vector<std::uint64_t> offsets(sl.configuration_count(), 0);
  {
    Configuration c(vl.delta.size(), 0);
    for (std::uint64_t k = 0; k < offsets.size(); ++k) {
      for (std::size_t i = 0; i < c.size(); ++i) offsets[k] += c[i] * stride[lpos[i]];
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (++c[i] < q) break;
        c[i] = 0;
      }
    }
  }

  std::vector<SiteEvent> events = events_in;
  if (events.empty()) {
    VertexSet window = delta;
    window.insert(window.end(), vd.outer.begin(), vd.outer.end());
    window = make_vertex_set(window);
    for (Vertex v : window) {
      for (std::size_t s = 0; s < q; ++s) events.push_back({v, static_cast<Spin>(s)});
    }
  }
  for (const auto& ev : events) {
    if (ev.spin >= q) throw InvalidInput("event spin outside the spin set");
    if (!vd.position(ev.site) && !vd.outer_position(ev.site)) {
      throw InvalidInput("event site " + std::to_string(ev.site) +
                         " lies outside delta and its outer boundary");
    }
  }

  struct Inner {
    std::vector<double> dist;
    KernelEvaluation kernel;
  };
  std::unordered_map<std::uint64_t, Inner> cache;
  DlrReport report;
  report.events = events.size();

  std::vector<double> lhs(events.size(), 0.0);
  std::vector<double> joint(sd.configuration_count(), 0.0);
  std::vector<double> direct(sd.configuration_count(), 0.0);
  double mass = 0.0;
  BoundaryCondition eta;
  eta.values.resize(vl.outer.size());

  sd.for_each_configuration(bc, [&](std::uint64_t idx, std::span<const Spin> c, double lw) {
    const double p = std::exp(lw - ed.log_partition);
    direct[idx] = p;
    mass += p;
    std::uint64_t key = 0;
    std::uint64_t mul = 1;
    for (std::size_t j = 0; j < sources.size(); ++j) {
      const Spin v = sources[j].in_delta ? c[sources[j].pos] : bc.values[sources[j].pos];
      eta.values[j] = v;
      key += v * mul;
      mul *= q;
    }
    auto it = cache.find(key);
    if (it == cache.end()) {
      Inner inner;
      inner.kernel = sl.evaluate(eta);
      inner.dist.resize(sl.configuration_count());
      double m = 0.0;
      sl.for_each_configuration(eta, [&](std::uint64_t k, std::span<const Spin>, double lw2) {
        inner.dist[k] = std::exp(lw2 - inner.kernel.log_partition);
        m += inner.dist[k];
      });
      report.properness_defect = std::max(report.properness_defect, std::abs(m - 1.0));
      it = cache.emplace(key, std::move(inner)).first;
    }
    const Inner& inner = it->second;

    std::uint64_t base = idx;
    for (std::size_t i = 0; i < lpos.size(); ++i) base -= c[lpos[i]] * stride[lpos[i]];
    for (std::size_t k = 0; k < inner.dist.size(); ++k) joint[base + offsets[k]] += p * inner.dist[k];

    for (std::size_t e = 0; e < events.size(); ++e) {
      const auto& ev = events[e];
      if (auto li = vl.position(ev.site)) {
        lhs[e] += p * inner.kernel.marginal(*li, ev.spin);
      } else if (auto di = vd.position(ev.site)) {
        if (c[*di] == ev.spin) lhs[e] += p;
      } else if (bc.values[*vd.outer_position(ev.site)] == ev.spin) {
        lhs[e] += p;
      }
    }
  });
  report.inner_kernels = cache.size();
  report.properness_defect = std::max(report.properness_defect, std::abs(mass - 1.0));

  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto& ev = events[e];
    double rhs = 0.0;
    if (auto di = vd.position(ev.site)) {
      rhs = ed.marginal(*di, ev.spin);
    } else {
      rhs = bc.values[*vd.outer_position(ev.site)] == ev.spin ? 1.0 : 0.0;
    }
    report.consistency_defect = std::max(report.consistency_defect, std::abs(lhs[e] - rhs));
  }
  for (std::size_t i = 0; i < joint.size(); ++i) {
    report.joint_defect = std::max(report.joint_defect, std::abs(joint[i] - direct[i]));
  }
  return report;
}

QResult compute_Q(const Graph& g, const Volume& vol, Vertex z, double beta,
                  const DisorderSample& w, const Caps& caps) {
  require_position(vol, z);
  if (contains(vol.inner, z)) {
    throw InvalidInput("vertex " + std::to_string(z) +
                       " lies on the inner boundary; Q needs an interior vertex");
  }
  if (w.size() != g.num_edges()) throw InvalidInput("disorder sample does not match the graph");
  QResult out;
  out.z = z;
  for (Vertex x : vol.inner) out.per_target.emplace_back(x, 0.0);
  std::vector<double> kappa(g.num_edges());
  for (std::size_t e = 0; e < kappa.size(); ++e) kappa[e] = edge_kappa(w.norms[e], beta);

  out.status = enumerate_simple_paths(
      g, vol.delta, z, vol.inner, vol.delta.size(), caps, [&](std::span<const Vertex> path) {
        double prod = 1.0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          prod *= kappa[*g.edge_index(path[i], path[i + 1])];
        }
        auto it = std::lower_bound(vol.inner.begin(), vol.inner.end(), path.back());
        out.per_target[static_cast<std::size_t>(it - vol.inner.begin())].second += prod;
        ++out.paths;
      });
  out.exact = out.status.complete;
  for (const auto& [x, v] : out.per_target) out.total += v;
  return out;
}

std::string to_string(BoundaryStrategy s) {
  switch (s) {
    case BoundaryStrategy::automatic: return "automatic";
    case BoundaryStrategy::exhaustive: return "exhaustive";
    case BoundaryStrategy::ascent: return "ascent";
  }
  return "unknown";
}

BoundaryStrategy boundary_strategy_from_string(const std::string& s) {
  if (s == "automatic" || s == "auto") return BoundaryStrategy::automatic;
  if (s == "exhaustive") return BoundaryStrategy::exhaustive;
  if (s == "ascent" || s == "random+ascent") return BoundaryStrategy::ascent;
  throw InvalidInput("unknown boundary strategy '" + s + "'");
}

std::vector<BoundaryGap> boundary_gaps(const LocalSpecification& spec,
                                       std::span<const std::size_t> z_positions,
                                       BoundaryStrategy strategy, const GibbsCaps& caps,
                                       std::uint64_t seed) {
  const Volume& vol = spec.volume();
  const auto& h = spec.model().observables();
  const std::uint64_t count = spec.boundary_condition_count();
  if (strategy == BoundaryStrategy::exhaustive && count > caps.max_boundary_conditions) {
    throw CapExceeded("boundary conditions |S|^|outer|", count, caps.max_boundary_conditions);
  }
  const bool exhaustive = strategy == BoundaryStrategy::exhaustive ||
                          (strategy == BoundaryStrategy::automatic &&
                           count <= caps.max_boundary_conditions);

  std::vector<BoundaryGap> out(z_positions.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (z_positions[k] >= vol.delta.size()) throw InvalidInput("z position outside delta");
    out[k].z = vol.delta[z_positions[k]];
    out[k].exhaustive = exhaustive;
    out[k].max_value = -kInf;
    out[k].min_value = kInf;
  }

  if (exhaustive) {
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      const BoundaryCondition bc = spec.boundary_condition(idx);
      const auto ev = spec.evaluate(bc);
      for (std::size_t k = 0; k < out.size(); ++k) {
        const double m = ev.expectation(z_positions[k], h);
        if (m > out[k].max_value) {
          out[k].max_value = m;
          out[k].argmax = bc;
        }
        if (m < out[k].min_value) {
          out[k].min_value = m;
          out[k].argmin = bc;
        }
        ++out[k].evaluated;
      }
    }
  } else {
    const std::size_t q = spec.q();
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (int dir : {1, -1}) {
        std::mt19937_64 rng(derive_seed(seed, 2 * k + (dir > 0 ? 0 : 1)));
        std::uniform_int_distribution<int> pick(0, static_cast<int>(q) - 1);
        auto value = [&](const BoundaryCondition& bc) {
          ++out[k].evaluated;
          return dir * spec.evaluate(bc).expectation(z_positions[k], h);
        };
        double best = -kInf;
        BoundaryCondition best_bc;
        for (unsigned r = 0; r < std::max(1u, caps.restarts); ++r) {
          BoundaryCondition bc;
          bc.values.resize(vol.outer.size());
          for (auto& v : bc.values) v = static_cast<Spin>(pick(rng));
          double current = value(bc);
          for (unsigned sweep = 0; sweep < caps.max_sweeps; ++sweep) {
            bool improved = false;
            for (std::size_t j = 0; j < bc.values.size(); ++j) {
              Spin keep = bc.values[j];
              for (std::size_t s = 0; s < q; ++s) {
                if (s == keep) continue;
                bc.values[j] = static_cast<Spin>(s);
                const double v = value(bc);
                if (v > current) {
                  current = v;
                  keep = static_cast<Spin>(s);
                  improved = true;
                }
              }
              bc.values[j] = keep;
            }
            if (!improved) break;
          }
          if (current > best) {
            best = current;
            best_bc = bc;
          }
        }
        if (dir > 0) {
          out[k].max_value = best;
          out[k].argmax = best_bc;
        } else {
          out[k].min_value = -best;
          out[k].argmin = best_bc;
        }
      }
    }
  }
  for (auto& r : out) r.gap = std::max(0.0, r.max_value - r.min_value);
  return out;
}

BoundaryGap boundary_gap(const Graph& g, const Volume& vol, Vertex z, const SpinModel& sm,
                         const DisorderSample& w, double beta, BoundaryStrategy strategy,
                         const GibbsCaps& caps, std::uint64_t seed) {
  const std::size_t pos = require_position(vol, z);
  const LocalSpecification spec(g, vol, sm, w, beta, true, caps);
  const std::size_t zp[] = {pos};
  return boundary_gaps(spec, zp, strategy, caps, seed).front();
}

std::string to_string(Lemma27Status s) {
  switch (s) {
    case Lemma27Status::proven: return "proven";
    case Lemma27Status::consistent: return "consistent";
    case Lemma27Status::violated: return "violated";
    case Lemma27Status::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

std::vector<Lemma27Report> lemma27_for(const Graph& g, const Volume& vol,
                                       const std::vector<Vertex>& zs, const SpinModel& sm,
                                       const DisorderSample& w, double beta,
                                       BoundaryStrategy strategy, const GibbsCaps& caps,
                                       std::uint64_t seed) {
  if (vol.interior.empty()) {
    throw InvalidInput("volume has an empty interior: every vertex of delta lies on the inner boundary");
  }
  std::vector<std::size_t> pos;
  for (Vertex z : zs) {
    pos.push_back(require_position(vol, z));
    if (contains(vol.inner, z)) {
      throw InvalidInput("vertex " + std::to_string(z) + " lies on the inner boundary of delta");
    }
  }
  const LocalSpecification spec(g, vol, sm, w, beta, true, caps);
  const auto gaps = boundary_gaps(spec, pos, strategy, caps, seed);
  std::vector<Lemma27Report> out;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    Lemma27Report r;
    r.z = zs[k];
    r.lhs = gaps[k].gap;
    r.exhaustive = gaps[k].exhaustive;
    r.xi = gaps[k].argmax;
    r.eta = gaps[k].argmin;
    r.q = compute_Q(g, vol, zs[k], beta, w, caps.paths);
    r.rhs = r.q.total;
    if (!r.q.exact) {
      r.status = Lemma27Status::inconclusive;
    } else if (r.lhs > r.rhs + kInequalitySlack) {
      r.status = Lemma27Status::violated;
    } else {
      r.status = r.exhaustive ? Lemma27Status::proven : Lemma27Status::consistent;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Lemma27Report verify_lemma27(const Graph& g, const Volume& vol, Vertex z, const SpinModel& sm,
                             const DisorderSample& w, double beta, BoundaryStrategy strategy,
                             const GibbsCaps& caps, std::uint64_t seed) {
  return lemma27_for(g, vol, {z}, sm, w, beta, strategy, caps, seed).front();
}

std::vector<Lemma27Report> verify_lemma27_all(const Graph& g, const Volume& vol,
                                              const SpinModel& sm, const DisorderSample& w,
                                              double beta, BoundaryStrategy strategy,
                                              const GibbsCaps& caps, std::uint64_t seed) {
  return lemma27_for(g, vol, vol.interior, sm, w, beta, strategy, caps, seed);
}

std::string to_string(ExpansionMethod m) {
  switch (m) {
    case ExpansionMethod::automatic: return "automatic";
    case ExpansionMethod::pairwise: return "pairwise";
    case ExpansionMethod::factorized: return "factorized";
  }
  return "unknown";
}

ExpansionReport verify_expansion_identity(const Graph& g, const Volume& vol,
                                          std::span<const Vertex> zs, const SpinModel& sm,
                                          const DisorderSample& w, double beta,
                                          const BoundaryCondition& xi,
                                          const BoundaryCondition& eta, ExpansionMethod method,
                                          const GibbsCaps& caps) {
  const LocalSpecification spec(g, vol, sm, w, beta, true, caps);
  const auto& bonds = spec.interior_bonds();
  const std::size_t m = bonds.size();
  if (m > caps.max_expansion_edges || m >= 63) {
    throw CapExceeded("interior edge subsets 2^|E_delta|", saturating_power(2, m),
                      saturating_power(2, caps.max_expansion_edges));
  }
  const std::size_t subsets = std::size_t{1} << m;
  const std::size_t n = vol.delta.size();
  const std::size_t q = sm.size();
  const std::uint64_t configs = spec.configuration_count();
  const auto& h = sm.observables();
  std::vector<std::size_t> zpos;
  for (Vertex z : zs) zpos.push_back(require_position(vol, z));
  const std::size_t nz = zpos.size();

  ExpansionReport report;
  report.subsets = subsets;
  const auto ev_xi = spec.evaluate(xi);
  const auto ev_eta = spec.evaluate(eta);
  report.log_scale = ev_xi.log_partition + ev_eta.log_partition;

  // Gamma_xy(s, t; s', t') = exp(beta (W + ||W|| + W' + ||W||)) - 1.
  report.min_gamma = m == 0 ? 0.0 : kInf;
  report.max_gamma_excess = m == 0 ? 0.0 : -kInf;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& t = spec.bond_table(i);
    const double kappa = edge_kappa(w.norms[bonds[i].edge], beta);
    for (std::size_t a = 0; a < q * q; ++a) {
      for (std::size_t b = 0; b < q * q; ++b) {
        const double gamma = std::expm1(t[a] + t[b]);
        report.min_gamma = std::min(report.min_gamma, gamma);
        report.max_gamma_excess = std::max(report.max_gamma_excess, gamma - kappa);
        if (gamma - kappa > 1e-12 * std::max(1.0, kappa)) report.gamma_bounded = false;
      }
    }
  }
  report.gamma_nonnegative = report.min_gamma >= 0.0;

  // Subsets whose edges do not connect z to the inner boundary.
  std::vector<std::size_t> inner_pos;
  for (Vertex x : vol.inner) inner_pos.push_back(*vol.position(x));
  std::vector<std::vector<char>> cut(nz, std::vector<char>(subsets, 0));
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    UnionFind uf(n);
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) uf.unite(bonds[i].a, bonds[i].b);
    }
    for (std::size_t k = 0; k < nz; ++k) {
      const std::size_t root = uf.find(zpos[k]);
      cut[k][mask] = std::none_of(inner_pos.begin(), inner_pos.end(),
                                  [&](std::size_t x) { return uf.find(x) == root; });
    }
  }

  // Single-copy weights with only site and boundary terms, normalized by Z~.
  std::vector<Spin> spins(configs * n);
  std::vector<double> b_xi(configs), b_eta(configs);
  {
    const auto f_xi = spec.site_field(xi);
    const auto f_eta = spec.site_field(eta);
    Configuration c(n, 0);
    for (std::uint64_t idx = 0; idx < configs; ++idx) {
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        spins[idx * n + i] = c[i];
        a += f_xi[i * q + c[i]];
        b += f_eta[i * q + c[i]];
      }
      b_xi[idx] = std::exp(a - ev_xi.log_partition);
      b_eta[idx] = std::exp(b - ev_eta.log_partition);
      for (std::size_t i = 0; i < n; ++i) {
        if (++c[i] < q) break;
        c[i] = 0;
      }
    }
  }

  const std::uint64_t pair_work =
      configs > (1ULL << 31) ? std::numeric_limits<std::uint64_t>::max()
                             : std::min<std::uint64_t>(std::numeric_limits<std::uint64_t>::max() / subsets,
                                                       configs * configs) * subsets;
  if (method == ExpansionMethod::pairwise && pair_work > caps.max_pairwise_work) {
    throw CapExceeded("pairwise expansion work", pair_work, caps.max_pairwise_work);
  }
  const bool pairwise = method == ExpansionMethod::pairwise ||
                        (method == ExpansionMethod::automatic && pair_work <= caps.max_pairwise_work);
  report.method = pairwise ? "pairwise" : "factorized";

  std::vector<std::vector<double>> terms(nz, std::vector<double>(subsets, 0.0));
  std::vector<double> prod(subsets);
  auto fill_products = [&](auto factor) {
    prod[0] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double f = factor(i);
      const std::size_t half = std::size_t{1} << i;
      for (std::size_t mask = 0; mask < half; ++mask) prod[mask | half] = prod[mask] * f;
    }
  };

  if (pairwise) {
    std::vector<double> d(nz);
    for (std::uint64_t c1 = 0; c1 < configs; ++c1) {
      const Spin* s1 = &spins[c1 * n];
      for (std::uint64_t c2 = 0; c2 < configs; ++c2) {
        const Spin* s2 = &spins[c2 * n];
        bool any = false;
        for (std::size_t k = 0; k < nz; ++k) {
          d[k] = h[s1[zpos[k]]] - h[s2[zpos[k]]];
          any = any || d[k] != 0.0;
        }
        if (!any) continue;
        const double wgt = b_xi[c1] * b_eta[c2];
        fill_products([&](std::size_t i) {
          const auto& t = spec.bond_table(i);
          return std::expm1(t[s1[bonds[i].a] * q + s1[bonds[i].b]] +
                            t[s2[bonds[i].a] * q + s2[bonds[i].b]]);
        });
        for (std::size_t k = 0; k < nz; ++k) {
          if (d[k] == 0.0) continue;
          const double c = wgt * d[k];
          double* out = terms[k].data();
          for (std::size_t mask = 0; mask < subsets; ++mask) out[mask] += c * prod[mask];
        }
      }
    }
  } else {
    // P(F) = A_F(xi) Z_F(eta) - Z_F(xi) A_F(eta) sums T(E') over E' in F;
    // Moebius inversion recovers the individual terms.
    const bool same = xi == eta;
    std::vector<double> z_xi(subsets, 0.0), z_eta(subsets, 0.0);
    std::vector<std::vector<double>> a_xi(nz, std::vector<double>(subsets, 0.0));
    std::vector<std::vector<double>> a_eta(nz, std::vector<double>(subsets, 0.0));
    for (std::uint64_t c = 0; c < configs; ++c) {
      const Spin* s = &spins[c * n];
      fill_products([&](std::size_t i) {
        return std::exp(spec.bond_table(i)[s[bonds[i].a] * q + s[bonds[i].b]]);
      });
      const double bx = b_xi[c];
      const double be = b_eta[c];
      for (std::size_t mask = 0; mask < subsets; ++mask) z_xi[mask] += bx * prod[mask];
      if (!same) {
        for (std::size_t mask = 0; mask < subsets; ++mask) z_eta[mask] += be * prod[mask];
      }
      for (std::size_t k = 0; k < nz; ++k) {
        const double hv = h[s[zpos[k]]];
        if (hv == 0.0) continue;
        double* ax = a_xi[k].data();
        for (std::size_t mask = 0; mask < subsets; ++mask) ax[mask] += bx * hv * prod[mask];
        if (!same) {
          double* ae = a_eta[k].data();
          for (std::size_t mask = 0; mask < subsets; ++mask) ae[mask] += be * hv * prod[mask];
        }
      }
    }
    if (same) {
      z_eta = z_xi;
      a_eta = a_xi;
    }
    for (std::size_t k = 0; k < nz; ++k) {
      auto& p = terms[k];
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        p[mask] = a_xi[k][mask] * z_eta[mask] - z_xi[mask] * a_eta[k][mask];
      }
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t mask = 0; mask < subsets; ++mask) {
          if (mask & bit) p[mask] -= p[mask ^ bit];
        }
      }
    }
  }

  for (std::size_t k = 0; k < nz; ++k) {
    ExpansionSite site;
    site.z = vol.delta[zpos[k]];
    site.direct = ev_xi.expectation(zpos[k], h) - ev_eta.expectation(zpos[k], h);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      site.expanded += terms[k][mask];
      if (cut[k][mask]) {
        site.max_disconnected_term = std::max(site.max_disconnected_term, std::abs(terms[k][mask]));
      }
    }
    site.defect = std::abs(site.expanded - site.direct);
    report.max_defect = std::max(report.max_defect, site.defect);
    report.sites.push_back(site);
  }
  return report;
}

}  // namespace gibbscert
