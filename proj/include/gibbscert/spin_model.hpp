#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gibbscert/graph.hpp"

namespace gibbscert {

/// Index into a SpinModel's finite spin set.
using Spin = std::uint8_t;

/// Finite spin space with single-site weights, a coupling template K and an
/// observable h. The realized interaction on an edge is
/// W_xy(s, s') = sign * norm * K(s, s') with max |K| = 1 attained, so the sup
/// norm of W_xy equals the sampled norm.
class SpinModel {
 public:
  /// Validates: q >= 1, K symmetric with max |K| == 1, weights > 0, h in [0, 1].
  SpinModel(std::string name, std::vector<double> values, std::vector<double> coupling,
            std::vector<double> weights, std::vector<double> observable);

  /// S = {-1, +1}, K(s, s') = s s', h = indicator of +1.
  static SpinModel ising();
  /// S = {-1, 0, +1}, K(s, s') = s s', h = indicator of +1.
  static SpinModel spin_one();
  /// q-state Potts: K(s, s') = [s == s'], h = indicator of state 0.
  static SpinModel potts(std::size_t q);
  /// Uniform grid of n points on [lo, hi], K(s, s') = s s' / max|s|^2,
  /// h(s) = (s - lo) / (hi - lo).
  static SpinModel interval_grid(double lo, double hi, std::size_t n);

  const std::string& name() const { return name_; }
  std::size_t size() const { return values_.size(); }
  double value(Spin s) const { return values_.at(s); }
  double coupling(Spin a, Spin b) const { return coupling_[a * size() + b]; }
  double observable(Spin s) const { return observable_.at(s); }

  /// chi_x(s); site overrides take precedence over the default weights.
  double weight(Vertex x, Spin s) const;
  bool has_site_weights() const { return !site_weights_.empty(); }
  /// True when every site uses identical weights that are all equal.
  bool uniform_weights() const;

  SpinModel with_observable(std::vector<double> h) const;
  SpinModel with_site_weights(Vertex x, std::vector<double> weights) const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& coupling_matrix() const { return coupling_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& observables() const { return observable_; }
  const std::map<Vertex, std::vector<double>>& site_weights() const { return site_weights_; }

 private:
  std::string name_;
  std::vector<double> values_;
  std::vector<double> coupling_;
  std::vector<double> weights_;
  std::vector<double> observable_;
  std::map<Vertex, std::vector<double>> site_weights_;
};

/// ising, spin_one, potts:Q, grid:LO:HI:N.
SpinModel parse_spin_model(const std::string& spec);

}  // namespace gibbscert
