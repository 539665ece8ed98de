#include "gibbscert/spin_model.hpp"

#include <algorithm>
#include <cmath>

#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

void check_weights(const std::vector<double>& w, std::size_t q) {
  if (w.size() != q) throw InvalidInput("weights must have one entry per spin");
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("single-site weights must be positive");
  }
}

void check_observable(const std::vector<double>& h, std::size_t q) {
  if (h.size() != q) throw InvalidInput("observable must have one entry per spin");
  for (double x : h) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("observable values must lie in [0, 1]");
  }
}

}  // namespace

SpinModel::SpinModel(std::string name, std::vector<double> values, std::vector<double> coupling,
                     std::vector<double> weights, std::vector<double> observable)
    : name_(std::move(name)),
      values_(std::move(values)),
      coupling_(std::move(coupling)),
      weights_(std::move(weights)),
      observable_(std::move(observable)) {
  const std::size_t q = values_.size();
  if (q == 0 || q > 255) throw InvalidInput("spin set must have between 1 and 255 values");
  if (coupling_.size() != q * q) throw InvalidInput("coupling template must be q x q");
  double max_abs = 0.0;
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      if (coupling_[a * q + b] != coupling_[b * q + a]) {
        throw InvalidInput("coupling template must be symmetric");
      }
      max_abs = std::max(max_abs, std::abs(coupling_[a * q + b]));
    }
  }
  if (max_abs != 1.0) throw InvalidInput("coupling template must attain max |K| = 1");
  check_weights(weights_, q);
  check_observable(observable_, q);
}

SpinModel SpinModel::ising() {
  return SpinModel("ising", {-1.0, 1.0}, {1.0, -1.0, -1.0, 1.0}, {1.0, 1.0}, {0.0, 1.0});
}

SpinModel SpinModel::spin_one() {
  std::vector<double> v{-1.0, 0.0, 1.0};
  std::vector<double> k(9);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) k[a * 3 + b] = v[a] * v[b] + 0.0;
  }
  return SpinModel("spin_one", v, k, {1.0, 1.0, 1.0}, {0.0, 0.0, 1.0});
}

SpinModel SpinModel::potts(std::size_t q) {
  if (q < 2) throw InvalidInput("potts model needs q >= 2");
  std::vector<double> v(q);
  std::vector<double> k(q * q, 0.0);
  std::vector<double> h(q, 0.0);
  for (std::size_t a = 0; a < q; ++a) {
    v[a] = static_cast<double>(a);
    k[a * q + a] = 1.0;
  }
  h[0] = 1.0;
  return SpinModel("potts" + std::to_string(q), v, k, std::vector<double>(q, 1.0), h);
}

SpinModel SpinModel::interval_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2) throw InvalidInput("interval grid needs lo < hi and n >= 2");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const double m = std::max(std::abs(lo), std::abs(hi));
  std::vector<double> k(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) k[a * n + b] = (v[a] * v[b]) / (m * m);
  }
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = (v[i] - lo) / (hi - lo);
  return SpinModel("interval_grid", v, k, std::vector<double>(n, 1.0), h);
}

double SpinModel::weight(Vertex x, Spin s) const {
  if (!site_weights_.empty()) {
    auto it = site_weights_.find(x);
    if (it != site_weights_.end()) return it->second.at(s);
  }
  return weights_.at(s);
}

bool SpinModel::uniform_weights() const {
  return site_weights_.empty() &&
         std::all_of(weights_.begin(), weights_.end(),
                     [&](double w) { return w == weights_.front(); });
}

SpinModel SpinModel::with_observable(std::vector<double> h) const {
  check_observable(h, size());
  SpinModel copy = *this;
  copy.observable_ = std::move(h);
  return copy;
}

SpinModel SpinModel::with_site_weights(Vertex x, std::vector<double> weights) const {
  check_weights(weights, size());
  SpinModel copy = *this;
  copy.site_weights_[x] = std::move(weights);
  return copy;
}

SpinModel parse_spin_model(const std::string& spec) {
  if (spec == "ising") return SpinModel::ising();
  if (spec == "spin_one" || spec == "spin-one") return SpinModel::spin_one();
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  try {
    if (parts[0] == "potts" && parts.size() == 2) return SpinModel::potts(std::stoul(parts[1]));
    if (parts[0] == "grid" && parts.size() == 4) {
      return SpinModel::interval_grid(std::stod(parts[1]), std::stod(parts[2]), std::stoul(parts[3]));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("bad number in spin model spec '" + spec + "'");
  }
  throw InvalidInput("unknown spin model '" + spec + "'");
}

}  // namespace gibbscert
