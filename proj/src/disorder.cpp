#include "gibbscert/disorder.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gibbscert/errors.hpp"

namespace gibbscert {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_positive(double p, const char* what) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw InvalidInput(std::string(what) + " must be a positive finite number");
  }
}

}  // namespace

NormDistribution NormDistribution::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return {Family::exponential, rate};
}

NormDistribution NormDistribution::uniform(double upper) {
  require_positive(upper, "uniform upper bound");
  return {Family::uniform, upper};
}

NormDistribution NormDistribution::half_normal(double scale) {
  require_positive(scale, "half-normal scale");
  return {Family::half_normal, scale};
}

NormDistribution NormDistribution::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidInput("constant norm must be a nonnegative finite number");
  }
  return {Family::constant, value};
}

std::string NormDistribution::family_name() const {
  switch (family_) {
    case Family::exponential: return "exponential";
    case Family::uniform: return "uniform";
    case Family::half_normal: return "half_normal";
    case Family::constant: return "constant";
  }
  return "unknown";
}

std::string NormDistribution::parameter_name() const {
  switch (family_) {
    case Family::exponential: return "rate";
    case Family::uniform: return "upper";
    case Family::half_normal: return "scale";
    case Family::constant: return "value";
  }
  return "param";
}

double NormDistribution::mgf_domain_sup() const {
  return family_ == Family::exponential ? param_ : std::numeric_limits<double>::infinity();
}

double NormDistribution::mgf_minus_one(double t) const {
  if (!(t >= 0.0)) throw InvalidInput("mgf argument must be nonnegative");
  switch (family_) {
    case Family::exponential:
      if (t >= param_) {
        throw DomainError("moment explosion: exponential(" + std::to_string(param_) +
                          ") has no finite mgf at t = " + std::to_string(t));
      }
      return t / (param_ - t);
    case Family::uniform: {
      const double x = t * param_;
      if (x < 1e-4) return x / 2 + x * x / 6 + x * x * x / 24 + x * x * x * x / 120;
      return (std::expm1(x) - x) / x;
    }
    case Family::half_normal: {
      // E[e^{tX}] = e^{a} erfc(-b), a = s^2 t^2 / 2, b = s t / sqrt 2.
      const double a = 0.5 * param_ * param_ * t * t;
      const double b = param_ * t / std::numbers::sqrt2;
      return std::expm1(a) * std::erfc(-b) + std::erf(b);
    }
    case Family::constant: return std::expm1(t * param_);
  }
  return 0.0;
}

double NormDistribution::mgf(double t) const { return 1.0 + mgf_minus_one(t); }

double NormDistribution::mean() const {
  switch (family_) {
    case Family::exponential: return 1.0 / param_;
    case Family::uniform: return param_ / 2.0;
    case Family::half_normal: return param_ * std::sqrt(2.0 / std::numbers::pi);
    case Family::constant: return param_;
  }
  return 0.0;
}

double NormDistribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  switch (family_) {
    case Family::exponential: return -std::expm1(-param_ * x);
    case Family::uniform: return x >= param_ ? 1.0 : x / param_;
    case Family::half_normal: return std::erf(x / (param_ * std::numbers::sqrt2));
    case Family::constant: return x >= param_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double edge_kappa(double norm, double beta) { return std::expm1(4.0 * beta * norm); }

double mean_kappa(const NormDistribution& d, double beta) {
  if (!(beta >= 0.0)) throw InvalidInput("beta must be nonnegative");
  return d.mgf_minus_one(4.0 * beta);
}

double regime_product(const NormDistribution& d, double gamma, double beta) {
  return mean_kappa(d, beta) * std::exp(gamma);
}

BetaStar beta_star(const NormDistribution& d, double gamma, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  BetaStar out;
  out.target_kappa = std::exp(-gamma);
  const double target = out.target_kappa;

  double lo = 0.0;
  double hi = 0.0;
  const double sup = d.mgf_domain_sup();
  if (std::isfinite(sup)) {
    // kappa -> inf as 4 beta -> rate, so the target is always inside.
    hi = sup / 4.0;
  } else {
    hi = 1.0;
    double kappa_hi = mean_kappa(d, hi);
    while (!(kappa_hi >= target)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e8 || !std::isfinite(kappa_hi)) {
        throw DomainError("kappa never reaches e^{-gamma} = " + std::to_string(target) +
                          "; supremum of attainable kappa is " + std::to_string(kappa_hi));
      }
      kappa_hi = mean_kappa(d, hi);
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++out.iterations;
    const double k = mean_kappa(d, mid);
    (k < target ? lo : hi) = mid;
  }
  out.beta = 0.5 * (lo + hi);
  out.kappa = mean_kappa(d, out.beta);
  return out;
}

std::string to_string(SignMode m) {
  return m == SignMode::all_positive ? "all_positive" : "rademacher";
}

SignMode sign_mode_from_string(const std::string& s) {
  if (s == "all_positive" || s == "all-positive") return SignMode::all_positive;
  if (s == "rademacher") return SignMode::rademacher;
  throw InvalidInput("unknown sign mode '" + s + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

std::mt19937_64 edge_stream(std::uint64_t seed, std::uint64_t edge_id) {
  return std::mt19937_64(derive_seed(seed, edge_id));
}

DisorderSample sample_disorder(const NormDistribution& d, const Graph& g, SignMode sign_mode,
                               std::uint64_t seed) {
  DisorderSample s;
  s.distribution = d;
  s.sign_mode = sign_mode;
  s.seed = seed;
  s.norms.resize(g.num_edges());
  s.signs.assign(g.num_edges(), 1);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto stream = edge_stream(seed, e);
    s.norms[e] = d.sample(stream);
    if (sign_mode == SignMode::rademacher) s.signs[e] = (stream() >> 63) ? 1 : -1;
  }
  return s;
}

DisorderSample uniform_disorder(const Graph& g, double norm) {
  DisorderSample s;
  s.distribution = NormDistribution::constant(norm);
  s.norms.assign(g.num_edges(), norm);
  s.signs.assign(g.num_edges(), 1);
  return s;
}

}  // namespace gibbscert
