#include "lastzero/scale_function.hpp"

#include <cmath>
#include <limits>

#include "lastzero/errors.hpp"

namespace lastzero {
namespace {

// Exponential-claims constants: F(x) = 1 - c exp(-kappa x) on [0, inf).
struct ClConstants {
  double c;
  double kappa;
};

ClConstants cl_constants(const CramerLundberg& p) {
  return {p.lambda / (p.mu * p.rho), p.rho - p.lambda / p.mu};
}

double bm_rate(const BrownianDrift& p) { return 2.0 * p.mu / (p.sigma * p.sigma); }

}  // namespace

ScaleEvaluator::ScaleEvaluator(LevyModel model) : model_(std::move(model)), profile_(lastzero::profile(model_)) {}

double ScaleEvaluator::W(double x) const {
  if (x < 0.0) return 0.0;
  if (const auto* bm = model_.as<BrownianDrift>()) {
    return -std::expm1(-bm_rate(*bm) * x) / bm->mu;
  }
  if (const auto* cl = model_.as<CramerLundberg>()) {
    const auto [c, kappa] = cl_constants(*cl);
    return (1.0 - c * std::exp(-kappa * x)) / profile_.psi_prime0;
  }
  const double beta = model_.as<BetaFamily>()->beta;
  return std::pow(-std::expm1(-x), beta - 1.0);
}

double ScaleEvaluator::W_prime(double x) const {
  if (x < 0.0) throw DomainError("W_prime: x must be >= 0");
  if (const auto* bm = model_.as<BrownianDrift>()) {
    return 2.0 / (bm->sigma * bm->sigma) * std::exp(-bm_rate(*bm) * x);
  }
  if (const auto* cl = model_.as<CramerLundberg>()) {
    const auto [c, kappa] = cl_constants(*cl);
    return c * kappa * std::exp(-kappa * x) / profile_.psi_prime0;
  }
  const double beta = model_.as<BetaFamily>()->beta;
  if (x == 0.0) {
    if (beta == 2.0) return 1.0;
    throw DomainError("W_prime: unbounded at 0 for beta < 2");
  }
  return (beta - 1.0) * std::pow(-std::expm1(-x), beta - 2.0) * std::exp(-x);
}

double ScaleEvaluator::F(double x) const {
  if (x < 0.0) return 0.0;
  if (const auto* cl = model_.as<CramerLundberg>()) {
    const auto [c, kappa] = cl_constants(*cl);
    return 1.0 - c * std::exp(-kappa * x);
  }
  return profile_.psi_prime0 * W(x);
}

double ScaleEvaluator::F_inverse(double p) const {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("F_inverse: p must lie in [0, 1)");
  if (const auto* bm = model_.as<BrownianDrift>()) {
    return -std::log1p(-p) / bm_rate(*bm);
  }
  if (const auto* cl = model_.as<CramerLundberg>()) {
    const auto [c, kappa] = cl_constants(*cl);
    if (p <= 1.0 - c) return 0.0;
    return std::log(c / (1.0 - p)) / kappa;
  }
  const double beta = model_.as<BetaFamily>()->beta;
  if (p == 0.0) return 0.0;
  return -std::log1p(-std::pow(p, 1.0 / (beta - 1.0)));
}

double ScaleEvaluator::decay_rate() const {
  if (const auto* bm = model_.as<BrownianDrift>()) return bm_rate(*bm);
  if (const auto* cl = model_.as<CramerLundberg>()) return cl_constants(*cl).kappa;
  return 1.0;
}

ScaleTable tabulate(const ScaleEvaluator& ev, std::span<const double> xs) {
  ScaleTable t;
  t.x.assign(xs.begin(), xs.end());
  t.W.reserve(xs.size());
  t.F.reserve(xs.size());
  t.G.reserve(xs.size());
  for (double x : xs) {
    t.W.push_back(ev.W(x));
    t.F.push_back(ev.F(x));
    t.G.push_back(ev.G(x));
  }
  return t;
}

double W_q_brownian(double mu, double sigma, double q, double x) {
  if (!(mu > 0.0 && sigma > 0.0)) throw InvalidInput("W_q_brownian: mu and sigma must be > 0");
  if (!(q >= 0.0)) throw DomainError("W_q_brownian: q must be >= 0");
  if (x < 0.0) return 0.0;
  const double s2 = sigma * sigma;
  const double delta = std::sqrt(mu * mu + 2.0 * q * s2);
  // (e^{(delta-mu)x/s2} - e^{-(delta+mu)x/s2}) / delta, factored to keep q = 0 exact
  return std::exp((delta - mu) * x / s2) * -std::expm1(-2.0 * delta * x / s2) / delta;
}

double W_q_brownian_dq(double mu, double sigma, double q, double x) {
  if (!(mu > 0.0 && sigma > 0.0)) throw InvalidInput("W_q_brownian_dq: mu and sigma must be > 0");
  if (!(q >= 0.0)) throw DomainError("W_q_brownian_dq: q must be >= 0");
  if (x < 0.0) return 0.0;
  const double s2 = sigma * sigma;
  const double delta = std::sqrt(mu * mu + 2.0 * q * s2);
  const double e_up = std::exp((delta - mu) * x / s2);
  const double e_down = std::exp(-(delta + mu) * x / s2);
  const double w = W_q_brownian(mu, sigma, q, x);
  // d delta / dq = s2 / delta
  return (x * (e_up + e_down) - s2 * w) / (delta * delta);
}

double W_q(const LevyModel& model, double q, double x) {
  const auto* bm = model.as<BrownianDrift>();
  if (bm == nullptr) throw UnsupportedModel("W_q: closed form only for BrownianDrift, got " + model.describe());
  return W_q_brownian(bm->mu, bm->sigma, q, x);
}

}  // namespace lastzero
