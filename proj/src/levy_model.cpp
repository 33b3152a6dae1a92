#include "lastzero/levy_model.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <sstream>

#include "lastzero/errors.hpp"
#include "lastzero/roots.hpp"

namespace lastzero {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void validate(const BrownianDrift& p) {
  if (!finite_positive(p.mu)) throw InvalidInput("BrownianDrift: mu must be > 0 (drift to +infinity)");
  if (!finite_positive(p.sigma)) throw InvalidInput("BrownianDrift: sigma must be > 0");
}

void validate(const CramerLundberg& p) {
  if (!finite_positive(p.mu)) throw InvalidInput("CramerLundberg: mu must be > 0");
  if (!finite_positive(p.lambda)) throw InvalidInput("CramerLundberg: lambda must be > 0");
  if (!finite_positive(p.rho)) throw InvalidInput("CramerLundberg: rho must be > 0");
  if (!(p.lambda / (p.rho * p.mu) < 1.0)) {
    throw InvalidInput("CramerLundberg: requires lambda/(rho*mu) < 1 (drift to +infinity)");
  }
}

void validate(const BetaFamily& p) {
  if (!(std::isfinite(p.beta) && p.beta > 1.0 && p.beta <= 2.0)) {
    throw InvalidInput("BetaFamily: beta must lie in (1, 2]");
  }
}

// Gamma(theta + beta) / (Gamma(theta + 1) Gamma(beta)); psi = theta * ratio.
double beta_ratio(double beta, double theta) {
  return std::exp(std::lgamma(theta + beta) - std::lgamma(theta + 1.0) - std::lgamma(beta));
}

}  // namespace

LevyModel::LevyModel(Params params) : params_(params) {
  std::visit([](const auto& p) { validate(p); }, params_);
}

std::string LevyModel::family() const {
  return std::visit(overloaded{[](const BrownianDrift&) { return std::string("bm"); },
                               [](const CramerLundberg&) { return std::string("cl"); },
                               [](const BetaFamily&) { return std::string("beta"); }},
                    params_);
}

std::string LevyModel::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const BrownianDrift& p) {
                          os << "BrownianDrift(mu=" << p.mu << ", sigma=" << p.sigma << ")";
                        },
                        [&](const CramerLundberg& p) {
                          os << "CramerLundberg(mu=" << p.mu << ", lambda=" << p.lambda
                             << ", rho=" << p.rho << ")";
                        },
                        [&](const BetaFamily& p) { os << "BetaFamily(beta=" << p.beta << ")"; }},
             params_);
  return os.str();
}

double psi(const LevyModel& model, double theta) {
  if (!(theta >= 0.0)) throw DomainError("psi: theta must be >= 0");
  if (theta == 0.0) return 0.0;
  return std::visit(
      overloaded{[&](const BrownianDrift& p) { return 0.5 * p.sigma * p.sigma * theta * theta + p.mu * theta; },
                 [&](const CramerLundberg& p) { return p.mu * theta - p.lambda * theta / (p.rho + theta); },
                 [&](const BetaFamily& p) { return theta * beta_ratio(p.beta, theta); }},
      model.params());
}

double psi_prime(const LevyModel& model, double theta) {
  if (!(theta >= 0.0)) throw DomainError("psi_prime: theta must be >= 0");
  return std::visit(overloaded{[&](const BrownianDrift& p) { return p.sigma * p.sigma * theta + p.mu; },
                               [&](const CramerLundberg& p) {
                                 const double s = p.rho + theta;
                                 return p.mu - p.lambda * p.rho / (s * s);
                               },
                               [&](const BetaFamily& p) {
                                 using boost::math::digamma;
                                 const double r = beta_ratio(p.beta, theta);
                                 return r * (1.0 + theta * (digamma(theta + p.beta) - digamma(theta + 1.0)));
                               }},
                    model.params());
}

PsiDerivatives psi_derivatives(const LevyModel& model) {
  return std::visit(
      overloaded{[](const BrownianDrift& p) { return PsiDerivatives{p.mu, p.sigma * p.sigma}; },
                 [](const CramerLundberg& p) {
                   return PsiDerivatives{p.mu - p.lambda / p.rho, 2.0 * p.lambda / (p.rho * p.rho)};
                 },
                 [](const BetaFamily& p) {
                   // psi = theta R(theta) with R(0) = 1 and R'/R = digamma(theta+beta) - digamma(theta+1)
                   using boost::math::digamma;
                   return PsiDerivatives{1.0, 2.0 * (digamma(p.beta) - digamma(1.0))};
                 }},
      model.params());
}

double phi(const LevyModel& model, double q, double tol) {
  if (!(q >= 0.0)) throw DomainError("phi: q must be >= 0");
  if (!(tol > 0.0)) throw DomainError("phi: tol must be > 0");
  if (q == 0.0) return 0.0;

  double hi = 1.0;
  int doublings = 0;
  while (psi(model, hi) <= q) {
    hi *= 2.0;
    if (++doublings > 1000 || !std::isfinite(hi)) {
      throw NumericError("phi: could not bracket psi(theta) = q for q=" + std::to_string(q));
    }
  }
  auto f_df = [&](double theta) { return std::pair{psi(model, theta) - q, psi_prime(model, theta)}; };
  return roots::safeguarded_newton(f_df, 0.0, hi, tol, 200);
}

PhiDerivatives phi_derivs0(const LevyModel& model) {
  const auto [p1, p2] = psi_derivatives(model);
  return {1.0 / p1, -p2 / (p1 * p1 * p1)};
}

ModelProfile profile(const LevyModel& model) {
  const auto [p1, p2] = psi_derivatives(model);
  ModelProfile out{p1, p2, PathVariation::Infinite, std::nullopt, 0.0};
  if (const auto* cl = model.as<CramerLundberg>()) {
    out.variation = PathVariation::Finite;
    out.drift_d = cl->mu;
    out.F0 = p1 / cl->mu;
  }
  return out;
}

}  // namespace lastzero
