#include "lastzero/optimal_rule.hpp"

#include <algorithm>
#include <cmath>

#include "lastzero/errors.hpp"
#include "lastzero/roots.hpp"

namespace lastzero {

std::string to_string(FitRegime r) { return r == FitRegime::SmoothFit ? "SmoothFit" : "ContinuousFitOnly"; }

OptimalRule solve_a_star(const ScaleEvaluator& ev, const ConvolutionTable& table, double tol) {
  if (!(tol > 0.0)) throw DomainError("solve_a_star: tol must be > 0");
  const auto& prof = ev.profile();
  OptimalRule rule{0.0, ev.x0(), FitRegime::ContinuousFitOnly, expected_g(ev.model(), 0.0), 0.0, table};

  if (prof.variation == PathVariation::Finite && prof.F0 * prof.F0 >= 0.5) {
    rule.H_at_a_star = H_eval(ev, table.method, 0.0, table.quad_tol);
    return rule;
  }
  if (!(table.values.back() > 0.5)) {
    throw NumericError("solve_a_star: table too short, H(x_max) <= 1/2 at x_max=" + std::to_string(table.x_max()));
  }

  auto reaches_half = [&](double x) { return H_eval(ev, table.method, x, table.quad_tol) >= 0.5; };
  const auto it = std::lower_bound(table.values.begin(), table.values.end(), 0.5);
  auto i = static_cast<std::size_t>(it - table.values.begin());
  double lo = table.grid[i == 0 ? 0 : i - 1];
  double hi = table.grid[i];
  // node values went through a running max; re-check against H itself
  while (lo > 0.0 && reaches_half(lo)) lo = std::max(0.0, lo - table.step());
  while (!reaches_half(hi)) hi += table.step();

  const auto bracket = roots::bisect_first_true(reaches_half, lo, hi, tol);
  rule.a_star = 0.5 * (bracket.lo + bracket.hi);
  rule.regime = FitRegime::SmoothFit;
  rule.H_at_a_star = H_eval(ev, table.method, rule.a_star, table.quad_tol);
  return rule;
}

OptimalRule solve(const ScaleEvaluator& ev, double quad_tol, double tol, unsigned threads) {
  double x_max = default_table_extent(ev);
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (H_eval(ev, preferred_method(ev.model()), x_max, quad_tol) > 0.55) break;
    x_max *= 2.0;
  }
  const auto table = build_table(ev, x_max, 2001, quad_tol, threads);
  return solve_a_star(ev, table, tol);
}

double V_a_at(const ScaleEvaluator& ev, const ConvolutionTable& table, double a, double x) {
  if (x >= a) return 0.0;
  return 2.0 * integrate_excess(ev, table, x, a) / ev.profile().psi_prime0;
}

double V_at(const ScaleEvaluator& ev, const OptimalRule& rule, double x) {
  return V_a_at(ev, rule.table, rule.a_star, x);
}

double V_prime_at(const ScaleEvaluator& ev, const OptimalRule& rule, double x) {
  if (x > rule.a_star) return 0.0;
  if (x == rule.a_star && rule.regime == FitRegime::ContinuousFitOnly) {
    throw DomainError("V_prime_at: V has a kink at a_star in the continuous-fit regime");
  }
  const double h = H_eval(ev, rule.table.method, x, rule.table.quad_tol);
  return (1.0 - 2.0 * h) / ev.profile().psi_prime0;
}

ValueCurve value_curve(const ScaleEvaluator& ev, const ConvolutionTable& table, double a, std::span<const double> xs) {
  ValueCurve c{{xs.begin(), xs.end()}, {}, {}, a};
  c.V.reserve(xs.size());
  for (double x : xs) c.V.push_back(V_a_at(ev, table, a, x));
  return c;
}

ValueCurve value_curve(const ScaleEvaluator& ev, const OptimalRule& rule, std::span<const double> xs) {
  auto c = value_curve(ev, rule.table, rule.a_star, xs);
  c.V_prime.reserve(xs.size());
  for (double x : xs) {
    // the kink point gets its left derivative
    const double xl = (x == rule.a_star && rule.regime == FitRegime::ContinuousFitOnly) ? std::nextafter(x, -1e300) : x;
    c.V_prime.push_back(V_prime_at(ev, rule, xl));
  }
  return c;
}

double expected_g(const LevyModel& model, double x) {
  const auto [p1, p2] = psi_derivatives(model);
  // -psi'(0+) [Phi''(0) + x Phi'(0)^2] with Phi'(0) = 1/p1, Phi''(0) = -p2/p1^3
  const double base = p2 / (p1 * p1) - x / p1;
  if (x <= 0.0) return base;  // W^{(q)}(x) = 0 for every q
  const auto* bm = model.as<BrownianDrift>();
  if (bm == nullptr) {
    throw UnsupportedModel("expected_g: x > 0 needs d/dq W^{(q)}, available only for BrownianDrift");
  }
  return p1 * W_q_brownian_dq(bm->mu, bm->sigma, 0.0, x) + base;
}

double expected_tau_plus(const LevyModel& model, double a) {
  if (!(a >= 0.0)) throw DomainError("expected_tau_plus: a must be >= 0");
  return a / psi_derivatives(model).psi_prime0;
}

double mean_abs_error(const ScaleEvaluator& ev, const ConvolutionTable& table, double a) {
  return V_a_at(ev, table, a, 0.0) + expected_g(ev.model(), 0.0);
}

double laplace_g_brownian(double mu, double sigma, double q, double x) {
  if (!(mu > 0.0 && sigma > 0.0)) throw InvalidInput("laplace_g_brownian: mu and sigma must be > 0");
  if (!(q >= 0.0)) throw DomainError("laplace_g_brownian: q must be >= 0");
  const double s2 = sigma * sigma;
  const double delta = std::sqrt(mu * mu + 2.0 * q * s2);
  const double phi_q = (delta - mu) / s2;
  const double phi_prime_q = 1.0 / delta;  // 1 / psi'(Phi(q))
  const double w_diff = W_q_brownian(mu, sigma, 0.0, x) - W_q_brownian(mu, sigma, q, x);
  return std::exp(phi_q * x) * phi_prime_q * mu + mu * w_diff;
}

double laplace_g(const LevyModel& model, double q, double x) {
  const auto* bm = model.as<BrownianDrift>();
  if (bm == nullptr) throw UnsupportedModel("laplace_g: closed form only for BrownianDrift");
  return laplace_g_brownian(bm->mu, bm->sigma, q, x);
}

}  // namespace lastzero
