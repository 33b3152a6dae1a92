#pragma once

#include <span>
#include <string>
#include <vector>

#include "lastzero/convolution.hpp"

namespace lastzero {

enum class FitRegime { SmoothFit, ContinuousFitOnly };

std::string to_string(FitRegime r);

inline constexpr double kDefaultAStarTol = 1e-10;

/// The optimal threshold rule "stop at the first passage above a_star".
struct OptimalRule {
  double a_star;
  double x0;
  FitRegime regime;
  double expected_g;   // E(g) started from 0
  double H_at_a_star;
  ConvolutionTable table;
};

struct ValueCurve {
  std::vector<double> x;
  std::vector<double> V;
  std::vector<double> V_prime;  // empty unless requested
  double threshold;
};

/// Median of H. Finite-variation models with F(0)^2 >= 1/2 (ties included)
/// stop immediately above zero: a_star = 0, ContinuousFitOnly. Otherwise the
/// table brackets the root of H = 1/2 and bisection on H itself narrows the
/// bracket to `tol`. Throws NumericError if the table ends with H <= 1/2.
OptimalRule solve_a_star(const ScaleEvaluator& ev, const ConvolutionTable& table, double tol = kDefaultAStarTol);

/// Builds a table over default_table_extent (doubling it while H(x_max) <= 0.55)
/// and solves for a_star.
OptimalRule solve(const ScaleEvaluator& ev, double quad_tol = kDefaultQuadTol, double tol = kDefaultAStarTol,
                  unsigned threads = 0);

/// V_a(x) = E_x int_0^{tau_a^+} G(X_t) dt
///        = (2/psi'(0+)) int_x^a H(y) dy - (a - x)/psi'(0+) for x < a, and 0 for x >= a.
double V_a_at(const ScaleEvaluator& ev, const ConvolutionTable& table, double a, double x);

/// Value function of the optimal rule, V = V_{a_star}.
double V_at(const ScaleEvaluator& ev, const OptimalRule& rule, double x);

/// V'(x) = (1 - 2H(x)) / psi'(0+) below a_star, 0 above. At a_star the left
/// derivative is returned in the smooth-fit regime; in the continuous-fit
/// regime V has a kink there and DomainError is thrown.
double V_prime_at(const ScaleEvaluator& ev, const OptimalRule& rule, double x);

ValueCurve value_curve(const ScaleEvaluator& ev, const ConvolutionTable& table, double a, std::span<const double> xs);
ValueCurve value_curve(const ScaleEvaluator& ev, const OptimalRule& rule, std::span<const double> xs);

/// E_x(g) for the last time g below zero. Every family is supported for
/// x <= 0; for x > 0 only Brownian motion (needs d/dq W^{(q)}).
double expected_g(const LevyModel& model, double x = 0.0);

/// E(tau_a^+) = a / psi'(0+) from the origin.
double expected_tau_plus(const LevyModel& model, double a);

/// E|g - tau_a^+| from the origin, i.e. V_a(0) + E(g).
double mean_abs_error(const ScaleEvaluator& ev, const ConvolutionTable& table, double a);

/// E_x(exp(-q g)) for Brownian motion with drift.
double laplace_g_brownian(double mu, double sigma, double q, double x);
/// Model overload; UnsupportedModel for non-Brownian families.
double laplace_g(const LevyModel& model, double q, double x);

}  // namespace lastzero
