#pragma once

#include <span>
#include <vector>

#include "lastzero/levy_model.hpp"

namespace lastzero {

/// Closed-form scale function W and the quantities derived from it.
///
/// F(x) = psi'(0+) W(x) is the distribution function of the depth of the
/// all-time infimum, -inf_t X_t; G = 2F - 1 is the running cost of the
/// reduced stopping problem. All functions are right-continuous, so for the
/// finite-variation family F(0) includes the atom psi'(0+)/d.
class ScaleEvaluator {
 public:
  explicit ScaleEvaluator(LevyModel model);

  const LevyModel& model() const { return model_; }
  const ModelProfile& profile() const { return profile_; }

  double W(double x) const;
  /// Analytic W'(x) for x > 0. At x = 0 the right derivative is returned when
  /// finite; x < 0 (and x = 0 for beta < 2) throws DomainError.
  double W_prime(double x) const;
  double F(double x) const;
  double G(double x) const { return 2.0 * F(x) - 1.0; }

  /// Smallest x with F(x) >= p, p in [0, 1).
  double F_inverse(double p) const;
  /// x0 = inf{x : G(x) >= 0}, the median of F.
  double x0() const { return F_inverse(0.5); }
  /// Rate r with 1 - F(x) = O(exp(-r x)).
  double decay_rate() const;

 private:
  LevyModel model_;
  ModelProfile profile_;
};

struct ScaleTable {
  std::vector<double> x;
  std::vector<double> W;
  std::vector<double> F;
  std::vector<double> G;
};

ScaleTable tabulate(const ScaleEvaluator& ev, std::span<const double> xs);

/// q-scale function of Brownian motion with drift; 0 for x < 0.
double W_q_brownian(double mu, double sigma, double q, double x);
/// d/dq of W_q_brownian.
double W_q_brownian_dq(double mu, double sigma, double q, double x);
/// W^{(q)} for a model; only the Brownian family has a closed form (UnsupportedModel otherwise).
double W_q(const LevyModel& model, double q, double x);

}  // namespace lastzero
