#pragma once

#include <optional>
#include <string>
#include <variant>

namespace lastzero {

/// X_t = sigma B_t + mu t.
struct BrownianDrift {
  double mu;
  double sigma;
};

/// X_t = mu t - (compound Poisson with rate lambda, Exp(rho) claims).
struct CramerLundberg {
  double mu;
  double lambda;
  double rho;
};

/// Laplace exponent Gamma(theta + beta) / (Gamma(theta) Gamma(beta)), beta in (1, 2].
struct BetaFamily {
  double beta;
};

enum class PathVariation { Finite, Infinite };

/// A validated spectrally negative Levy process drifting to +infinity.
///
/// Construction enforces the drift condition for each family, so every
/// LevyModel in existence has psi'(0+) > 0. Instances are immutable values.
class LevyModel {
 public:
  using Params = std::variant<BrownianDrift, CramerLundberg, BetaFamily>;

  explicit LevyModel(Params params);  // throws InvalidInput

  static LevyModel brownian(double mu, double sigma) { return LevyModel(BrownianDrift{mu, sigma}); }
  static LevyModel cramer_lundberg(double mu, double lambda, double rho) {
    return LevyModel(CramerLundberg{mu, lambda, rho});
  }
  static LevyModel beta_family(double beta) { return LevyModel(BetaFamily{beta}); }

  const Params& params() const { return params_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&params_);
  }

  /// Short family tag used by the CLI: "bm", "cl" or "beta".
  std::string family() const;
  /// Human-readable, e.g. "CramerLundberg(mu=2, lambda=1, rho=1)".
  std::string describe() const;

 private:
  Params params_;
};

struct PsiDerivatives {
  double psi_prime0;
  double psi_double_prime0;
};

struct PhiDerivatives {
  double phi_prime0;
  double phi_double_prime0;
};

struct ModelProfile {
  double psi_prime0;
  double psi_double_prime0;
  PathVariation variation;
  std::optional<double> drift_d;  // finite variation only
  double F0;                      // psi'(0+) W(0), the atom of -inf X at zero
};

/// Laplace exponent. Throws DomainError for theta < 0.
double psi(const LevyModel& model, double theta);

/// First derivative of psi on [0, inf), right derivative at 0.
double psi_prime(const LevyModel& model, double theta);

PsiDerivatives psi_derivatives(const LevyModel& model);

/// Right inverse Phi(q): the root of psi(theta) = q, with |psi(Phi(q)) - q| <= tol.
double phi(const LevyModel& model, double q, double tol = 1e-13);

PhiDerivatives phi_derivs0(const LevyModel& model);

ModelProfile profile(const LevyModel& model);

}  // namespace lastzero
