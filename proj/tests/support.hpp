#pragma once

#include <cstdint>
#include <random>

#include "lastzero/levy_model.hpp"

namespace test_support {

// Hand-rolled generators for property tests; fixed seeds keep failures reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  lastzero::LevyModel brownian() { return lastzero::LevyModel::brownian(log_uniform(0.2, 5.0), log_uniform(0.2, 3.0)); }

  // lambda / (rho mu) drawn in (0.05, 0.95) so the drift condition holds
  lastzero::LevyModel cramer_lundberg() {
    const double mu = log_uniform(0.5, 5.0);
    const double rho = log_uniform(0.3, 4.0);
    const double ratio = uniform(0.05, 0.95);
    return lastzero::LevyModel::cramer_lundberg(mu, ratio * rho * mu, rho);
  }

  lastzero::LevyModel beta_family() { return lastzero::LevyModel::beta_family(uniform(1.1, 2.0)); }

  lastzero::LevyModel any() {
    const auto k = std::uniform_int_distribution<int>(0, 2)(eng_);
    if (k == 0) return brownian();
    if (k == 1) return cramer_lundberg();
    return beta_family();
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace test_support
