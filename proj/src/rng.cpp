#include "lastzero/rng.hpp"

#include <cmath>
#include <numbers>

namespace lastzero {

double PathRng::exponential(double rate) { return -std::log(uniform()) / rate; }

double PathRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double PathRng::inverse_gaussian(double mean, double shape) {
  // Michael, Schucany and Haas (1976)
  const double n = normal();
  const double y = n * n;
  const double my = mean * y;
  const double x = mean + mean * my / (2.0 * shape) - mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + my * my);
  if (uniform() <= mean / (mean + x)) return x;
  return mean * mean / x;
}

}  // namespace lastzero
