#include "lastzero/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lastzero/errors.hpp"

namespace lastzero::quad {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

namespace {

// Boost's tolerances are relative to the L1 norm; the integrands here are
// O(1) so a relative target of abs_tol / (b - a) keeps the absolute error
// within abs_tol, and checked() enforces it.
double relative_target(double a, double b, double abs_tol) {
  return std::max(abs_tol / std::max(1.0, std::abs(b - a)), 1e-15);
}

Result checked(double value, double error, double l1, double a, double b, double abs_tol) {
  if (!std::isfinite(value) || error > std::max(abs_tol, 64.0 * 2.2e-16 * l1)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "quadrature on [" << a << ", " << b << "] did not converge: error estimate " << error
        << " > tolerance " << abs_tol;
    throw NumericError(msg.str());
  }
  return {value, error};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, unsigned max_depth) {
  if (a == b) return {0.0, 0.0};
  double error = 0.0;
  double l1 = 0.0;
  // a single panel first: Boost's adaptive error estimate inflates when
  // tol * L1 is below roundoff
  double value = Kronrod::integrate(f, a, b, 0, 0.0, &error, &l1);
  if (std::isfinite(value) && error <= abs_tol) return {value, error};
  const double rel_tol = std::max(0.5 * abs_tol / std::max(l1, abs_tol), 1e-15);
  value = Kronrod::integrate(f, a, b, max_depth, rel_tol, &error, &l1);
  return checked(value, error, l1, a, b, abs_tol);
}

Result integrate_endpoints(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return {0.0, 0.0};
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  boost::math::quadrature::tanh_sinh<double> ts(15);
  const double value = ts.integrate(f, a, b, 0.1 * relative_target(a, b, abs_tol), &error, &l1, &levels);
  return checked(value, error, l1, a, b, abs_tol);
}

}  // namespace lastzero::quad
