#pragma once

#include <functional>

namespace lastzero::quad {

struct Result {
  double value;
  double error;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b] with at most 2^max_depth
/// subintervals. Throws NumericError when the error estimate stays above
/// abs_tol.
Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 unsigned max_depth = 15);

/// Tanh-sinh on [a, b]; tolerates non-smooth or singular behaviour at the
/// endpoints. Same error contract as integrate().
Result integrate_endpoints(const std::function<double(double)>& f, double a, double b, double abs_tol);

}  // namespace lastzero::quad
