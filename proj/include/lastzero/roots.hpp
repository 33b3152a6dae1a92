#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "lastzero/errors.hpp"

namespace lastzero::roots {

struct Bracket {
  double lo;
  double hi;
};

// Bisection for the smallest x in [lo, hi] with pred(x) true, where pred is
// monotone (false ... false true ... true) and pred(hi) holds. Stops once the
// bracket is no wider than x_tol.
template <class Pred>
Bracket bisect_first_true(Pred&& pred, double lo, double hi, double x_tol, int max_iter = 400) {
  for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
// Newton steps are taken when they stay inside the current bracket and
// shrink it fast enough; otherwise the step falls back to bisection.
// f_df(x) returns {f(x), f'(x)}.
template <class FDf>
double safeguarded_newton(FDf&& f_df, double lo, double hi, double f_tol, int max_iter = 200) {
  double x = 0.5 * (lo + hi);
  double prev_width = hi - lo;
  for (int iter = 0; iter < max_iter; ++iter) {
    auto [f, df] = f_df(x);
    if (std::abs(f) <= f_tol) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = (df > 0.0 && std::isfinite(df)) ? x - f / df : lo - 1.0;
    const double width = hi - lo;
    if (!(next > lo && next < hi) || width > 0.5 * prev_width) {
      next = 0.5 * (lo + hi);
    }
    prev_width = width;
    // bracket collapsed to adjacent doubles: f_tol is unreachable, x is as good as it gets
    if (next == x || width <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) return x;
    x = next;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "safeguarded_newton: no convergence after " << max_iter << " iterations; bracket [" << lo
      << ", " << hi << "], last x=" << x;
  throw NumericError(msg.str());
}

}  // namespace lastzero::roots
