#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lastzero/scale_function.hpp"

namespace lastzero {

/// How H, the self-convolution of F, is evaluated.
enum class HMethod { AnalyticBM, AnalyticCL, NumericQuadrature };

std::string to_string(HMethod m);

inline constexpr double kDefaultQuadTol = 1e-9;

/// Closed-form H for the Brownian and Cramer-Lundberg families; 0 for x < 0.
/// Throws UnsupportedModel for the Beta family.
double H_analytic(const LevyModel& model, double x);

/// H(x) = psi'(0+)^2 [W(x) W(0) + int_0^x W(y) W'(x - y) dy] by adaptive
/// quadrature. For the Beta family the half of the integral next to y = x is
/// taken in the variable v = (x - y)^(beta - 1), which removes the
/// (x - y)^(beta - 2) singularity of W'.
double H_numeric(const ScaleEvaluator& ev, double x, double quad_tol = kDefaultQuadTol);

/// The analytic method when the family has one, quadrature otherwise.
HMethod preferred_method(const LevyModel& model);

double H_eval(const ScaleEvaluator& ev, HMethod method, double x, double quad_tol = kDefaultQuadTol);

/// H tabulated on a uniform grid 0 = x_0 < ... < x_N.
///
/// Between nodes the table interpolates linearly, which keeps it
/// nondecreasing. Alongside the node values it stores integrals of H - 1/2
/// over each cell (computed from H itself, not from the interpolant) so that
/// value functions can be assembled without re-integrating long ranges.
struct ConvolutionTable {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> cell_excess;  // int_{x_i}^{x_{i+1}} (H - 1/2), size N
  std::vector<double> cum_excess;   // int_0^{x_i} (H - 1/2), size N + 1
  HMethod method = HMethod::NumericQuadrature;
  double quad_tol = kDefaultQuadTol;

  double x_max() const { return grid.back(); }
  double step() const { return grid[1] - grid[0]; }
  /// Linear interpolation; 0 below zero. Throws DomainError above x_max.
  double interpolate(double x) const;
};

ConvolutionTable build_table(const ScaleEvaluator& ev, double x_max, std::size_t n_points,
                             double quad_tol = kDefaultQuadTol, unsigned threads = 0);

/// Table range that comfortably covers the median of H: twenty mean depths
/// of -inf X, where the mean depth is psi''(0+) / (2 psi'(0+)).
double default_table_extent(const ScaleEvaluator& ev);

/// int_lo^hi (H(y) - 1/2) dy for lo <= hi. Whole cells come from the table,
/// partial cells and anything beyond x_max are integrated directly.
double integrate_excess(const ScaleEvaluator& ev, const ConvolutionTable& table, double lo, double hi);

}  // namespace lastzero
