#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lastzero::stats {

/// Pairwise (cascade) sum; the result depends only on the order of `xs`.
double pairwise_sum(std::span<const double> xs);

struct MeanEstimate {
  double mean;
  double std_error;  // sample standard deviation / sqrt(n)
};

MeanEstimate mean_with_error(std::span<const double> xs);

/// Sample median (average of the two middle order statistics for even n).
double median(std::vector<double> xs);

/// sup_x |F_n(x) - F(x)| for a distribution with atoms: `cdf` must be
/// right-continuous and `cdf_left(x)` must return F(x-).
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left);

/// Limiting Kolmogorov distribution P(sqrt(n) D_n <= x).
double kolmogorov_cdf(double x);

/// Critical value of D_n at level alpha, Kolmogorov quantile with the
/// Stephens small-sample correction: k_alpha / (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_critical_value(std::size_t n, double alpha);

}  // namespace lastzero::stats
