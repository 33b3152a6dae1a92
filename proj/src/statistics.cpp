#include "lastzero/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "lastzero/errors.hpp"
#include "lastzero/roots.hpp"

namespace lastzero::stats {

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanEstimate mean_with_error(std::span<const double> xs) {
  if (xs.empty()) throw InvalidInput("mean_with_error: empty sample");
  const auto n = static_cast<double>(xs.size());
  const double mean = pairwise_sum(xs) / n;
  if (xs.size() == 1) return {mean, 0.0};
  std::vector<double> dev(xs.size());
  std::transform(xs.begin(), xs.end(), dev.begin(), [mean](double x) { return (x - mean) * (x - mean); });
  const double var = pairwise_sum(dev) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw InvalidInput("median: empty sample");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw InvalidInput("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double v = samples[i];
    std::size_t j = i;
    while (j < samples.size() && samples[j] == v) ++j;
    // empirical CDF jumps from i/n to j/n at v
    d = std::max(d, std::abs(static_cast<double>(i) / n - cdf_left(v)));
    d = std::max(d, std::abs(static_cast<double>(j) / n - cdf(v)));
    i = j;
  }
  return d;
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 0.3) {
    // theta-function form converges fast for small x
    const double c = std::sqrt(2.0 * M_PI) / x;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = (2.0 * k - 1.0) * M_PI / (2.0 * x);
      s += std::exp(-0.5 * m * m);
    }
    return c * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return 1.0 - 2.0 * s;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw InvalidInput("ks_critical_value: n must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("ks_critical_value: alpha must be in (0, 1)");
  const auto br = roots::bisect_first_true([&](double x) { return kolmogorov_cdf(x) >= 1.0 - alpha; }, 0.0, 10.0,
                                           1e-12);
  const double k = 0.5 * (br.lo + br.hi);
  const double rn = std::sqrt(static_cast<double>(n));
  return k / (rn + 0.12 + 0.11 / rn);
}

}  // namespace lastzero::stats
