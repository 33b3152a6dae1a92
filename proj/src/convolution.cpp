#include "lastzero/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "lastzero/errors.hpp"
#include "lastzero/parallel.hpp"
#include "lastzero/quadrature.hpp"

namespace lastzero {
namespace {

// (1 - e^{-u}) / u, continuous at 0
double one_minus_exp_over(double u) { return u == 0.0 ? 1.0 : -std::expm1(-u) / u; }

}  // namespace

std::string to_string(HMethod m) {
  switch (m) {
    case HMethod::AnalyticBM:
      return "AnalyticBM";
    case HMethod::AnalyticCL:
      return "AnalyticCL";
    case HMethod::NumericQuadrature:
      return "NumericQuadrature";
  }
  return "unknown";
}

double H_analytic(const LevyModel& model, double x) {
  if (model.as<BetaFamily>() != nullptr) {
    throw UnsupportedModel("H_analytic: no closed form for " + model.describe());
  }
  if (x < 0.0) return 0.0;
  if (const auto* bm = model.as<BrownianDrift>()) {
    // Gamma(2, k) distribution function
    const double kx = 2.0 * bm->mu / (bm->sigma * bm->sigma) * x;
    return -std::expm1(-kx) - kx * std::exp(-kx);
  }
  const auto* cl = model.as<CramerLundberg>();
  const double c = cl->lambda / (cl->mu * cl->rho);
  const double kx = (cl->rho - cl->lambda / cl->mu) * x;
  const double tail = std::exp(-kx);
  return (1.0 - c) * (1.0 - c) + 2.0 * c * (1.0 - c) * -std::expm1(-kx) +
         c * c * (-std::expm1(-kx) - kx * tail);
}

double H_numeric(const ScaleEvaluator& ev, double x, double quad_tol) {
  if (!(quad_tol > 0.0)) throw DomainError("H_numeric: quad_tol must be > 0");
  if (x < 0.0) return 0.0;
  const double p = ev.profile().psi_prime0;
  const double p2 = p * p;
  const double atom = p2 * ev.W(x) * ev.W(0.0);
  if (x == 0.0) return atom;

  // the two pieces share the tolerance budget after scaling by psi'(0+)^2
  const double tol = 0.5 * quad_tol / p2;
  double integral = 0.0;
  if (const auto* bf = ev.model().as<BetaFamily>()) {
    const double beta = bf->beta;
    const double half = 0.5 * x;
    const double inv = 1.0 / (beta - 1.0);
    // int_0^{x/2} W(y) W'(x - y) dy with y = v^(1/(beta-1)):
    //   W(y) dy = ((1 - e^{-y}) / y)^(beta-1) v^(1/(beta-1)) / (beta-1) dv
    auto head = [&](double v) {
      const double y = std::pow(v, inv);
      return std::pow(one_minus_exp_over(y), beta - 1.0) * y * inv * ev.W_prime(x - y);
    };
    integral += quad::integrate_endpoints(head, 0.0, std::pow(half, beta - 1.0), tol).value;
    // int_0^{x/2} W(x - u) W'(u) du with v = u^(beta-1):
    //   W'(u) du = ((1 - e^{-u}) / u)^(beta-2) e^{-u} dv
    auto tail = [&](double v) {
      const double u = std::pow(v, inv);
      return ev.W(x - u) * std::pow(one_minus_exp_over(u), beta - 2.0) * std::exp(-u);
    };
    integral += quad::integrate_endpoints(tail, 0.0, std::pow(half, beta - 1.0), tol).value;
  } else {
    integral = quad::integrate([&](double y) { return ev.W(y) * ev.W_prime(x - y); }, 0.0, x, 2.0 * tol).value;
  }
  return std::clamp(atom + p2 * integral, 0.0, 1.0);
}

HMethod preferred_method(const LevyModel& model) {
  if (model.as<BrownianDrift>() != nullptr) return HMethod::AnalyticBM;
  if (model.as<CramerLundberg>() != nullptr) return HMethod::AnalyticCL;
  return HMethod::NumericQuadrature;
}

double H_eval(const ScaleEvaluator& ev, HMethod method, double x, double quad_tol) {
  if (method == HMethod::NumericQuadrature) return H_numeric(ev, x, quad_tol);
  return H_analytic(ev.model(), x);
}

double ConvolutionTable::interpolate(double x) const {
  if (x < 0.0) return 0.0;
  if (x > x_max()) throw DomainError("ConvolutionTable::interpolate: x beyond table range");
  const double h = step();
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(x / h), grid.size() - 2);
  const double w = (x - grid[i]) / h;
  return values[i] + w * (values[i + 1] - values[i]);
}

ConvolutionTable build_table(const ScaleEvaluator& ev, double x_max, std::size_t n_points, double quad_tol,
                             unsigned threads) {
  if (!(x_max > 0.0)) throw DomainError("build_table: x_max must be > 0");
  if (n_points < 2) throw DomainError("build_table: need at least 2 grid points");
  if (!(quad_tol > 0.0)) throw DomainError("build_table: quad_tol must be > 0");

  ConvolutionTable t;
  t.method = preferred_method(ev.model());
  t.quad_tol = quad_tol;
  t.grid.resize(n_points);
  const double h = x_max / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) t.grid[i] = static_cast<double>(i) * h;
  t.grid.back() = x_max;

  t.values.resize(n_points);
  t.cell_excess.resize(n_points - 1);
  auto excess = [&](double y) { return H_eval(ev, t.method, y, quad_tol) - 0.5; };
  parallel_for(n_points, threads, [&](std::size_t i) {
    t.values[i] = H_eval(ev, t.method, t.grid[i], quad_tol);
    if (i + 1 < n_points) {
      // H is not smooth at 0 for the beta family
      const double tol = quad_tol * h;
      t.cell_excess[i] = i == 0 ? quad::integrate_endpoints(excess, t.grid[0], t.grid[1], tol).value
                                : quad::integrate(excess, t.grid[i], t.grid[i + 1], tol).value;
    }
  });

  // quadrature noise must not break monotonicity
  for (std::size_t i = 1; i < n_points; ++i) t.values[i] = std::max(t.values[i], t.values[i - 1]);

  t.cum_excess.assign(n_points, 0.0);
  for (std::size_t i = 1; i < n_points; ++i) t.cum_excess[i] = t.cum_excess[i - 1] + t.cell_excess[i - 1];
  return t;
}

double default_table_extent(const ScaleEvaluator& ev) {
  const auto& prof = ev.profile();
  return 20.0 * prof.psi_double_prime0 / (2.0 * prof.psi_prime0);
}

double integrate_excess(const ScaleEvaluator& ev, const ConvolutionTable& table, double lo, double hi) {
  if (hi < lo) throw DomainError("integrate_excess: requires lo <= hi");
  double total = 0.0;
  if (lo < 0.0) {
    const double top = std::min(hi, 0.0);
    total -= 0.5 * (top - lo);  // H vanishes on negatives
    lo = top;
  }
  if (hi <= lo) return total;

  auto direct = [&](double a, double b) {
    if (b <= a) return 0.0;
    auto f = [&](double y) { return H_eval(ev, table.method, y, table.quad_tol) - 0.5; };
    const double tol = table.quad_tol * std::max(1.0, b - a);
    return a == 0.0 ? quad::integrate_endpoints(f, a, b, tol).value : quad::integrate(f, a, b, tol).value;
  };

  const double xm = table.x_max();
  if (lo >= xm) return total + direct(lo, hi);

  const double h = table.step();
  const double top = std::min(hi, xm);
  // first node at or above lo, last node at or below top
  auto first = static_cast<std::size_t>(std::ceil(lo / h));
  auto last = static_cast<std::size_t>(std::floor(top / h));
  first = std::min(first, table.grid.size() - 1);
  last = std::min(last, table.grid.size() - 1);
  if (first > last || table.grid[first] > top) {
    total += direct(lo, top);
  } else {
    total += direct(lo, table.grid[first]);
    total += table.cum_excess[last] - table.cum_excess[first];
    total += direct(table.grid[last], top);
  }
  if (hi > xm) total += direct(xm, hi);
  return total;
}

}  // namespace lastzero
