#include "lastzero/simulate.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "lastzero/errors.hpp"
#include "lastzero/parallel.hpp"
#include "lastzero/rng.hpp"
#include "lastzero/statistics.hpp"

namespace lastzero {
namespace {

constexpr std::uint64_t kStepCap = 1'000'000'000ULL;
constexpr double kNegligible = 1e-14;  // bridge-extremum probabilities below this are skipped
constexpr double kFarStep = 0.25;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Claims of the beta family above the cutoff, in s = 1 - e^{-u}.
struct BetaJumps {
  double beta = 0.0;
  double s_eps = 0.0;
  double rate = 0.0;
  double proposal_top = 0.0;  // s_eps^{-beta}

  double sample(PathRng& rng) const {
    for (;;) {
      const double s = std::pow(proposal_top - rng.uniform() * (proposal_top - 1.0), -1.0 / beta);
      if (rng.uniform() < std::pow(1.0 - s, beta - 1.0)) return -std::log1p(-s);
    }
  }
};

struct Engine {
  const ScaleEvaluator* ev;
  McConfig cfg;
  double barrier;
  // diffusion coefficients; unused for Cramer-Lundberg
  double drift = 0.0;
  double sigma = 0.0;
  bool gaussian = false;  // no jumps: exact restart after the barrier is available
  std::optional<BetaJumps> jumps;
  // Cramer-Lundberg
  std::optional<CramerLundberg> cl;

  Engine(const ScaleEvaluator& e, const McConfig& c) : ev(&e), cfg(c), barrier(barrier_level(e, c.tail_eps)) {
    const auto& model = e.model();
    if (const auto* p = model.as<CramerLundberg>()) {
      cl = *p;
    } else if (const auto* bm = model.as<BrownianDrift>()) {
      drift = bm->mu;
      sigma = bm->sigma;
      gaussian = true;
    } else {
      const double beta = model.as<BetaFamily>()->beta;
      if (beta == 2.0) {
        // psi(theta) = theta^2 + theta
        drift = 1.0;
        sigma = std::sqrt(2.0);
        gaussian = true;
      } else {
        setup_beta(beta);
      }
    }
  }

  void setup_beta(double beta) {
    // Levy density c e^{-beta u} (1 - e^{-u})^{-beta-1} on jump sizes u > 0,
    // c = 1 / (Gamma(beta) Gamma(-beta)); in s = 1 - e^{-u} the measure is
    // c (1 - s)^{beta-1} s^{-beta-1} ds.
    const double c = 1.0 / (boost::math::tgamma(beta) * boost::math::tgamma(-beta));
    const double eps = cfg.jump_cutoff;
    const double s_eps = -std::expm1(-eps);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto dens = [beta](double s) { return std::pow(1.0 - s, beta - 1.0) * std::pow(s, -beta - 1.0); };
    const double rate = c * ts.integrate(dens, s_eps, 1.0);
    const double mean_big = c * ts.integrate([&](double s) { return -std::log1p(-s) * dens(s); }, s_eps, 1.0);
    const double small_var = c * ts.integrate(
                                     [beta](double s) {
                                       const double r = std::log1p(-s) / s;
                                       return r * r * std::pow(1.0 - s, beta - 1.0) * std::pow(s, 1.0 - beta);
                                     },
                                     0.0, s_eps);
    drift = 1.0 + mean_big;  // psi'(0+) = 1
    sigma = std::sqrt(small_var);
    jumps = BetaJumps{beta, s_eps, rate, std::pow(s_eps, -beta)};
  }

  PathEvents run(const PathRequest& req, PathRng& rng) const {
    return cl ? run_cl(req, rng) : run_diffusion(req, rng);
  }

  // Level bookkeeping shared by both engines.
  struct Levels {
    std::vector<std::size_t> order;  // indices sorted by level
    std::size_t next = 0;            // first pending position in `order`
    const std::vector<double>* a;
    bool pending() const { return next < order.size(); }
    double lowest() const { return (*a)[order[next]]; }
  };

  static Levels init_levels(const PathRequest& req, PathEvents& out) {
    Levels lv{std::vector<std::size_t>(req.levels.size()), 0, &req.levels};
    std::iota(lv.order.begin(), lv.order.end(), std::size_t{0});
    std::stable_sort(lv.order.begin(), lv.order.end(),
                     [&](std::size_t i, std::size_t j) { return req.levels[i] < req.levels[j]; });
    out.tau.assign(req.levels.size(), 0.0);
    if (req.need_G_integral) out.G_integral.assign(req.levels.size(), 0.0);
    // tau_a^+ = 0 when starting at or above a
    while (lv.pending() && lv.lowest() <= req.x_start) ++lv.next;
    return lv;
  }

  double top_level(const PathRequest& req) const {
    double top = barrier;
    for (double a : req.levels) top = std::max(top, a);
    return top;
  }

  PathEvents run_cl(const PathRequest& req, PathRng& rng) const {
    const double mu = cl->mu;
    const double c = cl->lambda / (cl->mu * cl->rho);
    const double kappa = cl->rho - cl->lambda / cl->mu;
    // int_0^u G(y) dy
    auto antideriv = [&](double u) { return u < 0.0 ? -u : u + 2.0 * c / kappa * std::expm1(-kappa * u); };

    PathEvents out;
    auto lv = init_levels(req, out);
    const bool track_all = req.need_g || req.need_infimum;
    const double top = top_level(req);
    double x = req.x_start;
    double t = 0.0;
    double integral = 0.0;
    double lowest = x;

    while (track_all || lv.pending()) {
      if (++out.steps > kStepCap) throw NumericError("simulation: step cap reached before the barrier");
      const double T = rng.exponential(cl->lambda);
      const double x_end = x + mu * T;
      while (lv.pending() && lv.lowest() < x_end) {
        const double a = lv.lowest();
        const std::size_t k = lv.order[lv.next++];
        out.tau[k] = t + (a - x) / mu;
        if (req.need_G_integral) out.G_integral[k] = integral + (antideriv(a) - antideriv(x)) / mu;
      }
      if (req.need_g && x <= 0.0 && x_end > 0.0) out.g = t + (-x) / mu;
      if (track_all && x_end > top) break;
      if (req.need_G_integral) integral += (antideriv(x_end) - antideriv(x)) / mu;
      t += T;
      x = x_end - rng.exponential(cl->rho);
      lowest = std::min(lowest, x);
    }
    out.infimum_depth = -lowest;
    return out;
  }

  PathEvents run_diffusion(const PathRequest& req, PathRng& rng) const {
    PathEvents out;
    auto lv = init_levels(req, out);
    const bool track_all = req.need_g || req.need_infimum;
    const double top = top_level(req);
    const double s2 = sigma * sigma;
    const double dt = cfg.dt;
    const auto& ev_ref = *ev;
    auto G = [&](double y) { return ev_ref.G(y); };

    double x = req.x_start;
    double t = 0.0;
    double integral = 0.0;
    double lowest = x;
    double next_jump = jumps ? rng.exponential(jumps->rate) : kInf;
    double gx = req.need_G_integral ? G(x) : 0.0;

    if (track_all && x >= top) {
      out.infimum_depth = -lowest;
      return out;
    }

    while (track_all || lv.pending()) {
      if (++out.steps > kStepCap) throw NumericError("simulation: step cap reached before the barrier");
      const bool fine = req.need_G_integral && lv.pending();
      const double upper = lv.pending() ? lv.lowest() : top;
      double d = upper - x;
      if (req.need_g) d = std::min(d, std::abs(x));
      double h = std::min(std::pow(d / (6.0 * sigma), 2), d / (6.0 * std::abs(drift)));
      h = std::clamp(h, dt, fine ? dt : std::max(dt, kFarStep));
      bool jump_now = false;
      if (next_jump - t <= h) {
        h = next_jump - t;
        jump_now = true;
      }

      const double sh = std::sqrt(s2 * h);
      const double x1 = x + drift * h + sh * rng.normal();

      // bridge minimum, sampled when it can matter
      bool touched = false;
      if (track_all) {
        double L = -kInf;
        if (req.need_g) L = 0.0;
        if (req.need_infimum) L = std::max(L, lowest);
        const bool sure = x <= L || x1 <= L;
        if (sure || std::exp(-2.0 * (x - L) * (x1 - L) / (s2 * h)) > kNegligible) {
          const double diff = x1 - x;
          const double m = 0.5 * (x + x1 - std::sqrt(diff * diff - 2.0 * s2 * h * std::log(rng.uniform())));
          lowest = std::min(lowest, m);
          touched = req.need_g && m <= 0.0;
        }
      }

      // bridge maximum against the pending levels and the barrier
      double M = std::max(x, x1);
      const double L_up = lv.pending() ? lv.lowest() : top;
      if (x1 > L_up || std::exp(-2.0 * (L_up - x) * (L_up - x1) / (s2 * h)) > kNegligible) {
        const double diff = x1 - x;
        M = 0.5 * (x + x1 + std::sqrt(diff * diff - 2.0 * s2 * h * std::log(rng.uniform())));
      }

      const double t_mid = t + 0.5 * h;
      while (lv.pending() && lv.lowest() < M) {
        const double a = lv.lowest();
        const std::size_t k = lv.order[lv.next++];
        out.tau[k] = t_mid;
        if (req.need_G_integral) out.G_integral[k] = integral + 0.25 * h * (gx + G(a));
      }
      if (touched) out.g = x1 <= 0.0 ? t + h : t_mid;

      if (track_all && M > top) {
        if (!gaussian || rng.uniform() >= 1.0 - ev_ref.F(top)) break;
        // the path returns to 0; the return time is inverse Gaussian
        t = t_mid + rng.inverse_gaussian(top / drift, top * top / s2);
        x = 0.0;
        if (req.need_g) out.g = t;
        lowest = std::min(lowest, 0.0);
        continue;
      }

      if (req.need_G_integral) {
        const double g1 = G(x1);
        integral += 0.5 * h * (gx + g1);
        gx = g1;
      }
      t += h;
      x = x1;
      if (jump_now) {
        t = next_jump;
        x -= jumps->sample(rng);
        lowest = std::min(lowest, x);
        if (req.need_g && x <= 0.0) out.g = t;
        if (req.need_G_integral) gx = G(x);
        next_jump = t + rng.exponential(jumps->rate);
      }
    }
    out.infimum_depth = -lowest;
    return out;
  }
};

template <class Extract>
McReport run_estimator(const ScaleEvaluator& ev, const McConfig& cfg, const PathRequest& req, McQuantity tag,
                       Extract extract) {
  validate(cfg);
  const Engine engine(ev, cfg);
  std::vector<double> vals(cfg.n_paths);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
    PathRng rng(cfg.base_seed, i);
    vals[i] = extract(engine.run(req, rng));
  });
  const auto est = stats::mean_with_error(vals);
  return McReport{est.mean, est.std_error, cfg.n_paths, tag, std::nullopt, std::nullopt, std::nullopt, cfg.base_seed};
}

}  // namespace

void validate(const McConfig& cfg) {
  if (cfg.n_paths == 0) throw InvalidInput("McConfig: n_paths must be positive");
  if (!(cfg.dt > 0.0 && std::isfinite(cfg.dt))) throw InvalidInput("McConfig: dt must be > 0");
  if (!(cfg.tail_eps > 0.0 && cfg.tail_eps <= 0.01)) throw InvalidInput("McConfig: tail_eps must lie in (0, 0.01]");
  if (!(cfg.jump_cutoff > 0.0 && cfg.jump_cutoff < 1.0)) {
    throw InvalidInput("McConfig: jump_cutoff must lie in (0, 1)");
  }
}

double barrier_level(const ScaleEvaluator& ev, double tail_eps) {
  if (!(tail_eps > 0.0 && tail_eps <= 0.01)) throw InvalidInput("barrier_level: tail_eps must lie in (0, 0.01]");
  double b = ev.F_inverse(1.0 - tail_eps);
  // guard against rounding in the closed-form inverse
  while (ev.F(b) < 1.0 - tail_eps) b = std::nextafter(b, kInf) + 1e-12 * std::max(1.0, b);
  return b;
}

PathEvents sample_path_events(const ScaleEvaluator& ev, const McConfig& cfg, const PathRequest& req,
                              std::size_t path_index) {
  validate(cfg);
  if (path_index >= cfg.n_paths) throw InvalidInput("sample_path_events: path_index must be < n_paths");
  const Engine engine(ev, cfg);
  PathRng rng(cfg.base_seed, path_index);
  return engine.run(req, rng);
}

std::string to_string(McQuantity q) {
  switch (q) {
    case McQuantity::MeanAbsError:
      return "MeanAbsError";
    case McQuantity::ExpectedG:
      return "ExpectedG";
    case McQuantity::ValueVa:
      return "ValueVa";
    case McQuantity::InfimumSample:
      return "InfimumSample";
    case McQuantity::LaplaceG:
      return "LaplaceG";
    case McQuantity::TauPlus:
      return "TauPlus";
  }
  return "unknown";
}

McReport estimate_mean_abs_error(const ScaleEvaluator& ev, const McConfig& cfg, double a) {
  return estimate_mean_abs_error_grid(ev, cfg, std::span<const double>(&a, 1)).front();
}

std::vector<McReport> estimate_mean_abs_error_grid(const ScaleEvaluator& ev, const McConfig& cfg,
                                                   std::span<const double> as) {
  validate(cfg);
  for (double a : as) {
    if (!(a >= 0.0)) throw DomainError("estimate_mean_abs_error: a must be >= 0");
  }
  PathRequest req;
  req.levels.assign(as.begin(), as.end());
  const Engine engine(ev, cfg);
  const std::size_t m = as.size();
  const std::size_t n = cfg.n_paths;
  std::vector<double> vals(n * m);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    PathRng rng(cfg.base_seed, i);
    const auto e = engine.run(req, rng);
    for (std::size_t k = 0; k < m; ++k) vals[k * n + i] = std::abs(e.g - e.tau[k]);
  });
  std::vector<McReport> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto est = stats::mean_with_error(std::span<const double>(vals).subspan(k * n, n));
    out.push_back({est.mean, est.std_error, n, McQuantity::MeanAbsError, as[k], 0.0, std::nullopt, cfg.base_seed});
  }
  return out;
}

McReport estimate_expected_g(const ScaleEvaluator& ev, const McConfig& cfg, double x) {
  PathRequest req;
  req.x_start = x;
  auto r = run_estimator(ev, cfg, req, McQuantity::ExpectedG, [](const PathEvents& e) { return e.g; });
  r.x = x;
  return r;
}

McReport estimate_tau_plus(const ScaleEvaluator& ev, const McConfig& cfg, double a) {
  if (!(a >= 0.0)) throw DomainError("estimate_tau_plus: a must be >= 0");
  PathRequest req;
  req.levels = {a};
  req.need_g = false;
  auto r = run_estimator(ev, cfg, req, McQuantity::TauPlus, [](const PathEvents& e) { return e.tau[0]; });
  r.a = a;
  r.x = 0.0;
  return r;
}

McReport estimate_value_va(const ScaleEvaluator& ev, const McConfig& cfg, double a, double x) {
  if (!(a >= 0.0)) throw DomainError("estimate_value_va: a must be >= 0");
  validate(cfg);
  if (x >= a) return {0.0, 0.0, cfg.n_paths, McQuantity::ValueVa, a, x, std::nullopt, cfg.base_seed};
  PathRequest req;
  req.x_start = x;
  req.levels = {a};
  req.need_g = false;
  req.need_G_integral = true;
  auto r = run_estimator(ev, cfg, req, McQuantity::ValueVa, [](const PathEvents& e) { return e.G_integral[0]; });
  r.a = a;
  r.x = x;
  return r;
}

McReport estimate_laplace_g(const ScaleEvaluator& ev, const McConfig& cfg, double q) {
  if (!(q >= 0.0)) throw DomainError("estimate_laplace_g: q must be >= 0");
  PathRequest req;
  auto r = run_estimator(ev, cfg, req, McQuantity::LaplaceG, [q](const PathEvents& e) { return std::exp(-q * e.g); });
  r.q = q;
  r.x = 0.0;
  return r;
}

McReport estimate_infimum_mean(const ScaleEvaluator& ev, const McConfig& cfg) {
  PathRequest req;
  req.need_g = false;
  req.need_infimum = true;
  auto r = run_estimator(ev, cfg, req, McQuantity::InfimumSample,
                         [](const PathEvents& e) { return e.infimum_depth; });
  r.x = 0.0;
  return r;
}

std::vector<double> sample_infimum(const ScaleEvaluator& ev, const McConfig& cfg) {
  validate(cfg);
  PathRequest req;
  req.need_g = false;
  req.need_infimum = true;
  const Engine engine(ev, cfg);
  std::vector<double> out(cfg.n_paths);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
    PathRng rng(cfg.base_seed, i);
    out[i] = engine.run(req, rng).infimum_depth;
  });
  return out;
}

std::vector<double> threshold_grid(const ScaleEvaluator& ev, double a_star) {
  const auto& prof = ev.profile();
  const double s = a_star > 0.0 ? a_star : prof.psi_double_prime0 / (2.0 * prof.psi_prime0);
  std::vector<double> grid(21);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.1 * static_cast<double>(i) * s;
  return grid;
}

}  // namespace lastzero
