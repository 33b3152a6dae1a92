#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lastzero/errors.hpp"
#include "lastzero/optimal_rule.hpp"
#include "lastzero/simulate.hpp"
#include "lastzero/statistics.hpp"

using namespace lastzero;

namespace {

McConfig config(std::size_t n, std::uint64_t seed = 99) {
  McConfig c;
  c.n_paths = n;
  c.base_seed = seed;
  return c;
}

bool within(const McReport& r, double expected, double k) { return std::abs(r.estimate - expected) <= k * r.std_error; }

}  // namespace

TEST_CASE("config validation and barrier") {
  McConfig c;
  c.n_paths = 0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = McConfig{};
  c.tail_eps = 0.02;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c.tail_eps = 0.0;
  CHECK_THROWS_AS(validate(c), InvalidInput);
  c = McConfig{};
  c.dt = -1.0;
  CHECK_THROWS_AS(validate(c), InvalidInput);

  for (const auto& m : {LevyModel::brownian(1, 1), LevyModel::cramer_lundberg(2, 1, 1), LevyModel::beta_family(1.5)}) {
    const ScaleEvaluator ev(m);
    for (double eps : {1e-2, 1e-8, 1e-12}) {
      const double b = barrier_level(ev, eps);
      CHECK(ev.F(b) >= 1.0 - eps);
      CHECK(ev.F(b * (1.0 - 1e-3)) < 1.0 - eps);
    }
  }
}

TEST_CASE("Cramer-Lundberg path with no claims has g = 0") {
  const ScaleEvaluator ev(LevyModel::cramer_lundberg(2, 1, 1));
  auto cfg = config(5000);
  cfg.tail_eps = 0.01;
  PathRequest req;
  req.need_infimum = true;
  req.levels = {1.0};
  int found = 0;
  for (std::size_t i = 0; i < cfg.n_paths && found < 5; ++i) {
    const auto e = sample_path_events(ev, cfg, req, i);
    if (e.steps == 1) {
      ++found;
      CHECK(e.g == 0.0);
      CHECK(e.infimum_depth == 0.0);
      CHECK(e.tau[0] == doctest::Approx(0.5));  // creeping at speed mu
    }
  }
  CHECK(found > 0);
}

TEST_CASE("path events are reproducible and independent of n_paths") {
  for (const auto& m : {LevyModel::brownian(1, 1), LevyModel::cramer_lundberg(2, 1, 1)}) {
    const ScaleEvaluator ev(m);
    PathRequest req;
    req.levels = {0.3, 1.0};
    req.need_infimum = true;
    req.need_G_integral = true;
    const auto a = sample_path_events(ev, config(10), req, 7);
    const auto b = sample_path_events(ev, config(100000), req, 7);
    CHECK(a.g == b.g);
    CHECK(a.tau == b.tau);
    CHECK(a.G_integral == b.G_integral);
    CHECK(a.infimum_depth == b.infimum_depth);
    CHECK(a.tau[0] <= a.tau[1]);
    CHECK(a.infimum_depth >= 0.0);
    CHECK_THROWS_AS(sample_path_events(ev, config(10), req, 10), InvalidInput);
  }
}

TEST_CASE("estimators do not depend on the worker count") {
  const ScaleEvaluator ev(LevyModel::brownian(1, 1));
  auto c1 = config(3000);
  c1.threads = 1;
  auto c3 = c1;
  c3.threads = 3;
  const std::vector<double> as = {0.2, 0.8};
  const auto r1 = estimate_mean_abs_error_grid(ev, c1, as);
  const auto r3 = estimate_mean_abs_error_grid(ev, c3, as);
  for (std::size_t k = 0; k < as.size(); ++k) {
    CHECK(r1[k].estimate == r3[k].estimate);
    CHECK(r1[k].std_error == r3[k].std_error);
  }
  CHECK(estimate_expected_g(ev, c1).estimate == estimate_expected_g(ev, c3).estimate);
}

TEST_CASE("first passage and last zero moments") {
  const ScaleEvaluator cl(LevyModel::cramer_lundberg(2, 1, 1));
  const auto cfg = config(40000);
  CHECK(within(estimate_tau_plus(cl, cfg, 1.0), 1.0, 4.0));
  CHECK(within(estimate_expected_g(cl, cfg), 2.0, 4.0));
  CHECK(within(estimate_expected_g(cl, cfg, -1.0), 3.0, 4.0));

  const ScaleEvaluator bm(LevyModel::brownian(1, 1));
  const auto small = config(20000);
  CHECK(within(estimate_expected_g(bm, small), 1.0, 4.0));
  CHECK(within(estimate_expected_g(bm, small, 0.5), expected_g(bm.model(), 0.5), 4.0));
  CHECK(within(estimate_tau_plus(bm, small, 0.7), 0.7, 4.0));
}

TEST_CASE("infimum law") {
  const ScaleEvaluator cl(LevyModel::cramer_lundberg(2, 1, 1));
  const auto s = sample_infimum(cl, config(20000));
  std::vector<double> atom(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) atom[i] = s[i] == 0.0 ? 1.0 : 0.0;
  const auto p0 = stats::mean_with_error(atom);
  CHECK(std::abs(p0.mean - 0.5) <= 4.0 * p0.std_error);
  auto F = [&](double x) { return cl.F(x); };
  auto Fl = [&](double x) { return x <= 0.0 ? 0.0 : cl.F(x); };
  CHECK(stats::ks_statistic(s, F, Fl) < stats::ks_critical_value(s.size(), 0.01));

  const ScaleEvaluator bm(LevyModel::brownian(1, 1));
  CHECK(within(estimate_infimum_mean(bm, config(20000)), 0.5, 4.0));
}

TEST_CASE("value function estimates") {
  const ScaleEvaluator cl(LevyModel::cramer_lundberg(2, 1, 1));
  const auto rule = solve(cl);
  CHECK(within(estimate_value_va(cl, config(40000), rule.a_star, -1.0), V_at(cl, rule, -1.0), 4.0));
  CHECK(within(estimate_value_va(cl, config(40000), rule.a_star, 0.5), V_at(cl, rule, 0.5), 4.0));
  const auto zero = estimate_value_va(cl, config(10), 1.0, 1.0);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.std_error == 0.0);

  const ScaleEvaluator bm(LevyModel::brownian(1, 1));
  const auto rb = solve(bm);
  CHECK(within(estimate_value_va(bm, config(20000), rb.a_star, 0.0), V_at(bm, rb, 0.0), 4.0));
}

TEST_CASE("large thresholds: E|g - tau_a| tends to a / psi'(0+) - E(g)") {
  const ScaleEvaluator cl(LevyModel::cramer_lundberg(2, 1, 1));
  const double a = 10.0 * 1.16614775207338200;
  const auto r = estimate_mean_abs_error(cl, config(40000), a);
  CHECK(within(r, a - 2.0, 4.0));
  CHECK(r.a.value() == a);
  CHECK(r.quantity == McQuantity::MeanAbsError);
}

TEST_CASE("Laplace transform of g for Brownian motion") {
  const ScaleEvaluator bm(LevyModel::brownian(1, 1));
  const auto r = estimate_laplace_g(bm, config(20000), 1.0);
  CHECK(within(r, laplace_g_brownian(1, 1, 1.0, 0.0), 4.0));
  CHECK(r.q.value() == 1.0);
}

TEST_CASE("halving dt moves E|g - tau_a*| by less than two standard errors") {
  const ScaleEvaluator bm(LevyModel::brownian(1, 1));
  auto c = config(20000);
  const auto r1 = estimate_mean_abs_error(bm, c, 0.839173495008330327);
  c.dt = 5e-4;
  const auto r2 = estimate_mean_abs_error(bm, c, 0.839173495008330327);
  CHECK(std::abs(r1.estimate - r2.estimate) < 2.0 * std::hypot(r1.std_error, r2.std_error));
}

TEST_CASE("beta family: exact Gaussian case and jump approximation") {
  const ScaleEvaluator b2(LevyModel::beta_family(2.0));
  CHECK(within(estimate_expected_g(b2, config(10000)), 2.0, 4.0));
  CHECK(within(estimate_infimum_mean(b2, config(10000)), 1.0, 4.0));

  const ScaleEvaluator b15(LevyModel::beta_family(1.5));
  auto c = config(2000);
  c.jump_cutoff = 1e-2;
  const double mean_depth = psi_derivatives(b15.model()).psi_double_prime0 / 2.0;
  CHECK(within(estimate_infimum_mean(b15, c), mean_depth, 5.0));
  CHECK(within(estimate_expected_g(b15, c), expected_g(b15.model()), 5.0));
}

TEST_CASE("threshold grid") {
  const ScaleEvaluator cl4(LevyModel::cramer_lundberg(4, 1, 1));
  const auto g = threshold_grid(cl4, 0.0);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(2.0 / 3.0));
  const auto h = threshold_grid(ScaleEvaluator(LevyModel::brownian(1, 1)), 0.8);
  CHECK(h[10] == doctest::Approx(0.8));
  CHECK(to_string(McQuantity::ValueVa) == "ValueVa");
}
