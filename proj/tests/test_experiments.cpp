#include <doctest.h>

#include <cmath>
#include <vector>

#include "misspec/errors.hpp"
#include "misspec/experiments.hpp"
#include "misspec/textio.hpp"

using namespace misspec;

TEST_CASE("rate regression") {
  // exact power law recovers the exponent to machine precision
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025}, med(4);
  for (std::size_t i = 0; i < 4; ++i) med[i] = std::pow(eps[i], 2.0 / 3.0);
  auto fit = rate_regression(eps, med);
  CHECK(fit.slope == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // 5% multiplicative noise, frozen draws
  const double noise[4] = {0.031, -0.024, 0.048, -0.012};
  for (std::size_t i = 0; i < 4; ++i) med[i] = eps[i] * (1.0 + noise[i]);
  fit = rate_regression(eps, med);
  CHECK(fit.slope > 0.9);
  CHECK(fit.slope < 1.1);

  med[2] = 0.0;
  CHECK_THROWS_AS(rate_regression(eps, med), InvalidSpecError);
  CHECK_THROWS_AS(rate_regression(std::vector<double>{0.2, 0.1}, std::vector<double>{1.0, 0.5}),
                  InvalidSpecError);
}

TEST_CASE("two-sample KS statistic") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, {10.0, 11.0}) == 1.0);

  // N(0,1) vs N(0,1) stays below the 99% critical value in most seeded trials
  int below = 0;
  const std::size_t n = 10000;
  const double crit = ks_two_sample_critical(0.01, n, n);
  CHECK(crit == doctest::Approx(1.628 * std::sqrt(2.0 / double(n))).epsilon(1e-3));
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = sample_gaussian(1.0, 1000 + std::uint64_t(trial), n);
    const auto y = sample_gaussian(1.0, 5000 + std::uint64_t(trial), n);
    if (ks_two_sample(x, y) < crit) ++below;
  }
  CHECK(below >= 95);

  // invariance under a common monotone rescaling
  auto x = sample_gaussian(1.0, 9, 5000);
  auto y = sample_gaussian(2.0, 10, 5000);
  const double d0 = ks_two_sample(x, y);
  for (double& v : x) v = std::exp(v);
  for (double& v : y) v = std::exp(v);
  CHECK(ks_two_sample(x, y) == doctest::Approx(d0));
}

TEST_CASE("presets resolve with documented constants") {
  CHECK_THROWS_AS(preset("no-such"), UnknownNameError);
  CHECK(preset_names().size() == 8);

  const auto ex1 = preset("example1");
  CHECK(rate_exponent(ex1.regime) == doctest::Approx(2.0 / 3.0));
  CHECK(ex1.cp_grid_rule);
  CHECK(ex1.grid_for(0.025).steps == 80000);
  CHECK(ex1.grid_for(0.2).steps == (1 << 14));

  const auto ex2 = preset("example2");
  CHECK(ex2.assumed.family_tag() == "linear-drift");
  CHECK_FALSE(ex2.cp_grid_rule);

  // disc-vs-disc default perturbations: q = 0.2 delta, r = -0.2 delta, margins strict
  const auto dvd = preset("disc-vs-disc");
  CHECK(dvd.truth.q.a0 == doctest::Approx(0.4));
  CHECK(dvd.truth.r.a0 == doctest::Approx(-0.4));
  const auto rep = check_5152(dvd.assumed.h, dvd.assumed.g, dvd.truth.q, dvd.truth.r,
                              ParamWindow{dvd.window.lo, dvd.window.hi}, TimeGrid::make(1.0, 4096));
  CHECK(rep.verdict);

  const auto viol = preset("disc-vs-disc-violated");
  const auto repv = check_5152(viol.assumed.h, viol.assumed.g, viol.truth.q, viol.truth.r,
                               ParamWindow{viol.window.lo, viol.window.hi},
                               TimeGrid::make(1.0, 4096));
  CHECK_FALSE(repv.verdict);

  for (const auto& name : preset_names()) {
    const auto sc = preset(name);
    CHECK_NOTHROW(sc.validate());
  }
}

TEST_CASE("scenario validation") {
  auto sc = preset("example1");
  sc.ladder = {0.1, 0.2};
  CHECK_THROWS_AS(sc.validate(), InvalidSpecError);
  sc = preset("example1");
  sc.theta0 = 0.95;
  CHECK_THROWS_AS(sc.validate(), InvalidSpecError);
  sc = preset("example1");
  sc.window = {0.0, 0.9};
  CHECK_THROWS_AS(sc.validate(), InvalidSpecError);
}

TEST_CASE("run_scenario is bit-deterministic at any thread count") {
  auto sc = preset("example1");
  sc.ladder = {0.2, 0.1};
  sc.replications = 60;
  sc.base_steps = 1 << 10;
  sc.cp_grid_rule = false;
  sc.estimators = {true, true, true};

  const auto run1 = run_scenario(sc, 1);
  const auto run3 = run_scenario(sc, 3);
  CHECK(report_to_json(run1.report) == report_to_json(run3.report));
  REQUIRE(run1.records.size() == run3.records.size());
  for (std::size_t i = 0; i < run1.records.size(); ++i) {
    CHECK(run1.records[i].theta_mle == run3.records[i].theta_mle);
    CHECK(run1.records[i].theta_bayes == run3.records[i].theta_bayes);
    CHECK(run1.records[i].theta_tfe == run3.records[i].theta_tfe);
    CHECK(run1.records[i].loglr_at_mle == run3.records[i].loglr_at_mle);
  }
  CHECK(records_to_csv(run1.records) == records_to_csv(run3.records));
}

TEST_CASE("centering at theta_hat (not theta0) is what matches the limit law") {
  auto sc = preset("example2");
  sc.ladder = {0.025};
  sc.replications = 200;
  sc.base_steps = 1 << 11;

  const auto run = run_scenario(sc, 2);
  REQUIRE(run.report.ks_stat.has_value());
  CHECK(*run.report.ks_stat < 0.12);  // correctly centered

  // mis-centering at theta0 pushes the KS against N(0, 1/T) near 1
  std::vector<double> bad;
  for (const auto& rec : run.records) bad.push_back((rec.theta_mle - sc.theta0) / rec.eps);
  const double ks_bad = ks_two_sample(bad, sample_gaussian(0.25, 4242, 10000));
  CHECK(ks_bad > 0.5);
}

TEST_CASE("scenario config round-trip reproduces the identical report") {
  auto sc = preset("disc-vs-disc");
  sc.ladder = {0.2, 0.1};
  sc.replications = 40;
  sc.base_steps = 1 << 10;
  sc.cp_grid_rule = false;

  RunConfig cfg;
  cfg.scenario = sc;
  const auto back = config_from_json(config_to_json(cfg));
  const auto r1 = run_scenario(sc, 2);
  const auto r2 = run_scenario(back.scenario, 2);
  CHECK(report_to_json(r1.report) == report_to_json(r2.report));
}

TEST_CASE("boundary-heavy rungs get flagged") {
  auto sc = preset("example1");
  sc.window = {0.45, 0.55};  // tiny window: estimates pinned at the edges
  sc.ladder = {0.4};
  sc.replications = 120;
  sc.base_steps = 1 << 10;
  sc.cp_grid_rule = false;
  sc.targets = {};
  const auto run = run_scenario(sc, 2);
  CHECK(run.report.rungs[0].boundary_frac > 0.05);
  CHECK(run.report.rungs[0].unreliable);
}
