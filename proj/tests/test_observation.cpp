#include <doctest.h>

#include <cmath>
#include <vector>

#include "misspec/observation.hpp"
#include "misspec/quadrature.hpp"
#include "misspec/stats.hpp"

using namespace misspec;

namespace {
StreamId stream_for(std::uint64_t seed, std::uint32_t rep,
                    rng::Role role = rng::Role::kPathNoise) {
  return StreamId{seed, rep, rng::role_word(role)};
}
}  // namespace

TEST_CASE("wiener paths are reproducible from their seed triple") {
  const auto grid = TimeGrid::make(1.0, 256);
  const auto a = sample_wiener(grid, stream_for(99, 3));
  const auto b = sample_wiener(grid, stream_for(99, 3));
  CHECK(a.increments == b.increments);
  const auto c = sample_wiener(grid, stream_for(99, 4));
  CHECK(a.increments != c.increments);
}

TEST_CASE("wiener terminal variance matches the horizon") {
  const auto grid = TimeGrid::make(2.0, 16);
  const std::size_t n = 100000;
  std::vector<double> terminals(n);
  for (std::size_t r = 0; r < n; ++r)
    terminals[r] = sample_wiener(grid, stream_for(7, std::uint32_t(r))).terminal();
  CHECK(std::abs(mean(terminals)) < 3.0 * std::sqrt(2.0 / double(n)));
  CHECK(sample_variance(terminals) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("distinct stream roles decorrelate") {
  const auto grid = TimeGrid::make(1.0, 16);
  const std::size_t n = 10000;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double x =
        sample_wiener(grid, stream_for(7, std::uint32_t(r), rng::Role::kLatticePos)).terminal();
    const double y =
        sample_wiener(grid, stream_for(7, std::uint32_t(r), rng::Role::kLatticeNeg)).terminal();
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double corr = sxy / std::sqrt(sxx * syy);
  CHECK(std::abs(corr) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("noiseless synthesis integrates the drift exactly") {
  const auto grid = TimeGrid::make(1.0, 1000);
  const auto w = sample_wiener(grid, stream_for(1, 0));

  auto path = synthesize(SignalSpec::linear_drift(), 0.5, 0.0, w);
  CHECK(path.values.front() == 0.0);
  CHECK(path.terminal() == doctest::Approx(0.0).epsilon(1e-14));

  path = synthesize(SignalSpec::sgn(), 0.3, 0.0, w);
  CHECK(path.terminal() == doctest::Approx(1.0 - 2.0 * 0.3));

  // jump splitting keeps the panel containing theta0 exact
  const auto grid2 = TimeGrid::make(1.0, 7);  // 0.3 is strictly inside a panel
  const auto w2 = sample_wiener(grid2, stream_for(1, 0));
  const auto path2 = synthesize(SignalSpec::sgn(), 0.3, 0.0, w2);
  CHECK(path2.terminal() == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("noise scaling is exact path-wise") {
  const auto grid = TimeGrid::make(1.0, 128);
  const auto w = sample_wiener(grid, stream_for(5, 2));
  const auto drift = synthesize(SignalSpec::linear_drift(), 0.4, 0.0, w);
  const auto p1 = synthesize(SignalSpec::linear_drift(), 0.4, 0.1, w);
  const auto p2 = synthesize(SignalSpec::linear_drift(), 0.4, 0.2, w);
  for (std::size_t i = 0; i < p1.values.size(); ++i)
    CHECK(p2.values[i] - drift.values[i] ==
          doctest::Approx(2.0 * (p1.values[i] - drift.values[i])).epsilon(1e-12));
}

TEST_CASE("terminal variance of the noise term") {
  const auto grid = TimeGrid::make(1.0, 64);
  const std::size_t n = 10000;
  const double eps = 0.3;
  std::vector<double> noise(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto w = sample_wiener(grid, stream_for(11, std::uint32_t(r)));
    // int_0^1 (t - 0.4) dt = 0.1
    noise[r] = synthesize(SignalSpec::linear_drift(), 0.4, eps, w).terminal() - 0.1;
  }
  CHECK(sample_variance(noise) == doctest::Approx(eps * eps * 1.0).epsilon(0.05));
}

TEST_CASE("ito integral: telescoping and indicators") {
  const auto grid = TimeGrid::make(1.0, 512);
  const auto w = sample_wiener(grid, stream_for(21, 0));
  const double w_T = w.terminal();
  CHECK(ito_integral([](double) { return 1.0; }, w) == doctest::Approx(w_T).epsilon(1e-12));

  // node-aligned indicator picks up the increment of W over [a, b)
  const double a = grid.node(128), b = grid.node(384);
  double w_a = 0.0, w_b = 0.0, acc = 0.0;
  for (std::int64_t i = 0; i < grid.steps; ++i) {
    acc += w.increments[std::size_t(i)];
    if (grid.node(i + 1) == a) w_a = acc;
    if (grid.node(i + 1) == b) w_b = acc;
  }
  const double got = ito_integral([&](double t) { return (t >= a && t < b) ? 1.0 : 0.0; }, w);
  CHECK(got == doctest::Approx(w_b - w_a).epsilon(1e-12));
}

TEST_CASE("ito isometry and the martingale property") {
  const auto grid = TimeGrid::make(1.0, 1024);
  const std::size_t n = 10000;
  const auto f = [](double t) { return t < 0.5 ? -1.0 : 1.0; };  // sgn(t - 1/2)
  std::vector<double> vals(n);
  for (std::size_t r = 0; r < n; ++r)
    vals[r] = ito_integral(f, sample_wiener(grid, stream_for(31, std::uint32_t(r))));
  // Var int f dW = int f^2 dt = 1
  CHECK(sample_variance(vals) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(mean(vals)) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("riemann integral with breakpoints") {
  const auto grid = TimeGrid::make(1.0, 1 << 14);
  CHECK(riemann_integral([](double, Side) { return 3.0; }, grid, {}) == doctest::Approx(3.0));

  const double theta = 0.25;  // node-aligned
  const auto sgn_f = [&](double t, Side side) {
    const bool before = t < theta || (t == theta && side == Side::kLeft);
    return before ? -1.0 : 1.0;
  };
  const std::vector<double> breaks{theta};
  CHECK(riemann_integral(sgn_f, grid, breaks) == doctest::Approx(1.0 - 2.0 * theta));

  const auto sq = [](double t, Side) { return t * t; };
  const auto grid4 = TimeGrid::make(1.0, 10000);
  CHECK(riemann_integral(sq, grid4, {}) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}
