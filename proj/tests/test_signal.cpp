#include <doctest.h>

#include <cmath>

#include "misspec/errors.hpp"
#include "misspec/signal.hpp"

using namespace misspec;

TEST_CASE("signal evaluation across families") {
  CHECK(eval_signal(SignalSpec::power_sgn(1.0), 0.5, 0.75) == doctest::Approx(0.25));
  const auto step = SignalSpec::change_point(Affine{1.0, 0.0}, Affine{-1.0, 0.0});
  CHECK(eval_signal(step, 0.5, 0.25) == 1.0);
  CHECK(eval_signal(step, 0.5, 0.75) == -1.0);
  CHECK(eval_signal(SignalSpec::linear_drift(), 0.3, 0.3) == 0.0);

  // right-continuity at the jump, left limit on request
  CHECK(eval_signal(step, 0.5, 0.5) == -1.0);
  CHECK(eval_signal(step, 0.5, 0.5, Side::kLeft) == 1.0);

  const auto sgn = SignalSpec::sgn();
  CHECK(eval_signal(sgn, 0.5, 0.25) == -1.0);
  CHECK(eval_signal(sgn, 0.5, 0.75) == 1.0);
  CHECK(sgn.is_sgn());
  CHECK(sgn.family_tag() == "sgn");
  CHECK(step.family_tag() == "step-hg");

  // kappa = 1 power-sgn coincides with t - theta
  for (double t : {0.0, 0.2, 0.5, 0.9})
    CHECK(eval_signal(SignalSpec::power_sgn(1.0), 0.5, t) == doctest::Approx(t - 0.5));
}

TEST_CASE("invalid family parameters are rejected") {
  CHECK_THROWS_AS(SignalSpec::cusp(1.0, 0.6), InvalidSpecError);
  CHECK_THROWS_AS(SignalSpec::cusp(1.0, 0.0), InvalidSpecError);
  CHECK_THROWS_AS(SignalSpec::power_sgn(-1.0), InvalidSpecError);
}

TEST_CASE("theta derivatives") {
  CHECK(signal_dtheta(SignalSpec::linear_drift(), 0.3, 0.8) == -1.0);

  const auto sine = SignalSpec::sine(2.0, 3.0);
  for (double t : {0.1, 0.4, 0.9})
    CHECK(signal_dtheta(sine, 0.7, t) == doctest::Approx(-2.0 * std::cos(3.0 * t - 0.7)));

  // finite-difference oracle at step 1e-6
  const auto p2 = SignalSpec::power_sgn(2.0);
  CHECK(signal_dtheta(p2, 0.0, 1.0) == doctest::Approx(-2.0));
  CHECK(signal_dtheta(p2, 0.0, 1.0) ==
        doctest::Approx(signal_dtheta_fd(p2, 0.0, 1.0)).epsilon(1e-5));

  CHECK_THROWS_AS(signal_dtheta(SignalSpec::sgn(), 0.5, 0.5), NotDifferentiableError);
  CHECK(signal_dtheta(SignalSpec::sgn(), 0.5, 0.2) == 0.0);

  CHECK(signal_d2theta(sine, 0.7, 0.4) ==
        doctest::Approx(-2.0 * std::sin(3.0 * 0.4 - 0.7)));
}

TEST_CASE("exact panel integrals") {
  // linear drift over [0,1] at theta = 0.5 integrates to zero
  CHECK(signal_integral(SignalSpec::linear_drift(), 0.5, 0.0, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // sgn across its jump
  CHECK(signal_integral(SignalSpec::sgn(), 0.3, 0.0, 1.0) == doctest::Approx(0.4));
  // sine antiderivative
  const auto sine = SignalSpec::sine(1.5, 2.0);
  const double got = signal_integral(sine, 0.4, 0.1, 0.9);
  const double want = -(1.5 / 2.0) * (std::cos(2.0 * 0.9 - 0.4) - std::cos(2.0 * 0.1 - 0.4));
  CHECK(got == doctest::Approx(want).epsilon(1e-14));
  // power-sgn straddling theta
  CHECK(signal_integral(SignalSpec::power_sgn(1.0), 0.5, 0.0, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // perturbed change-point branches
  const auto pert = SignalSpec::change_point(Affine{1.0, 0.0}, Affine{-1.0, 0.0},
                                             Affine{0.4, 0.0}, Affine{-0.4, 0.0});
  CHECK(signal_integral(pert, 0.5, 0.0, 1.0) == doctest::Approx(0.5 * 1.4 - 0.5 * 1.4));
  CHECK(eval_signal(pert, 0.5, 0.2) == doctest::Approx(1.4));
  CHECK(eval_signal(pert, 0.5, 0.7) == doctest::Approx(-1.4));
}
