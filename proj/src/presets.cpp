#include <cmath>

#include "misspec/errors.hpp"
#include "misspec/experiments.hpp"

namespace misspec {

namespace {

const double kPi = std::acos(-1.0);

Scenario base_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.ladder = {0.2, 0.1, 0.05, 0.025};
  s.replications = 1000;
  s.master_seed = 42;
  return s;
}

}  // namespace

Scenario preset(const std::string& name) {
  if (name == "example1") {
    // linear drift observed, sgn(t - theta) fitted: rate eps^{2/3}
    Scenario s = base_scenario(name);
    s.truth = SignalSpec::linear_drift();
    s.theta0 = 0.5;
    s.assumed = SignalSpec::sgn();
    s.horizon = 1.0;
    s.window = {0.1, 0.9};
    s.cp_grid_rule = true;
    s.estimators = {true, true, true};
    s.regime = RegimeTag::parse("disc-vs-smooth");
    s.targets.slope_min = 0.60;
    s.targets.slope_max = 0.73;
    s.targets.ks_max = 0.06;
    return s;
  }
  if (name == "example2") {
    // sgn observed, linear drift fitted: Gaussian errors at rate eps
    Scenario s = base_scenario(name);
    s.truth = SignalSpec::sgn();
    s.theta0 = 1.0;
    s.assumed = SignalSpec::linear_drift();
    s.horizon = 4.0;
    s.window = {0.5, 3.5};
    s.regime = RegimeTag::parse("smooth-vs-disc");
    s.targets.slope_min = 0.85;
    s.targets.slope_max = 1.15;
    s.targets.ks_max = 0.06;
    return s;
  }
  if (name == "disc-vs-smooth-general") {
    // smooth sine truth against a step model; interior KL minimizer at 0.8/pi
    Scenario s = base_scenario(name);
    s.truth = SignalSpec::sine(1.0, kPi);
    s.theta0 = 0.8;
    s.assumed = SignalSpec::sgn();
    s.horizon = 1.0;
    s.window = {0.05, 0.95};
    s.cp_grid_rule = true;
    s.regime = RegimeTag::parse("disc-vs-smooth");
    s.targets.slope_min = 0.55;
    s.targets.slope_max = 0.80;
    s.targets.ks_max = 0.06;
    return s;
  }
  if (name == "smooth-vs-disc-general") {
    // step truth h=1, g=0 at 1/2 against the sine family; theta_hat = pi/4
    Scenario s = base_scenario(name);
    s.truth = SignalSpec::change_point(Affine{1.0, 0.0}, Affine{0.0, 0.0});
    s.theta0 = 0.5;
    s.assumed = SignalSpec::sine(1.0, 3.0 * kPi);
    s.horizon = 1.0;
    s.window = {0.3, 0.96};
    s.ladder = {0.02, 0.014, 0.01};
    s.regime = RegimeTag::parse("smooth-vs-disc");
    s.targets.ks_max = 0.06;
    s.targets.ks_gate_eps = 0.0105;
    return s;
  }
  if (name == "disc-vs-disc") {
    // perturbed change-point truth satisfying (5-1)/(5-2): consistent, rate eps^2
    Scenario s = base_scenario(name);
    const Affine h{1.0, 0.0}, g{-1.0, 0.0};
    s.truth = SignalSpec::change_point(h, g, Affine{0.4, 0.0}, Affine{-0.4, 0.0});
    s.theta0 = 0.5;
    s.assumed = SignalSpec::change_point(h, g);
    s.horizon = 1.0;
    s.window = {0.1, 0.9};
    s.cp_grid_rule = true;
    s.regime = RegimeTag::parse("disc-vs-disc");
    s.targets.slope_min = 1.7;
    s.targets.slope_max = 2.3;
    return s;
  }
  if (name == "disc-vs-disc-violated") {
    // q crosses (g-h)/2 inside the window: KL minimizer biased to 0.3
    Scenario s = base_scenario(name);
    const Affine h{1.0, 0.0}, g{-1.0, 0.0};
    s.truth = SignalSpec::change_point(h, g, Affine{-0.4, -2.0}, Affine{0.0, 0.0});
    s.theta0 = 0.6;
    s.assumed = SignalSpec::change_point(h, g);
    s.horizon = 1.0;
    s.window = {0.1, 0.9};
    s.cp_grid_rule = true;
    s.regime = RegimeTag::parse("disc-vs-smooth");  // smooth truth near theta_hat
    return s;
  }
  if (name == "remark1-kappa") {
    // sgn|t-theta|^{3/2} truth, sgn fitted: rate eps^{1/2}
    Scenario s = base_scenario(name);
    s.truth = SignalSpec::power_sgn(1.5);
    s.theta0 = 1.0;
    s.assumed = SignalSpec::sgn();
    s.horizon = 2.0;
    s.window = {0.1, 1.9};
    s.cp_grid_rule = true;
    s.regime = RegimeTag::parse("remark1", 1.5);
    s.targets.slope_min = 0.43;
    s.targets.slope_max = 0.57;
    return s;
  }
  if (name == "cusp-kl-scan") {
    // cusp-type assumed model: KL scan only, limit law out of scope
    Scenario s = base_scenario(name);
    s.truth = SignalSpec::sine(1.0, 3.0 * kPi);
    s.theta0 = 0.5;
    s.assumed = SignalSpec::cusp(1.0, 0.25);
    s.horizon = 1.0;
    s.window = {0.2, 0.8};
    s.ladder.clear();
    s.replications = 0;
    s.regime = RegimeTag::parse("cusp-vs-smooth", 0.25);
    return s;
  }
  throw UnknownNameError("unknown preset: " + name +
                         " (run the 'presets' subcommand for the list)");
}

std::vector<std::string> preset_names() {
  return {"example1",
          "example2",
          "disc-vs-smooth-general",
          "smooth-vs-disc-general",
          "disc-vs-disc",
          "disc-vs-disc-violated",
          "remark1-kappa",
          "cusp-kl-scan"};
}

std::string preset_summary(const std::string& name) {
  if (name == "example1") return "linear drift vs sgn model, rate 2/3, argmax limit law";
  if (name == "example2") return "sgn truth vs linear drift model, closed-form MLE, rate 1";
  if (name == "disc-vs-smooth-general") return "sine truth vs step model, rate 2/3";
  if (name == "smooth-vs-disc-general") return "step truth vs sine model, Gaussian limit";
  if (name == "disc-vs-disc") return "perturbed change-point, (5-1)/(5-2) hold, rate 2";
  if (name == "disc-vs-disc-violated") return "perturbed change-point, (5-1) fails, biased limit";
  if (name == "remark1-kappa") return "power-sgn truth (kappa=3/2) vs sgn model, rate 1/2";
  if (name == "cusp-kl-scan") return "cusp assumed model, KL scan only";
  throw UnknownNameError("unknown preset: " + name);
}

}  // namespace misspec
