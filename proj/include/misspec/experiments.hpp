#pragma once

#include <optional>
#include <string>
#include <vector>

#include "misspec/inference.hpp"
#include "misspec/limit_laws.hpp"
#include "misspec/observation.hpp"
#include "misspec/profile.hpp"
#include "misspec/signal.hpp"
#include "misspec/stats.hpp"
#include "misspec/time_grid.hpp"

namespace misspec {

struct EstimatorSet {
  bool mle = true;
  bool bayes = false;
  bool tfe = false;
};

// Pass/fail targets evaluated by run_scenario.  KS targets only gate once the
// smallest rung is deep enough into the asymptotic regime (and N >= 100).
struct ScenarioTargets {
  std::optional<double> slope_min;
  std::optional<double> slope_max;
  std::optional<double> ks_max;
  double ks_gate_eps = 0.05;
};

struct Scenario {
  std::string name;
  SignalSpec truth;
  double theta0 = 0.0;
  SignalSpec assumed;
  ParamWindow window;
  double horizon = 1.0;
  std::int64_t base_steps = 1 << 14;
  bool cp_grid_rule = false;  // n = max(base, ceil(50/eps^2)) for change-point assumed models
  std::vector<double> ladder;  // descending eps; empty = deterministic profile only
  int replications = 1000;
  std::uint64_t master_seed = 1;
  EstimatorSet estimators;
  RegimeTag regime;
  ScenarioTargets targets;

  TimeGrid grid_for(double eps) const;
  void validate() const;
};

struct RungStats {
  double eps = 0.0;
  std::int64_t grid_steps = 0;
  int replications = 0;
  double median_abs_err = 0.0;         // |mle - theta_hat|
  double median_abs_err_theta0 = 0.0;  // |mle - theta0|
  double mean_err = 0.0;
  double norm_abs_mom1 = 0.0;  // E|err/eps^rho|
  double norm_abs_mom2 = 0.0;  // E|err/eps^rho|^2
  double boundary_frac = 0.0;
  bool unreliable = false;  // > 5% boundary hits
};

struct TargetResult {
  std::string name;
  double value = 0.0;
  std::string constraint;
  bool pass = true;
  bool gated = true;  // false: reported only (low N, coarse eps, or soft check)
};

struct McReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string regime;
  double rate_exp = 0.0;
  double theta0 = 0.0;
  double theta_hat = 0.0;
  double phi_hat = 0.0;
  double jump_delta = 0.0;
  double curvature = 0.0;
  bool curvature_quadratic = true;
  double gamma = 0.0;
  double minorant = 0.0;
  std::optional<double> mm_residual;
  std::optional<double> fisher;
  std::optional<double> d_squared;
  std::vector<RungStats> rungs;
  std::optional<double> slope;
  std::optional<double> slope_stderr;
  std::optional<double> ks_stat;
  std::string ks_reference;
  std::size_t ks_sample = 0, ks_reference_n = 0;
  std::vector<TargetResult> targets;
  bool gating_enabled = true;
  bool all_pass = true;
  double wall_seconds = 0.0;  // in-memory only, never serialized
};

struct ScenarioRun {
  McReport report;
  std::vector<EstimateRecord> records;  // ordered by (rung, replication)
  DeterministicProfile profile;
};

// Full Monte Carlo campaign: deterministic profile with fail-fast minorant
// check, replication sweeps per rung (deterministic under any thread count),
// per-rung aggregation, rate regression, and a KS comparison of normalized
// errors against the regime's limit law at the smallest rung.
ScenarioRun run_scenario(const Scenario& scenario, int threads = 1);

// least squares of log(median |error|) on log eps
LineFit rate_regression(std::span<const double> eps, std::span<const double> medians);

// Observation path for one (rung, replication) cell, exactly as run_scenario
// generates it.
ObservationPath scenario_path(const Scenario& scenario, std::size_t rung, std::uint32_t rep);

Scenario preset(const std::string& name);
std::vector<std::string> preset_names();
std::string preset_summary(const std::string& name);

}  // namespace misspec
