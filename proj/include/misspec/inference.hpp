#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "misspec/observation.hpp"
#include "misspec/profile.hpp"
#include "misspec/signal.hpp"
#include "misspec/time_grid.hpp"

namespace misspec {

inline constexpr int kBayesNodes = 4096;
inline constexpr double kLogUnderflow = -700.0;

struct Prior {
  std::function<double(double)> density;  // positive on the window; scale-free
  static Prior uniform() {
    return Prior{[](double) { return 1.0; }};
  }
};

struct EstimateRecord {
  int replication = 0;
  double eps = 0.0;
  double theta_mle = 0.0;
  std::optional<double> theta_bayes;
  std::optional<double> theta_tfe;
  double loglr_at_mle = 0.0;
  bool boundary = false;
  bool noiseless_objective = false;  // eps = 0 path: -Phi stood in for the log-LR
  double x_terminal = 0.0;
};

// Discretized pseudo log-likelihood ratio
//   (1/eps^2) [ sum_i M(theta,t_i) dX_{i+1} - 1/2 trap_i M(theta,t_i)^2 ]
// with left-endpoint Ito sums and node-trapezoid dt integrals, so for a
// change-point model the objective is exactly constant on grid cells of theta.
// On a noiseless path (eps = 0) the evaluator returns -Phi(theta) instead.
class LogLikelihood {
public:
  LogLikelihood(const SignalSpec& assumed, const ObservationPath& path);

  double operator()(double theta) const;
  bool piecewise_constant() const { return kind_ == Kind::kChangePoint; }
  bool noiseless() const { return kind_ == Kind::kNoiseless; }
  const ObservationPath& path() const { return *path_; }
  const SignalSpec& assumed() const { return assumed_; }

  // change-point structure: objective value over cell (t_k, t_{k+1}]
  double cell_value(std::int64_t k) const;

private:
  double generic(double theta) const;

  enum class Kind { kGeneric, kChangePoint, kLinear, kSine, kNoiseless };
  Kind kind_ = Kind::kGeneric;
  const ObservationPath* path_;
  SignalSpec assumed_;
  double inv_eps2_ = 0.0;
  // change-point prefixes
  std::vector<double> pre_dx_, post_dx_;  // sum_{i<=k} branch(t_i) dX_{i+1}
  std::vector<double> pre_w2_, post_w2_;  // sum_{i<=k} w_i branch(t_i)^2
  // linear-drift / sine sufficient statistics
  double stat_a_ = 0.0, stat_b_ = 0.0, q0_ = 0.0, q1_ = 0.0, q2_ = 0.0;
  double lin_vertex_ = 0.0, lin_peak_ = 0.0, lin_coef_ = 0.0;
  // noiseless fall-back
  std::shared_ptr<PhiEvaluator> phi_;
};

double log_pseudo_lr(const SignalSpec& assumed, double theta, const ObservationPath& path);

struct PmleResult {
  double theta = 0.0;
  double loglr = 0.0;
  bool boundary = false;
  bool noiseless = false;
};

// sup over the window of the pseudo-LR.  Change-point models: exact cell
// maximization via prefix sums, estimate = midpoint of the best cell, ties
// toward smaller theta.  Smooth models: 512-point scan + golden section.
PmleResult pmle(const LogLikelihood& loglr, const ParamWindow& window);
PmleResult pmle(const SignalSpec& assumed, const ParamWindow& window,
                const ObservationPath& path);

// Posterior mean with the log-LR max-normalized before exponentiation.
double bayes(const LogLikelihood& loglr, const ParamWindow& window, const Prior& prior);
double bayes(const SignalSpec& assumed, const ParamWindow& window, const Prior& prior,
             const ObservationPath& path);

// m(theta, t_i) = int_0^{t_i} M(theta, s) ds at the grid nodes (exact panels).
std::vector<double> m_cumulative(const SignalSpec& assumed, double theta, const TimeGrid& grid);

// Trajectory-fitting objective  int_0^T [X_t - m(theta, t)]^2 dt.
class TrajectoryObjective {
public:
  TrajectoryObjective(const SignalSpec& assumed, const ObservationPath& path);
  double operator()(double theta) const;

private:
  double generic(double theta) const;
  const ObservationPath* path_;
  SignalSpec assumed_;
  bool fast_ = false;
  // change-point prefixes: trapezoid cumulatives of (X-H)^2, (X-G)^2, (X-G)
  std::vector<double> cum_h2_, cum_g2_, cum_g1_, big_h_, big_g_;
};

struct TfeResult {
  double theta = 0.0;
  bool boundary = false;
};

// arginf of the trajectory-fitting objective; well-defined at eps = 0.
TfeResult tfe(const SignalSpec& assumed, const ParamWindow& window, const ObservationPath& path);

}  // namespace misspec
