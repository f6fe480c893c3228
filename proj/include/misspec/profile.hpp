#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "misspec/quadrature.hpp"
#include "misspec/signal.hpp"
#include "misspec/time_grid.hpp"

namespace misspec {

// Optimizer tolerances shared across the project.
inline constexpr double kTolThetaRel = 1e-8;   // of window width
inline constexpr double kTolCurvRel = 0.01;
inline constexpr double kTolMmRel = 1e-6;      // of signal scale
inline constexpr int kScanPoints = 512;

// L2 misfit Phi(theta) = int_0^T [M(theta,t) - S(theta0,t)]^2 dt, with
// jump-aware quadrature.  Change-point assumed models get O(1) evaluation
// from prefix integrals over the time grid.
class PhiEvaluator {
public:
  PhiEvaluator(SignalSpec assumed, SignalSpec truth, double theta0, TimeGrid grid);

  double operator()(double theta) const;
  bool piecewise_fast() const { return !cum_before_.empty(); }
  const TimeGrid& grid() const { return grid_; }

private:
  double generic(double theta) const;
  double cumulative(const std::vector<double>& cum, bool before, double theta) const;

  SignalSpec assumed_, truth_;
  double theta0_;
  TimeGrid grid_;
  std::vector<double> truth_breaks_;
  // change-point fast path: cumulative integrals of (before-S)^2 and (after-S)^2
  std::vector<double> cum_before_, cum_after_;
};

double phi(const SignalSpec& assumed, const SignalSpec& truth, double theta0, double theta,
           const TimeGrid& grid);

// Golden-section minimization of f on [a, b] down to bracket width tol.
double golden_minimize(const std::function<double(double)>& f, double a, double b, double tol);

// argmin of Phi over the window: coarse scan (time-grid nodes for
// change-point assumed models, 512 points otherwise), golden-section refine.
// Throws BoundaryMinimizerError / NonUniqueMinimizerError in the degenerate
// regimes where no interior limit theory applies.
double kl_minimizer(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                    const ParamWindow& window, const TimeGrid& grid);

// S(theta0, theta_hat) - (h + g)(theta_hat)/2, the first-order condition of the
// change-point KL minimum.  S at one of its own jumps is read as the midpoint
// of its one-sided limits.
double necessary_condition_residual(const SignalSpec& assumed, const SignalSpec& truth,
                                    double theta0, double theta_hat, const TimeGrid& grid);

struct CurvatureCp {
  double value = 0.0;      // second difference of Phi at theta_hat (authoritative)
  double analytic = 0.0;   // 2[h-S][h'-S'] - 2[g-S][g'-S'], NaN if S jumps at theta_hat
  bool quadratic = true;   // false when the oracle does not stabilize (kinked Phi)
};

// Curvature of Phi at an interior change-point KL minimum.
CurvatureCp curvature_cp(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                         double theta_hat, const TimeGrid& grid);

// u^2-coefficient of the smooth-model log-likelihood expansion:
// int Mdd(M - S) dt + int Md^2 dt.  Equals half of Phi''(theta_hat).
double curvature_smooth(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                        double theta_hat, const TimeGrid& grid);

// int Md(theta, t)^2 dt; closed forms where the quadrature would be singular.
double fisher_info(const SignalSpec& assumed, double theta, const TimeGrid& grid);

// Largest constant kappa (per the standard minorization argument) with
// Phi(theta) - Phi(theta_hat) >= kappa (theta - theta_hat)^2 verified at each
// tabulated point.  nu starts at width/10 and halves on failure.
double minorant_kappa(std::span<const double> thetas, std::span<const double> phis,
                      double theta_hat, double phi_hat, double curvature,
                      const ParamWindow& window);

struct Check5152Report {
  double margin_51 = 0.0;  // min of q - (g - h)/2 over the window
  double margin_52 = 0.0;  // min of (h - g)/2 - r over the window
  bool ok_51 = false;
  bool ok_52 = false;
  bool verdict = false;    // both strict inequalities hold
};

// Conditions (5-1)/(5-2) for consistent estimation under a perturbed
// change-point truth; requires h - g > 0 on the window.
Check5152Report check_5152(const Affine& h, const Affine& g, const Affine& q, const Affine& r,
                           const ParamWindow& window, const TimeGrid& grid);

// Everything deterministic one misspecification pairing implies.
struct DeterministicProfile {
  std::vector<double> thetas;  // tabulation grid (kScanPoints)
  std::vector<double> phis;
  double theta_hat = 0.0;
  double phi_hat = 0.0;
  double curvature = 0.0;        // Phi'' oracle (cp) or u^2-coefficient (smooth)
  bool curvature_quadratic = true;
  double jump_delta = 0.0;       // |h - g|(theta_hat), change-point assumed only
  double gamma = 0.0;            // Phi''/2, drift coefficient of the argmax law
  double kappa_minorant = 0.0;
  std::optional<double> mm_residual;  // change-point assumed
  std::optional<double> fisher;       // smooth assumed
  std::optional<double> d_squared;    // smooth assumed: fisher / curvature^2
};

DeterministicProfile build_profile(const SignalSpec& assumed, const SignalSpec& truth,
                                   double theta0, const ParamWindow& window, const TimeGrid& grid);

}  // namespace misspec
