#pragma once

#include <string>
#include <vector>

#include "misspec/errors.hpp"

namespace misspec {

// Affine time function a0 + a1*t.  Rich enough for every registered h, g, q, r.
struct Affine {
  double a0 = 0.0;
  double a1 = 0.0;

  double operator()(double t) const { return a0 + a1 * t; }
  double slope() const { return a1; }
  // integral over [a, b]
  double integral(double a, double b) const {
    return a0 * (b - a) + 0.5 * a1 * (b * b - a * a);
  }
  bool is_zero() const { return a0 == 0.0 && a1 == 0.0; }
};

enum class Family {
  kLinearDrift,  // t - theta
  kSine,         // amp * sin(omega*t - theta)
  kPowerSgn,     // sgn(t-theta)|t-theta|^kappa, kappa > 0
  kCusp,         // amp * |t-theta|^kappa, kappa in (0, 1/2)
  kChangePoint,  // (h+q)(t) for t < theta, (g+r)(t) for t >= theta
};

// Which one-sided limit to take when evaluating exactly at a jump.
enum class Side { kLeft, kRight };

// A parametric signal family, evaluable at (theta, t).
struct SignalSpec {
  Family family = Family::kLinearDrift;
  double amp = 1.0;
  double omega = 1.0;
  double kappa = 1.0;
  Affine h, g;  // change-point branches: h before the jump, g at and after it
  Affine q, r;  // additive perturbations on the h/g branches (default zero)

  static SignalSpec linear_drift();
  static SignalSpec sine(double amp, double omega);
  static SignalSpec power_sgn(double kappa);
  static SignalSpec cusp(double amp, double kappa);
  static SignalSpec change_point(Affine h, Affine g, Affine q = {}, Affine r = {});
  static SignalSpec sgn();  // change_point(-1, +1), the sgn(t - theta) model

  bool is_change_point() const { return family == Family::kChangePoint; }
  bool is_sgn() const;
  void validate() const;

  // h + q and g + r evaluated at t.
  double before_jump(double t) const { return h(t) + q(t); }
  double after_jump(double t) const { return g(t) + r(t); }

  // t-locations where the signal or its t-derivative jumps, for quadrature splitting.
  std::vector<double> breakpoints(double theta) const;

  std::string family_tag() const;
};

// Signal value; at a change-point's jump the convention is M(theta, theta) = g(theta)
// (right-continuous), with Side::kLeft giving the other one-sided limit.
double eval_signal(const SignalSpec& spec, double theta, double t, Side side = Side::kRight);

// dM/dtheta.  Change-point families are flat in theta away from the jump and
// not differentiable at it.
double signal_dtheta(const SignalSpec& spec, double theta, double t);

// d2M/dtheta2 where the family permits.
double signal_d2theta(const SignalSpec& spec, double theta, double t);

// dM/dt (one-sided at jumps).
double signal_dt(const SignalSpec& spec, double theta, double t, Side side = Side::kRight);

// Exact integral of t |-> M(theta, t) over [a, b] (closed-form antiderivatives).
double signal_integral(const SignalSpec& spec, double theta, double a, double b);

// Central finite difference in theta, for families without a registered closed form.
double signal_dtheta_fd(const SignalSpec& spec, double theta, double t, double step = 1e-6);

}  // namespace misspec
