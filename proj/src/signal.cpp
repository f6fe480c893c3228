#include "misspec/signal.hpp"

#include <algorithm>
#include <cmath>

namespace misspec {

SignalSpec SignalSpec::linear_drift() {
  SignalSpec s;
  s.family = Family::kLinearDrift;
  return s;
}

SignalSpec SignalSpec::sine(double amp, double omega) {
  SignalSpec s;
  s.family = Family::kSine;
  s.amp = amp;
  s.omega = omega;
  s.validate();
  return s;
}

SignalSpec SignalSpec::power_sgn(double kappa) {
  SignalSpec s;
  s.family = Family::kPowerSgn;
  s.kappa = kappa;
  s.validate();
  return s;
}

SignalSpec SignalSpec::cusp(double amp, double kappa) {
  SignalSpec s;
  s.family = Family::kCusp;
  s.amp = amp;
  s.kappa = kappa;
  s.validate();
  return s;
}

SignalSpec SignalSpec::change_point(Affine h, Affine g, Affine q, Affine r) {
  SignalSpec s;
  s.family = Family::kChangePoint;
  s.h = h;
  s.g = g;
  s.q = q;
  s.r = r;
  return s;
}

SignalSpec SignalSpec::sgn() { return change_point(Affine{-1.0, 0.0}, Affine{1.0, 0.0}); }

bool SignalSpec::is_sgn() const {
  return family == Family::kChangePoint && h.a0 == -1.0 && h.a1 == 0.0 && g.a0 == 1.0 &&
         g.a1 == 0.0 && q.is_zero() && r.is_zero();
}

void SignalSpec::validate() const {
  switch (family) {
    case Family::kPowerSgn:
      if (!(kappa > 0.0)) throw InvalidSpecError("power-sgn exponent must be > 0");
      break;
    case Family::kCusp:
      if (!(kappa > 0.0 && kappa < 0.5))
        throw InvalidSpecError("cusp exponent must lie in (0, 1/2)");
      break;
    case Family::kSine:
      if (!(omega > 0.0)) throw InvalidSpecError("sine frequency must be > 0");
      break;
    default:
      break;
  }
}

std::vector<double> SignalSpec::breakpoints(double theta) const {
  switch (family) {
    case Family::kChangePoint:
    case Family::kPowerSgn:
    case Family::kCusp:
      return {theta};
    default:
      return {};
  }
}

std::string SignalSpec::family_tag() const {
  switch (family) {
    case Family::kLinearDrift: return "linear-drift";
    case Family::kSine: return "sine";
    case Family::kPowerSgn: return "power-sgn";
    case Family::kCusp: return "cusp";
    case Family::kChangePoint: return is_sgn() ? "sgn" : "step-hg";
  }
  return "?";
}

double eval_signal(const SignalSpec& spec, double theta, double t, Side side) {
  spec.validate();
  switch (spec.family) {
    case Family::kLinearDrift:
      return t - theta;
    case Family::kSine:
      return spec.amp * std::sin(spec.omega * t - theta);
    case Family::kPowerSgn: {
      const double x = t - theta;
      if (x == 0.0) return 0.0;
      return (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), spec.kappa);
    }
    case Family::kCusp:
      return spec.amp * std::pow(std::abs(t - theta), spec.kappa);
    case Family::kChangePoint: {
      const bool before = (t < theta) || (t == theta && side == Side::kLeft);
      return before ? spec.before_jump(t) : spec.after_jump(t);
    }
  }
  return 0.0;
}

double signal_dtheta(const SignalSpec& spec, double theta, double t) {
  switch (spec.family) {
    case Family::kLinearDrift:
      return -1.0;
    case Family::kSine:
      return -spec.amp * std::cos(spec.omega * t - theta);
    case Family::kPowerSgn: {
      const double x = t - theta;
      if (x == 0.0 && spec.kappa < 1.0)
        throw NotDifferentiableError("power-sgn derivative singular at t = theta");
      return -spec.kappa * std::pow(std::abs(x), spec.kappa - 1.0);
    }
    case Family::kCusp: {
      const double x = t - theta;
      if (x == 0.0) throw NotDifferentiableError("cusp derivative singular at t = theta");
      return -spec.amp * spec.kappa * (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), spec.kappa - 1.0);
    }
    case Family::kChangePoint:
      if (t == theta)
        throw NotDifferentiableError("change-point model is not theta-differentiable at its jump");
      return 0.0;
  }
  return 0.0;
}

double signal_d2theta(const SignalSpec& spec, double theta, double t) {
  switch (spec.family) {
    case Family::kLinearDrift:
      return 0.0;
    case Family::kSine:
      return -spec.amp * std::sin(spec.omega * t - theta);
    case Family::kPowerSgn: {
      const double x = t - theta;
      if (x == 0.0) throw NotDifferentiableError("power-sgn second derivative singular at t = theta");
      return spec.kappa * (spec.kappa - 1.0) * (x > 0 ? 1.0 : -1.0) *
             std::pow(std::abs(x), spec.kappa - 2.0);
    }
    case Family::kCusp: {
      const double x = t - theta;
      if (x == 0.0) throw NotDifferentiableError("cusp second derivative singular at t = theta");
      return spec.amp * spec.kappa * (spec.kappa - 1.0) * std::pow(std::abs(x), spec.kappa - 2.0);
    }
    case Family::kChangePoint:
      if (t == theta)
        throw NotDifferentiableError("change-point model is not theta-differentiable at its jump");
      return 0.0;
  }
  return 0.0;
}

double signal_dt(const SignalSpec& spec, double theta, double t, Side side) {
  switch (spec.family) {
    case Family::kLinearDrift:
      return 1.0;
    case Family::kSine:
      return spec.amp * spec.omega * std::cos(spec.omega * t - theta);
    case Family::kPowerSgn: {
      const double x = t - theta;
      if (x == 0.0) throw NotDifferentiableError("power-sgn t-derivative singular at t = theta");
      return spec.kappa * std::pow(std::abs(x), spec.kappa - 1.0);
    }
    case Family::kCusp: {
      const double x = t - theta;
      if (x == 0.0) throw NotDifferentiableError("cusp t-derivative singular at t = theta");
      return spec.amp * spec.kappa * (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), spec.kappa - 1.0);
    }
    case Family::kChangePoint: {
      const bool before = (t < theta) || (t == theta && side == Side::kLeft);
      return before ? spec.h.slope() + spec.q.slope() : spec.g.slope() + spec.r.slope();
    }
  }
  return 0.0;
}

double signal_integral(const SignalSpec& spec, double theta, double a, double b) {
  spec.validate();
  switch (spec.family) {
    case Family::kLinearDrift:
      return 0.5 * (b * b - a * a) - theta * (b - a);
    case Family::kSine:
      return -(spec.amp / spec.omega) *
             (std::cos(spec.omega * b - theta) - std::cos(spec.omega * a - theta));
    case Family::kPowerSgn: {
      const auto anti = [&](double t) {
        return std::pow(std::abs(t - theta), spec.kappa + 1.0) / (spec.kappa + 1.0);
      };
      return anti(b) - anti(a);
    }
    case Family::kCusp: {
      const auto anti = [&](double t) {
        const double x = t - theta;
        return spec.amp * (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x), spec.kappa + 1.0) /
               (spec.kappa + 1.0);
      };
      return anti(b) - anti(a);
    }
    case Family::kChangePoint: {
      const double lo = std::min(a, b), hi = std::max(a, b);
      const double sign = (b >= a) ? 1.0 : -1.0;
      double total = 0.0;
      const double split = std::clamp(theta, lo, hi);
      if (split > lo) total += spec.h.integral(lo, split) + spec.q.integral(lo, split);
      if (hi > split) total += spec.g.integral(split, hi) + spec.r.integral(split, hi);
      return sign * total;
    }
  }
  return 0.0;
}

double signal_dtheta_fd(const SignalSpec& spec, double theta, double t, double step) {
  return (eval_signal(spec, theta + step, t) - eval_signal(spec, theta - step, t)) / (2.0 * step);
}

}  // namespace misspec
