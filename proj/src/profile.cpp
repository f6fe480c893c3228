#include "misspec/profile.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "misspec/errors.hpp"

namespace misspec {

namespace {

std::vector<double> merged_breakpoints(const SignalSpec& assumed, double theta,
                                       const SignalSpec& truth, double theta0) {
  auto breaks = assumed.breakpoints(theta);
  for (double b : truth.breakpoints(theta0)) breaks.push_back(b);
  return breaks;
}

std::vector<double> scan_thetas(const ParamWindow& window, double margin, int count) {
  const double a = window.lo + margin, b = window.hi - margin;
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * double(i) / double(count - 1);
  return out;
}

}  // namespace

PhiEvaluator::PhiEvaluator(SignalSpec assumed, SignalSpec truth, double theta0, TimeGrid grid)
    : assumed_(std::move(assumed)), truth_(std::move(truth)), theta0_(theta0), grid_(grid) {
  truth_breaks_ = truth_.breakpoints(theta0_);
  if (!assumed_.is_change_point()) return;

  const auto n = std::size_t(grid_.steps);
  cum_before_.assign(n + 1, 0.0);
  cum_after_.assign(n + 1, 0.0);
  const auto before_f = [&](double t, Side side) {
    const double d = assumed_.before_jump(t) - eval_signal(truth_, theta0_, t, side);
    return d * d;
  };
  const auto after_f = [&](double t, Side side) {
    const double d = assumed_.after_jump(t) - eval_signal(truth_, theta0_, t, side);
    return d * d;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double a = grid_.node(i), b = grid_.node(i + 1);
    cum_before_[i + 1] = cum_before_[i] + integrate_interval(before_f, a, b, grid_, truth_breaks_);
    cum_after_[i + 1] = cum_after_[i] + integrate_interval(after_f, a, b, grid_, truth_breaks_);
  }
}

double PhiEvaluator::cumulative(const std::vector<double>& cum, bool before, double theta) const {
  const double dt = grid_.dt();
  const double clamped = std::clamp(theta, 0.0, grid_.horizon);
  auto k = std::int64_t(clamped / dt);
  k = std::clamp<std::int64_t>(k, 0, grid_.steps);
  double t_k = grid_.node(k);
  if (t_k > clamped) {
    --k;
    t_k = grid_.node(k);
  }
  const auto f = [&](double t, Side side) {
    const double branch = before ? assumed_.before_jump(t) : assumed_.after_jump(t);
    const double d = branch - eval_signal(truth_, theta0_, t, side);
    return d * d;
  };
  return cum[std::size_t(k)] + integrate_interval(f, t_k, clamped, grid_, truth_breaks_);
}

double PhiEvaluator::operator()(double theta) const {
  if (!piecewise_fast()) return generic(theta);
  return cumulative(cum_before_, true, theta) + cum_after_.back() -
         cumulative(cum_after_, false, theta);
}

double PhiEvaluator::generic(double theta) const {
  const auto breaks = merged_breakpoints(assumed_, theta, truth_, theta0_);
  const auto f = [&](double t, Side side) {
    const double d =
        eval_signal(assumed_, theta, t, side) - eval_signal(truth_, theta0_, t, side);
    return d * d;
  };
  return integrate_grid(f, grid_, breaks);
}

double phi(const SignalSpec& assumed, const SignalSpec& truth, double theta0, double theta,
           const TimeGrid& grid) {
  const auto breaks = merged_breakpoints(assumed, theta, truth, theta0);
  const auto f = [&](double t, Side side) {
    const double d = eval_signal(assumed, theta, t, side) - eval_signal(truth, theta0, t, side);
    return d * d;
  };
  return integrate_grid(f, grid, breaks);
}

double golden_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - (b - a) * invphi;
  double d = a + (b - a) * invphi;
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * invphi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * invphi;
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

struct CoarseScan {
  std::vector<double> thetas;
  std::vector<double> values;
  std::size_t argmin = 0;
};

CoarseScan coarse_scan(const PhiEvaluator& eval, const ParamWindow& window) {
  CoarseScan scan;
  const double dt = eval.grid().dt();
  if (eval.piecewise_fast()) {
    const auto& grid = eval.grid();
    for (std::int64_t i = 0; i <= grid.steps; ++i) {
      const double t = grid.node(i);
      if (t < window.lo + dt || t > window.hi - dt) continue;
      scan.thetas.push_back(t);
    }
  } else {
    scan.thetas = scan_thetas(window, dt, kScanPoints);
  }
  if (scan.thetas.size() < 3)
    throw InvalidSpecError("parameter window too narrow for the scan grid");
  scan.values.resize(scan.thetas.size());
  for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
    scan.values[i] = eval(scan.thetas[i]);
    if (scan.values[i] < scan.values[scan.argmin]) scan.argmin = i;
  }
  return scan;
}

}  // namespace

double kl_minimizer(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                    const ParamWindow& window, const TimeGrid& grid) {
  PhiEvaluator eval(assumed, truth, theta0, grid);
  const auto scan = coarse_scan(eval, window);
  const std::size_t j = scan.argmin;
  const std::size_t last = scan.thetas.size() - 1;
  const double vmin = scan.values[j];
  double vmax = vmin;
  for (double v : scan.values) vmax = std::max(vmax, v);
  const double tol_same = 1e-9 * (vmax - vmin);
  if (vmax - vmin <= tol_same)
    throw NonUniqueMinimizerError("Phi is flat over the window; any point minimizes it");

  // The near-minimal points must form one contiguous run around the argmin;
  // a run touching the scan edge is the boundary regime of the minimizer.
  std::size_t run_lo = j, run_hi = j;
  while (run_lo > 0 && scan.values[run_lo - 1] - vmin <= tol_same) --run_lo;
  while (run_hi < last && scan.values[run_hi + 1] - vmin <= tol_same) ++run_hi;
  if (run_lo == 0 || run_hi == last)
    throw BoundaryMinimizerError("KL minimizer sits on the window boundary");
  for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
    if (i >= run_lo && i <= run_hi) continue;
    if (scan.values[i] - vmin <= tol_same)
      throw NonUniqueMinimizerError("multiple KL minimizers within tolerance");
  }

  const double tol = kTolThetaRel * window.width();
  return golden_minimize([&](double th) { return eval(th); }, scan.thetas[run_lo - 1],
                         scan.thetas[run_hi + 1], tol);
}

namespace {

// One-sided truth values at theta_hat; a minimizer within numerical
// resolution of a truth breakpoint is read as sitting exactly on it.
std::pair<double, double> sided_truth(const SignalSpec& truth, double theta0, double theta_hat,
                                      const TimeGrid& grid) {
  const double snap = 1e-7 * grid.horizon;
  double at = theta_hat;
  for (double bp : truth.breakpoints(theta0))
    if (std::abs(theta_hat - bp) <= snap) at = bp;
  return {eval_signal(truth, theta0, at, Side::kLeft),
          eval_signal(truth, theta0, at, Side::kRight)};
}

}  // namespace

double necessary_condition_residual(const SignalSpec& assumed, const SignalSpec& truth,
                                    double theta0, double theta_hat, const TimeGrid& grid) {
  if (!assumed.is_change_point())
    throw NotApplicableError("necessary condition applies to change-point assumed models");
  const auto [s_left, s_right] = sided_truth(truth, theta0, theta_hat, grid);
  const double s_mid = 0.5 * (s_left + s_right);
  const double m_mid = 0.5 * (assumed.before_jump(theta_hat) + assumed.after_jump(theta_hat));
  return s_mid - m_mid;
}

CurvatureCp curvature_cp(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                         double theta_hat, const TimeGrid& grid) {
  if (!assumed.is_change_point())
    throw NotApplicableError("curvature_cp applies to change-point assumed models");
  PhiEvaluator eval(assumed, truth, theta0, grid);

  double h_fine = 1e-3, h_coarse = 1e-2;
  while (theta_hat - h_coarse <= 0.0 || theta_hat + h_coarse >= grid.horizon) {
    h_fine *= 0.5;
    h_coarse *= 0.5;
  }
  const double phi_hat = eval(theta_hat);
  const auto oracle = [&](double h) {
    return (eval(theta_hat + h) - 2.0 * phi_hat + eval(theta_hat - h)) / (h * h);
  };
  CurvatureCp out;
  out.value = oracle(h_fine);
  const double coarse = oracle(h_coarse);
  const double scale = std::max({std::abs(out.value), std::abs(coarse), 1e-300});
  out.quadratic = std::abs(out.value - coarse) <= 0.2 * scale;

  const auto [s_left, s_right] = sided_truth(truth, theta0, theta_hat, grid);
  if (s_left == s_right) {
    const double s = s_right;
    const double sp = signal_dt(truth, theta0, theta_hat);
    const double hb = assumed.before_jump(theta_hat);
    const double gb = assumed.after_jump(theta_hat);
    const double hp = assumed.h.slope() + assumed.q.slope();
    const double gp = assumed.g.slope() + assumed.r.slope();
    out.analytic = 2.0 * (hb - s) * (hp - sp) - 2.0 * (gb - s) * (gp - sp);
  } else {
    out.analytic = std::numeric_limits<double>::quiet_NaN();
  }

  if (out.quadratic && out.value <= 0.0)
    throw ConditionM4ViolatedError("Phi curvature at the KL minimizer is not positive");
  return out;
}

double curvature_smooth(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                        double theta_hat, const TimeGrid& grid) {
  if (assumed.is_change_point())
    throw NotApplicableError("curvature_smooth applies to theta-smooth assumed models");
  const auto breaks = merged_breakpoints(assumed, theta_hat, truth, theta0);
  const auto f = [&](double t, Side side) {
    const double m = eval_signal(assumed, theta_hat, t, side);
    const double s = eval_signal(truth, theta0, t, side);
    const double md = signal_dtheta(assumed, theta_hat, t);
    const double mdd = signal_d2theta(assumed, theta_hat, t);
    return mdd * (m - s) + md * md;
  };
  const double value = integrate_grid(f, grid, breaks);
  if (value <= 0.0)
    throw ConditionR4ViolatedError("smooth-model curvature at the KL minimizer is not positive");

  double h = 1e-3;
  while (theta_hat - h <= 0.0 || theta_hat + h >= grid.horizon) h *= 0.5;
  PhiEvaluator eval(assumed, truth, theta0, grid);
  const double half_dd =
      0.5 * (eval(theta_hat + h) - 2.0 * eval(theta_hat) + eval(theta_hat - h)) / (h * h);
  if (std::abs(value - half_dd) > 5.0 * kTolCurvRel * std::abs(value))
    throw InternalConsistencyError("curvature disagrees with the half second-difference of Phi");
  return value;
}

double fisher_info(const SignalSpec& assumed, double theta, const TimeGrid& grid) {
  switch (assumed.family) {
    case Family::kChangePoint:
      throw NotApplicableError("Fisher information is undefined for change-point models");
    case Family::kCusp:
      throw NotApplicableError("Fisher information diverges for cusp models");
    case Family::kPowerSgn: {
      if (assumed.kappa <= 0.5)
        throw NotApplicableError("Fisher information diverges for power-sgn with kappa <= 1/2");
      const double k = assumed.kappa, e = 2.0 * k - 1.0, T = grid.horizon;
      return k * k * (std::pow(theta, e) + std::pow(T - theta, e)) / e;
    }
    default: {
      const auto f = [&](double t, Side) {
        const double d = signal_dtheta(assumed, theta, t);
        return d * d;
      };
      return integrate_grid(f, grid, {});
    }
  }
}

double minorant_kappa(std::span<const double> thetas, std::span<const double> phis,
                      double theta_hat, double phi_hat, double curvature,
                      const ParamWindow& window) {
  const double width = window.width();
  double nu = width / 10.0;
  for (int attempt = 0; attempt < 10; ++attempt, nu *= 0.5) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < thetas.size(); ++i)
      if (std::abs(thetas[i] - theta_hat) > nu) m = std::min(m, phis[i] - phi_hat);
    if (!std::isfinite(m) || m <= 0.0) continue;

    double kappa = m / (width * width);
    if (curvature > 0.0) kappa = std::min(kappa, curvature / 4.0);

    bool ok = true;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double d = thetas[i] - theta_hat;
      const double allow = 32.0 * DBL_EPSILON * (std::abs(phis[i]) + std::abs(phi_hat));
      if (phis[i] - phi_hat < kappa * d * d - allow) {
        ok = false;
        break;
      }
    }
    if (ok) return kappa;
  }
  throw InternalConsistencyError("no quadratic minorant found; minimizer looks ill-posed");
}

Check5152Report check_5152(const Affine& h, const Affine& g, const Affine& q, const Affine& r,
                           const ParamWindow& window, const TimeGrid& grid) {
  std::vector<double> points{window.lo, window.hi};
  for (std::int64_t i = 0; i <= grid.steps; ++i) {
    const double t = grid.node(i);
    if (t > window.lo && t < window.hi) points.push_back(t);
  }
  Check5152Report rep;
  rep.margin_51 = rep.margin_52 = std::numeric_limits<double>::infinity();
  double jump_min = std::numeric_limits<double>::infinity();
  for (double t : points) {
    const double jump = h(t) - g(t);
    jump_min = std::min(jump_min, jump);
    rep.margin_51 = std::min(rep.margin_51, q(t) - (g(t) - h(t)) / 2.0);
    rep.margin_52 = std::min(rep.margin_52, (h(t) - g(t)) / 2.0 - r(t));
  }
  if (jump_min <= 0.0)
    throw AssumptionViolatedError("h - g must stay positive on the window");
  rep.ok_51 = rep.margin_51 > 0.0;
  rep.ok_52 = rep.margin_52 > 0.0;
  rep.verdict = rep.ok_51 && rep.ok_52;
  return rep;
}

DeterministicProfile build_profile(const SignalSpec& assumed, const SignalSpec& truth,
                                   double theta0, const ParamWindow& window,
                                   const TimeGrid& grid) {
  DeterministicProfile p;
  p.theta_hat = kl_minimizer(assumed, truth, theta0, window, grid);

  PhiEvaluator eval(assumed, truth, theta0, grid);
  p.thetas = scan_thetas(window, grid.dt(), kScanPoints);
  p.phis.resize(p.thetas.size());
  p.phi_hat = eval(p.theta_hat);
  for (std::size_t i = 0; i < p.thetas.size(); ++i) {
    p.phis[i] = eval(p.thetas[i]);
    p.phi_hat = std::min(p.phi_hat, p.phis[i]);
  }

  double full_curvature = 0.0;
  if (assumed.is_change_point()) {
    const auto curv = curvature_cp(assumed, truth, theta0, p.theta_hat, grid);
    p.curvature = curv.value;
    p.curvature_quadratic = curv.quadratic;
    p.gamma = 0.5 * curv.value;
    full_curvature = curv.value;
    p.jump_delta =
        std::abs(assumed.before_jump(p.theta_hat) - assumed.after_jump(p.theta_hat));
    p.mm_residual = necessary_condition_residual(assumed, truth, theta0, p.theta_hat, grid);
  } else {
    try {
      p.curvature = curvature_smooth(assumed, truth, theta0, p.theta_hat, grid);
      p.curvature_quadratic = true;
    } catch (const NotDifferentiableError&) {
      // singular families (cusp): fall back to the second-difference oracle
      double h_fine = 1e-3, h_coarse = 1e-2;
      while (p.theta_hat - h_coarse <= 0.0 || p.theta_hat + h_coarse >= grid.horizon) {
        h_fine *= 0.5;
        h_coarse *= 0.5;
      }
      const auto oracle = [&](double h) {
        return (eval(p.theta_hat + h) - 2.0 * eval(p.theta_hat) + eval(p.theta_hat - h)) / (h * h);
      };
      const double fine = oracle(h_fine), coarse = oracle(h_coarse);
      p.curvature = 0.5 * fine;
      p.curvature_quadratic =
          std::abs(fine - coarse) <= 0.2 * std::max({std::abs(fine), std::abs(coarse), 1e-300});
    }
    p.gamma = p.curvature;
    full_curvature = 2.0 * p.curvature;
    try {
      p.fisher = fisher_info(assumed, p.theta_hat, grid);
      p.d_squared = *p.fisher / (p.curvature * p.curvature);
    } catch (const NotApplicableError&) {
      // cusp-type assumed model: infinite Fisher information, no Gaussian limit
    }
  }

  p.kappa_minorant =
      minorant_kappa(p.thetas, p.phis, p.theta_hat, p.phi_hat, full_curvature, window);
  return p;
}

}  // namespace misspec
