#include "misspec/inference.hpp"

#include <algorithm>
#include <cmath>

#include "misspec/errors.hpp"

namespace misspec {

namespace {

// node-trapezoid weight
inline double trap_w(std::int64_t i, std::int64_t n, double dt) {
  return (i == 0 || i == n) ? 0.5 * dt : dt;
}

// cell (t_k, t_{k+1}] containing theta
inline std::int64_t cell_of(double theta, const TimeGrid& grid) {
  const double dt = grid.dt();
  auto k = std::int64_t(std::ceil(theta / dt)) - 1;
  return std::clamp<std::int64_t>(k, 0, grid.steps - 1);
}

}  // namespace

LogLikelihood::LogLikelihood(const SignalSpec& assumed, const ObservationPath& path)
    : path_(&path), assumed_(assumed) {
  assumed_.validate();
  const auto& grid = path.grid;
  const auto n = grid.steps;

  if (path.eps == 0.0) {
    kind_ = Kind::kNoiseless;
    phi_ = std::make_shared<PhiEvaluator>(assumed_, path.provenance.truth, path.provenance.theta0,
                                          grid);
    return;
  }
  inv_eps2_ = 1.0 / (path.eps * path.eps);

  switch (assumed_.family) {
    case Family::kChangePoint: {
      kind_ = Kind::kChangePoint;
      pre_dx_.resize(std::size_t(n));
      post_dx_.resize(std::size_t(n));
      pre_w2_.resize(std::size_t(n) + 1);
      post_w2_.resize(std::size_t(n) + 1);
      double pb = 0, pa = 0, wb = 0, wa = 0;
      const double dt = grid.dt();
      for (std::int64_t i = 0; i <= n; ++i) {
        const double t = grid.node(i);
        const double before = assumed_.before_jump(t);
        const double after = assumed_.after_jump(t);
        const double w = trap_w(i, n, dt);
        wb += w * before * before;
        wa += w * after * after;
        pre_w2_[std::size_t(i)] = wb;
        post_w2_[std::size_t(i)] = wa;
        if (i < n) {
          const double dx = path.increment(i);
          pb += before * dx;
          pa += after * dx;
          pre_dx_[std::size_t(i)] = pb;
          post_dx_[std::size_t(i)] = pa;
        }
      }
      break;
    }
    case Family::kLinearDrift: {
      kind_ = Kind::kLinear;
      const double dt = grid.dt();
      for (std::int64_t i = 0; i < n; ++i) stat_a_ += grid.node(i) * path.increment(i);
      for (std::int64_t i = 0; i <= n; ++i) {
        const double t = grid.node(i), w = trap_w(i, n, dt);
        q0_ += w;
        q1_ += w * t;
        q2_ += w * t * t;
      }
      // exact parabola in vertex form: evaluating differences near the peak
      // this way avoids the cancellation that would blur the argmax
      lin_vertex_ = (q1_ - path.terminal()) / q0_;
      lin_peak_ = inv_eps2_ *
                  (stat_a_ - lin_vertex_ * path.terminal() -
                   0.5 * (q2_ - 2.0 * lin_vertex_ * q1_ + lin_vertex_ * lin_vertex_ * q0_));
      lin_coef_ = 0.5 * q0_ * inv_eps2_;
      break;
    }
    case Family::kSine: {
      kind_ = Kind::kSine;
      const double dt = grid.dt();
      for (std::int64_t i = 0; i < n; ++i) {
        const double t = grid.node(i), dx = path.increment(i);
        stat_a_ += std::sin(assumed_.omega * t) * dx;
        stat_b_ += std::cos(assumed_.omega * t) * dx;
      }
      for (std::int64_t i = 0; i <= n; ++i) {
        const double t = grid.node(i), w = trap_w(i, n, dt);
        q0_ += w;
        q1_ += w * std::cos(2.0 * assumed_.omega * t);
        q2_ += w * std::sin(2.0 * assumed_.omega * t);
      }
      break;
    }
    default:
      kind_ = Kind::kGeneric;
      break;
  }
}

double LogLikelihood::cell_value(std::int64_t k) const {
  const auto n = path_->grid.steps;
  const double ito = pre_dx_[std::size_t(k)] + (post_dx_[std::size_t(n) - 1] - post_dx_[std::size_t(k)]);
  const double quad = pre_w2_[std::size_t(k)] + (post_w2_[std::size_t(n)] - post_w2_[std::size_t(k)]);
  return inv_eps2_ * (ito - 0.5 * quad);
}

double LogLikelihood::operator()(double theta) const {
  switch (kind_) {
    case Kind::kNoiseless:
      return -(*phi_)(theta);
    case Kind::kChangePoint:
      return cell_value(cell_of(theta, path_->grid));
    case Kind::kLinear: {
      const double d = theta - lin_vertex_;
      return lin_peak_ - lin_coef_ * d * d;
    }
    case Kind::kSine: {
      const double a = assumed_.amp;
      const double ito = a * (std::cos(theta) * stat_a_ - std::sin(theta) * stat_b_);
      const double quad =
          0.5 * a * a * (q0_ - std::cos(2.0 * theta) * q1_ - std::sin(2.0 * theta) * q2_);
      return inv_eps2_ * (ito - 0.5 * quad);
    }
    case Kind::kGeneric:
      return generic(theta);
  }
  return 0.0;
}

double LogLikelihood::generic(double theta) const {
  const auto& grid = path_->grid;
  const auto n = grid.steps;
  const double dt = grid.dt();
  double ito = 0.0, quad = 0.0;
  for (std::int64_t i = 0; i <= n; ++i) {
    const double t = grid.node(i);
    const double m = eval_signal(assumed_, theta, t);
    quad += trap_w(i, n, dt) * m * m;
    if (i < n) ito += m * path_->increment(i);
  }
  return inv_eps2_ * (ito - 0.5 * quad);
}

double log_pseudo_lr(const SignalSpec& assumed, double theta, const ObservationPath& path) {
  return LogLikelihood(assumed, path)(theta);
}

PmleResult pmle(const LogLikelihood& loglr, const ParamWindow& window) {
  const auto& path = loglr.path();
  const auto& grid = path.grid;
  PmleResult res;
  res.noiseless = loglr.noiseless();

  if (loglr.piecewise_constant()) {
    // exact sup over cells fully inside the window
    const double dt = grid.dt();
    std::int64_t k_lo = std::int64_t(std::ceil(window.lo / dt - 1e-12));
    std::int64_t k_hi = std::int64_t(std::floor(window.hi / dt + 1e-12)) - 1;
    k_lo = std::clamp<std::int64_t>(k_lo, 0, grid.steps - 1);
    k_hi = std::clamp<std::int64_t>(k_hi, 0, grid.steps - 1);
    if (k_hi <= k_lo) throw InvalidSpecError("window narrower than one grid cell");
    std::int64_t best = k_lo;
    double best_v = loglr.cell_value(k_lo);
    for (std::int64_t k = k_lo + 1; k <= k_hi; ++k) {
      const double v = loglr.cell_value(k);
      if (v > best_v) {
        best_v = v;
        best = k;
      }
    }
    res.theta = 0.5 * (grid.node(best) + grid.node(best + 1));
    res.loglr = best_v;
    res.boundary = (best == k_lo || best == k_hi);
    return res;
  }

  const double dt = grid.dt();
  const double a = window.lo + dt, b = window.hi - dt;
  std::size_t best = 0;
  double best_th = a, best_v = loglr(a);
  for (int i = 1; i < kScanPoints; ++i) {
    const double th = a + (b - a) * double(i) / double(kScanPoints - 1);
    const double v = loglr(th);
    if (v > best_v) {
      best_v = v;
      best_th = th;
      best = std::size_t(i);
    }
  }
  res.boundary = (best == 0 || best == std::size_t(kScanPoints - 1));
  const double spacing = (b - a) / double(kScanPoints - 1);
  const double lo = std::max(a, best_th - spacing), hi = std::min(b, best_th + spacing);
  // converge the bracket well inside tol_theta so the returned midpoint meets it
  const double tol = 0.25 * kTolThetaRel * window.width();
  res.theta = golden_minimize([&](double th) { return -loglr(th); }, lo, hi, tol);
  res.loglr = loglr(res.theta);
  return res;
}

PmleResult pmle(const SignalSpec& assumed, const ParamWindow& window,
                const ObservationPath& path) {
  const LogLikelihood loglr(assumed, path);
  return pmle(loglr, window);
}

double bayes(const LogLikelihood& loglr, const ParamWindow& window, const Prior& prior) {
  if (loglr.path().eps == 0.0) throw InvalidSpecError("bayes estimator requires eps > 0");
  const int n = kBayesNodes;
  const double h = window.width() / double(n - 1);

  std::vector<double> logv(n), p(n);
  double vmax = -std::numeric_limits<double>::infinity();
  double pmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = window.lo + h * double(i);
    logv[std::size_t(i)] = loglr(th);
    p[std::size_t(i)] = prior.density(th);
    if (!(p[std::size_t(i)] > 0.0))
      throw InvalidSpecError("prior density must be positive on the window");
    vmax = std::max(vmax, logv[std::size_t(i)]);
    pmax = std::max(pmax, p[std::size_t(i)]);
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = logv[std::size_t(i)] - vmax;
    if (e < kLogUnderflow) continue;
    const double th = window.lo + h * double(i);
    const double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * (p[std::size_t(i)] / pmax) * std::exp(e);
    num += w * th;
    den += w;
  }
  if (den <= 0.0) throw NumericUnderflowError("posterior mass lost below the underflow guard");
  return num / den;
}

double bayes(const SignalSpec& assumed, const ParamWindow& window, const Prior& prior,
             const ObservationPath& path) {
  const LogLikelihood loglr(assumed, path);
  return bayes(loglr, window, prior);
}

std::vector<double> m_cumulative(const SignalSpec& assumed, double theta, const TimeGrid& grid) {
  std::vector<double> m(std::size_t(grid.steps) + 1, 0.0);
  for (std::int64_t i = 0; i < grid.steps; ++i)
    m[std::size_t(i) + 1] =
        m[std::size_t(i)] + signal_integral(assumed, theta, grid.node(i), grid.node(i + 1));
  return m;
}

TrajectoryObjective::TrajectoryObjective(const SignalSpec& assumed, const ObservationPath& path)
    : path_(&path), assumed_(assumed) {
  if (!assumed_.is_change_point()) return;
  fast_ = true;
  const auto& grid = path.grid;
  const auto n = grid.steps;
  const double dt = grid.dt();
  big_h_.resize(std::size_t(n) + 1);
  big_g_.resize(std::size_t(n) + 1);
  cum_h2_.resize(std::size_t(n) + 1);
  cum_g2_.resize(std::size_t(n) + 1);
  cum_g1_.resize(std::size_t(n) + 1);
  big_h_[0] = big_g_[0] = 0.0;
  cum_h2_[0] = cum_g2_[0] = cum_g1_[0] = 0.0;
  auto before_int = [&](double a, double b) {
    return assumed_.h.integral(a, b) + assumed_.q.integral(a, b);
  };
  auto after_int = [&](double a, double b) {
    return assumed_.g.integral(a, b) + assumed_.r.integral(a, b);
  };
  double dh_prev = path.values[0] - big_h_[0];
  double dg_prev = path.values[0] - big_g_[0];
  for (std::int64_t i = 1; i <= n; ++i) {
    const double a = grid.node(i - 1), b = grid.node(i);
    big_h_[std::size_t(i)] = big_h_[std::size_t(i) - 1] + before_int(a, b);
    big_g_[std::size_t(i)] = big_g_[std::size_t(i) - 1] + after_int(a, b);
    const double dh = path.values[std::size_t(i)] - big_h_[std::size_t(i)];
    const double dg = path.values[std::size_t(i)] - big_g_[std::size_t(i)];
    cum_h2_[std::size_t(i)] = cum_h2_[std::size_t(i) - 1] + 0.5 * dt * (dh_prev * dh_prev + dh * dh);
    cum_g2_[std::size_t(i)] = cum_g2_[std::size_t(i) - 1] + 0.5 * dt * (dg_prev * dg_prev + dg * dg);
    cum_g1_[std::size_t(i)] = cum_g1_[std::size_t(i) - 1] + 0.5 * dt * (dg_prev + dg);
    dh_prev = dh;
    dg_prev = dg;
  }
}

double TrajectoryObjective::operator()(double theta) const {
  if (!fast_) return generic(theta);
  const auto& grid = path_->grid;
  const double T = grid.horizon;
  const double th = std::clamp(theta, 0.0, T);
  const double dt = grid.dt();
  const auto k = std::int64_t(th / dt) >= grid.steps ? grid.steps - 1 : std::int64_t(th / dt);
  const double t_k = grid.node(k);
  const double frac = (th - t_k);

  // interpolate path and cumulative branch integrals inside the split panel
  const double x_k = path_->values[std::size_t(k)];
  const double x_k1 = path_->values[std::size_t(k) + 1];
  const double x_th = frac == 0.0 ? x_k : x_k + (x_k1 - x_k) * (frac / dt);
  const double h_th = big_h_[std::size_t(k)] +
                      (assumed_.h.integral(t_k, th) + assumed_.q.integral(t_k, th));
  const double g_th = big_g_[std::size_t(k)] +
                      (assumed_.g.integral(t_k, th) + assumed_.r.integral(t_k, th));

  const double dh_k = x_k - big_h_[std::size_t(k)];
  const double dh_th = x_th - h_th;
  const double a1 = cum_h2_[std::size_t(k)] + 0.5 * frac * (dh_k * dh_k + dh_th * dh_th);

  const double dg_k = x_k - big_g_[std::size_t(k)];
  const double dg_th = x_th - g_th;
  const double b_th = cum_g2_[std::size_t(k)] + 0.5 * frac * (dg_k * dg_k + dg_th * dg_th);
  const double c1_th = cum_g1_[std::size_t(k)] + 0.5 * frac * (dg_k + dg_th);

  const double c = h_th - g_th;  // jump offset carried past theta
  const double tail2 = cum_g2_.back() - b_th;
  const double tail1 = cum_g1_.back() - c1_th;
  return a1 + tail2 - 2.0 * c * tail1 + c * c * (T - th);
}

double TrajectoryObjective::generic(double theta) const {
  const auto& grid = path_->grid;
  const auto m = m_cumulative(assumed_, theta, grid);
  const double dt = grid.dt();
  double acc = 0.0;
  for (std::int64_t i = 0; i <= grid.steps; ++i) {
    const double d = path_->values[std::size_t(i)] - m[std::size_t(i)];
    acc += trap_w(i, grid.steps, dt) * d * d;
  }
  return acc;
}

TfeResult tfe(const SignalSpec& assumed, const ParamWindow& window, const ObservationPath& path) {
  const TrajectoryObjective psi(assumed, path);
  const double dt = path.grid.dt();
  const double a = window.lo + dt, b = window.hi - dt;
  std::size_t best = 0;
  double best_th = a, best_v = psi(a);
  for (int i = 1; i < kScanPoints; ++i) {
    const double th = a + (b - a) * double(i) / double(kScanPoints - 1);
    const double v = psi(th);
    if (v < best_v) {
      best_v = v;
      best_th = th;
      best = std::size_t(i);
    }
  }
  TfeResult res;
  res.boundary = (best == 0 || best == std::size_t(kScanPoints - 1));
  const double spacing = (b - a) / double(kScanPoints - 1);
  const double lo = std::max(a, best_th - spacing), hi = std::min(b, best_th + spacing);
  res.theta = golden_minimize(psi, lo, hi, kTolThetaRel * window.width());
  return res;
}

}  // namespace misspec
