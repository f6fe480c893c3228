#include "misspec/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "misspec/errors.hpp"
#include "misspec/rng.hpp"
#include "misspec/stats.hpp"

namespace misspec {

namespace {

constexpr double kTailTarget = 1e-6;
constexpr double kEtaFactor = 5e-4;  // default lattice step as a fraction of U

double drift_at(const ArgmaxLawSpec& spec, double u) {
  switch (spec.kind) {
    case ArgmaxLawSpec::Kind::kQuadratic:
      return -0.5 * spec.gamma * u * u;
    case ArgmaxLawSpec::Kind::kPower:
      return -std::pow(std::abs(u), 1.0 + spec.kappa) / (1.0 + spec.kappa);
    case ArgmaxLawSpec::Kind::kLinearCP:
      return -0.5 * spec.delta * spec.delta * std::abs(u);
  }
  return 0.0;
}

double noise_coeff(const ArgmaxLawSpec& spec) {
  return spec.kind == ArgmaxLawSpec::Kind::kPower ? 1.0 : spec.delta;
}

void run_indexed(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
  threads = std::max(threads, 1);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = std::size_t(w); i < count; i += std::size_t(threads)) work(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

ArgmaxLawSpec ArgmaxLawSpec::quadratic(double delta, double gamma) {
  ArgmaxLawSpec s;
  s.kind = Kind::kQuadratic;
  s.delta = delta;
  s.gamma = gamma;
  // drift-dominance tail target exp(-gamma^2 U^2 / (8 delta^2)) <= 1e-6
  s.trunc_u = (delta / gamma) * std::sqrt(8.0 * std::log(1.0 / kTailTarget));
  s.lattice_eta = kEtaFactor * s.trunc_u;
  s.validate();
  return s;
}

ArgmaxLawSpec ArgmaxLawSpec::power(double kappa) {
  ArgmaxLawSpec s;
  s.kind = Kind::kPower;
  s.kappa = kappa;
  // U where the drift reaches 8 standard deviations of W(U)
  s.trunc_u = std::pow(8.0 * (1.0 + kappa), 1.0 / (kappa + 0.5));
  s.lattice_eta = kEtaFactor * s.trunc_u;
  s.validate();
  return s;
}

ArgmaxLawSpec ArgmaxLawSpec::linear_cp(double delta) {
  ArgmaxLawSpec s;
  s.kind = Kind::kLinearCP;
  s.delta = delta;
  // 2 exp(-delta^2 U / 8) <= 1e-6
  s.trunc_u = 8.0 * std::log(2.0 / kTailTarget) / (delta * delta);
  s.lattice_eta = kEtaFactor * s.trunc_u;
  s.validate();
  return s;
}

void ArgmaxLawSpec::validate() const {
  switch (kind) {
    case Kind::kQuadratic:
      if (!(delta > 0.0) || !(gamma > 0.0))
        throw InvalidSpecError("quadratic argmax law needs delta > 0 and gamma > 0");
      break;
    case Kind::kPower:
      if (!(kappa > 0.5))
        throw InvalidSpecError("power argmax law needs kappa > 1/2");
      break;
    case Kind::kLinearCP:
      if (!(delta > 0.0)) throw InvalidSpecError("linear change-point law needs delta > 0");
      break;
  }
  if (!(trunc_u > 0.0)) throw InvalidSpecError("truncation U must be positive");
  if (!(lattice_eta > 0.0) || lattice_eta > 1e-3 * trunc_u + 1e-15)
    throw InvalidSpecError("lattice step must satisfy eta <= 1e-3 U");
}

std::string ArgmaxLawSpec::describe() const {
  char buf[128];
  switch (kind) {
    case Kind::kQuadratic:
      std::snprintf(buf, sizeof buf, "quadratic(delta=%g,gamma=%g)", delta, gamma);
      break;
    case Kind::kPower:
      std::snprintf(buf, sizeof buf, "power(kappa=%g)", kappa);
      break;
    case Kind::kLinearCP:
      std::snprintf(buf, sizeof buf, "linear-cp(delta=%g)", delta);
      break;
  }
  return buf;
}

ArgmaxSample sample_argmax(const ArgmaxLawSpec& spec, std::uint64_t seed, std::size_t count,
                           int threads) {
  spec.validate();
  if (count < 1) throw InvalidSpecError("sample count must be >= 1");
  const auto lattice_n = std::size_t(std::ceil(spec.trunc_u / spec.lattice_eta));
  const double coeff = noise_coeff(spec);

  ArgmaxSample out;
  out.values.assign(count, 0.0);
  std::vector<std::uint8_t> hit(count, 0);

  run_indexed(count, threads, [&](std::size_t s) {
    const rng::Stream neg(seed, std::uint32_t(s), rng::role_word(rng::Role::kLatticeNeg));
    const rng::Stream pos(seed, std::uint32_t(s), rng::role_word(rng::Role::kLatticePos));
    const double root_eta = std::sqrt(spec.lattice_eta);

    // ascending u scan keeps ties at the smallest u
    double best_u = 0.0, best_v = 0.0;
    {
      // negative side: build W_-(j eta) forward, then scan from -U upward
      std::vector<double> w(lattice_n + 1, 0.0);
      for (std::size_t j = 1; j <= lattice_n; ++j)
        w[j] = w[j - 1] + root_eta * neg.normal(j - 1);
      bool first = true;
      for (std::size_t j = lattice_n; j >= 1; --j) {
        const double u = -double(j) * spec.lattice_eta;
        const double v = coeff * w[j] + drift_at(spec, u);
        if (first || v > best_v) {
          best_v = v;
          best_u = u;
          first = false;
        }
      }
      if (0.0 > best_v) {  // u = 0, value 0
        best_v = 0.0;
        best_u = 0.0;
      }
    }
    {
      double w = 0.0;
      for (std::size_t j = 1; j <= lattice_n; ++j) {
        w += root_eta * pos.normal(j - 1);
        const double u = double(j) * spec.lattice_eta;
        const double v = coeff * w + drift_at(spec, u);
        if (v > best_v) {
          best_v = v;
          best_u = u;
        }
      }
    }
    out.values[s] = best_u;
    hit[s] = std::abs(best_u) > 0.9 * spec.trunc_u ? 1 : 0;
  });

  for (auto h : hit) out.truncation_hits += h;
  if (out.hit_rate() >= 1e-3)
    throw TruncationTooSmallError("argmax sampler truncation window too small: hit rate " +
                                  std::to_string(out.hit_rate()));
  return out;
}

std::vector<double> sample_gaussian(double variance, std::uint64_t seed, std::size_t count) {
  if (!(variance > 0.0)) throw InvalidSpecError("gaussian reference needs variance > 0");
  std::vector<double> out(count);
  const double sd = std::sqrt(variance);
  const rng::Stream s(seed, 0, rng::role_word(rng::Role::kReference));
  for (std::size_t i = 0; i < count; ++i) out[i] = sd * s.normal(i);
  return out;
}

double quadratic_scaling_check(double delta, double gamma, std::uint64_t seed, std::size_t count,
                               int threads) {
  const auto law = ArgmaxLawSpec::quadratic(delta, gamma);
  const auto base = ArgmaxLawSpec::quadratic(1.0, 1.0);
  auto a = sample_argmax(law, seed, count, threads);
  auto b = sample_argmax(base, seed ^ 0x5bf0'3635'dcb3'9e91ULL, count, threads);
  const double scale = std::pow(delta / gamma, 2.0 / 3.0);
  for (double& v : b.values) v *= scale;
  return ks_two_sample(std::move(a.values), std::move(b.values));
}

GaussianLimit gaussian_limit(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                             const ParamWindow& window, const TimeGrid& grid) {
  const double theta_hat = kl_minimizer(assumed, truth, theta0, window, grid);
  const double curv = curvature_smooth(assumed, truth, theta0, theta_hat, grid);
  const double info = fisher_info(assumed, theta_hat, grid);
  GaussianLimit lim;
  lim.variance = info / (curv * curv);
  if (!(lim.variance > 0.0))
    throw ConditionR4ViolatedError("gaussian limit variance must be positive");
  return lim;
}

RegimeTag RegimeTag::parse(const std::string& tag, double kappa) {
  RegimeTag r;
  r.kappa = kappa;
  if (tag == "regular") r.kind = Kind::kRegular;
  else if (tag == "change-point") r.kind = Kind::kChangePoint;
  else if (tag == "disc-vs-smooth") r.kind = Kind::kDiscVsSmooth;
  else if (tag == "smooth-vs-disc") r.kind = Kind::kSmoothVsDisc;
  else if (tag == "disc-vs-disc") r.kind = Kind::kDiscVsDisc;
  else if (tag == "remark1") r.kind = Kind::kRemark1;
  else if (tag == "cusp-vs-smooth") r.kind = Kind::kCuspVsSmooth;
  else throw UnknownNameError("unknown regime tag: " + tag);
  return r;
}

std::string RegimeTag::str() const {
  switch (kind) {
    case Kind::kRegular: return "regular";
    case Kind::kChangePoint: return "change-point";
    case Kind::kDiscVsSmooth: return "disc-vs-smooth";
    case Kind::kSmoothVsDisc: return "smooth-vs-disc";
    case Kind::kDiscVsDisc: return "disc-vs-disc";
    case Kind::kRemark1: return "remark1";
    case Kind::kCuspVsSmooth: return "cusp-vs-smooth";
  }
  return "?";
}

double rate_exponent(const RegimeTag& regime) {
  switch (regime.kind) {
    case RegimeTag::Kind::kRegular:
    case RegimeTag::Kind::kSmoothVsDisc:
      return 1.0;
    case RegimeTag::Kind::kChangePoint:
    case RegimeTag::Kind::kDiscVsDisc:
      return 2.0;
    case RegimeTag::Kind::kDiscVsSmooth:
      return 2.0 / 3.0;
    case RegimeTag::Kind::kRemark1:
      if (!(regime.kappa > 0.5))
        throw InvalidSpecError("remark1 regime needs kappa > 1/2");
      return 2.0 / (2.0 * regime.kappa + 1.0);
    case RegimeTag::Kind::kCuspVsSmooth:
      if (!(regime.kappa > 0.0 && regime.kappa < 0.5))
        throw InvalidSpecError("cusp regime needs kappa in (0, 1/2)");
      return 2.0 / (3.0 - 2.0 * regime.kappa);
  }
  throw UnknownNameError("unknown regime");
}

}  // namespace misspec
