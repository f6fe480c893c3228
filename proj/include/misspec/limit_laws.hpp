#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "misspec/profile.hpp"
#include "misspec/signal.hpp"
#include "misspec/time_grid.hpp"

namespace misspec {

// Drifted two-sided Wiener argmax laws:
//   Quadratic(delta, gamma):  argsup  delta W(u) - gamma u^2 / 2
//   Power(kappa):             argsup  W(u) - |u|^{1+kappa} / (1+kappa),  kappa > 1/2
//   LinearCP(delta):          argsup  delta W(u) - delta^2 |u| / 2
struct ArgmaxLawSpec {
  enum class Kind { kQuadratic, kPower, kLinearCP };
  Kind kind = Kind::kQuadratic;
  double delta = 1.0;
  double gamma = 1.0;
  double kappa = 1.0;
  double trunc_u = 0.0;      // lattice support [-U, U]
  double lattice_eta = 0.0;  // lattice step, <= 1e-3 * U

  static ArgmaxLawSpec quadratic(double delta, double gamma);
  static ArgmaxLawSpec power(double kappa);
  static ArgmaxLawSpec linear_cp(double delta);
  void validate() const;
  std::string describe() const;
};

struct ArgmaxSample {
  std::vector<double> values;
  std::size_t truncation_hits = 0;  // |u_hat| > 0.9 U

  double hit_rate() const {
    return values.empty() ? 0.0 : double(truncation_hits) / double(values.size());
  }
};

// Lattice argmax of the drifted two-sided Wiener path; the two one-sided
// lattices use disjoint RNG streams.  Throws if the truncation-hit rate
// reaches 0.1%.
ArgmaxSample sample_argmax(const ArgmaxLawSpec& spec, std::uint64_t seed, std::size_t count,
                           int threads = 1);

// N(0, variance) reference sample on its own stream.
std::vector<double> sample_gaussian(double variance, std::uint64_t seed, std::size_t count);

// Two-sample KS between Quadratic(delta, gamma) draws and (delta/gamma)^{2/3}-
// scaled Quadratic(1, 1) draws; small iff the self-similarity relation holds.
double quadratic_scaling_check(double delta, double gamma, std::uint64_t seed, std::size_t count,
                               int threads = 1);

struct GaussianLimit {
  double variance = 0.0;  // D^2 = I(theta_hat) / curvature^2
};

GaussianLimit gaussian_limit(const SignalSpec& assumed, const SignalSpec& truth, double theta0,
                             const ParamWindow& window, const TimeGrid& grid);

// Theoretical convergence-rate exponents per misspecification regime.
struct RegimeTag {
  enum class Kind {
    kRegular,        // correctly specified smooth model
    kChangePoint,    // correctly specified change-point model
    kDiscVsSmooth,   // change-point assumed, smooth truth
    kSmoothVsDisc,   // smooth assumed, change-point truth
    kDiscVsDisc,     // perturbed change-point truth, conditions (5-1)/(5-2)
    kRemark1,        // sgn assumed, sgn|.|^kappa truth, kappa > 1/2
    kCuspVsSmooth,   // cusp assumed, smooth truth (rate only; law out of scope)
  };
  Kind kind = Kind::kRegular;
  double kappa = 0.0;

  static RegimeTag parse(const std::string& tag, double kappa = 0.0);
  std::string str() const;
};

double rate_exponent(const RegimeTag& regime);

}  // namespace misspec
