#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "misspec/rng.hpp"
#include "misspec/signal.hpp"
#include "misspec/time_grid.hpp"

namespace misspec {

// Identifies one noise stream: all draws are Philox counters keyed by
// (seed, replication, role), so a path is reconstructible from this triple
// and results cannot depend on thread scheduling.
struct StreamId {
  std::uint64_t seed = 0;
  std::uint32_t replication = 0;
  std::uint32_t role = rng::role_word(rng::Role::kPathNoise);
};

struct WienerPath {
  TimeGrid grid;
  std::vector<double> increments;  // dW_i over panel i, i = 0..n-1
  StreamId stream;

  double terminal() const {
    double w = 0.0;
    for (double d : increments) w += d;
    return w;
  }
};

WienerPath sample_wiener(const TimeGrid& grid, const StreamId& stream);

struct PathProvenance {
  SignalSpec truth;
  double theta0 = 0.0;
  StreamId stream;
};

struct ObservationPath {
  TimeGrid grid;
  std::vector<double> values;  // X at nodes, X_0 = 0
  double eps = 0.0;
  PathProvenance provenance;

  double terminal() const { return values.back(); }
  double increment(std::int64_t i) const { return values[i + 1] - values[i]; }
};

// dX = S(theta0, t) dt + eps dW on the grid; the drift over each panel is the
// exact integral of S (split at the jump), so eps = 0 reproduces the noiseless
// trajectory exactly for piecewise-linear signals.
ObservationPath synthesize(const SignalSpec& truth, double theta0, double eps,
                           const WienerPath& wiener);

// Left-endpoint Ito sum  sum_i f(t_i) (X_{i+1} - X_i).
double ito_integral(const std::function<double(double)>& f, const ObservationPath& path);
double ito_integral(const std::function<double(double)>& f, const WienerPath& path);

// Trapezoid dt-integral with registered breakpoints.
double riemann_integral(const std::function<double(double, Side)>& f, const TimeGrid& grid,
                        std::span<const double> breakpoints);

}  // namespace misspec
