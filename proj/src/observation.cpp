#include "misspec/observation.hpp"

#include <cmath>

#include "misspec/quadrature.hpp"

namespace misspec {

WienerPath sample_wiener(const TimeGrid& grid, const StreamId& stream) {
  if (grid.steps < 2) throw InvalidSpecError("wiener path needs n >= 2");
  WienerPath path{grid, {}, stream};
  path.increments.resize(std::size_t(grid.steps));
  const rng::Stream s(stream.seed, stream.replication, stream.role);
  const double root_dt = std::sqrt(grid.dt());
  for (std::size_t i = 0; i < path.increments.size(); ++i)
    path.increments[i] = root_dt * s.normal(i);
  return path;
}

ObservationPath synthesize(const SignalSpec& truth, double theta0, double eps,
                           const WienerPath& wiener) {
  if (eps < 0.0) throw InvalidSpecError("noise level must be >= 0");
  const TimeGrid& grid = wiener.grid;
  ObservationPath path{grid, {}, eps, PathProvenance{truth, theta0, wiener.stream}};
  path.values.resize(std::size_t(grid.steps) + 1);
  path.values[0] = 0.0;
  double x = 0.0;
  for (std::int64_t i = 0; i < grid.steps; ++i) {
    x += signal_integral(truth, theta0, grid.node(i), grid.node(i + 1));
    if (eps > 0.0) x += eps * wiener.increments[std::size_t(i)];
    path.values[std::size_t(i) + 1] = x;
  }
  return path;
}

double ito_integral(const std::function<double(double)>& f, const ObservationPath& path) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < path.grid.steps; ++i)
    acc += f(path.grid.node(i)) * path.increment(i);
  return acc;
}

double ito_integral(const std::function<double(double)>& f, const WienerPath& path) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < path.grid.steps; ++i)
    acc += f(path.grid.node(i)) * path.increments[std::size_t(i)];
  return acc;
}

double riemann_integral(const std::function<double(double, Side)>& f, const TimeGrid& grid,
                        std::span<const double> breakpoints) {
  return integrate_grid(f, grid, breakpoints);
}

}  // namespace misspec
