#include "misspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace misspec {

namespace {

// Trapezoid on one smooth segment [a, b]; endpoints use the inward one-sided
// limits so segments bounded by jumps integrate their own branch.
double segment_trapezoid(const std::function<double(double, Side)>& f, double a, double b,
                         std::int64_t panels) {
  if (b <= a) return 0.0;
  panels = std::max<std::int64_t>(panels, 1);
  const double w = (b - a) / double(panels);
  double acc = 0.5 * (f(a, Side::kRight) + f(b, Side::kLeft));
  for (std::int64_t i = 1; i < panels; ++i) acc += f(a + double(i) * w, Side::kRight);
  return acc * w;
}

std::vector<double> segment_bounds(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> cuts{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

double integrate_interval(const std::function<double(double, Side)>& f, double a, double b,
                          const TimeGrid& grid, std::span<const double> breakpoints) {
  if (b <= a) return 0.0;
  const auto cuts = segment_bounds(a, b, breakpoints);
  const double dt = grid.dt();
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double len = cuts[s + 1] - cuts[s];
    const auto panels = std::int64_t(std::ceil(len / dt - 1e-12));
    total += segment_trapezoid(f, cuts[s], cuts[s + 1], panels);
  }
  return total;
}

double integrate_grid(const std::function<double(double, Side)>& f, const TimeGrid& grid,
                      std::span<const double> breakpoints) {
  return integrate_interval(f, 0.0, grid.horizon, grid, breakpoints);
}

double trapezoid_nodes(const std::function<double(double)>& f, const TimeGrid& grid) {
  const double dt = grid.dt();
  double acc = 0.5 * (f(0.0) + f(grid.horizon));
  for (std::int64_t i = 1; i < grid.steps; ++i) acc += f(grid.node(i));
  return acc * dt;
}

}  // namespace misspec
