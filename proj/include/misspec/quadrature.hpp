#pragma once

#include <functional>
#include <span>

#include "misspec/signal.hpp"
#include "misspec/time_grid.hpp"

namespace misspec {

// Composite trapezoid over [0, T] at roughly the grid's resolution, with
// panels split at the given breakpoints so jumps never straddle a panel.
// Exact for integrands that are piecewise linear between breakpoints.
double integrate_grid(const std::function<double(double, Side)>& f, const TimeGrid& grid,
                      std::span<const double> breakpoints);

// Same rule on a sub-interval [a, b] of [0, T].
double integrate_interval(const std::function<double(double, Side)>& f, double a, double b,
                          const TimeGrid& grid, std::span<const double> breakpoints);

// Trapezoid of the node-sampled values f(t_0), ..., f(t_n); no splitting.
double trapezoid_nodes(const std::function<double(double)>& f, const TimeGrid& grid);

}  // namespace misspec
