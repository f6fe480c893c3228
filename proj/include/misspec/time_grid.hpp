#pragma once

#include <cstdint>

#include "misspec/errors.hpp"

namespace misspec {

// Uniform grid t_i = i*T/n on [0, T].
struct TimeGrid {
  double horizon = 1.0;
  std::int64_t steps = 2;

  static TimeGrid make(double horizon, std::int64_t steps) {
    if (!(horizon > 0.0)) throw InvalidSpecError("time grid horizon must be > 0");
    if (steps < 2) throw InvalidSpecError("time grid needs at least 2 steps");
    return TimeGrid{horizon, steps};
  }

  double dt() const { return horizon / double(steps); }
  double node(std::int64_t i) const { return double(i) * horizon / double(steps); }
};

// Open parameter window Theta = (lo, hi); estimates are kept strictly inside.
struct ParamWindow {
  double lo = 0.0;
  double hi = 1.0;

  static ParamWindow make(double lo, double hi, double horizon) {
    if (!(0.0 < lo && lo < hi && hi < horizon))
      throw InvalidSpecError("parameter window must satisfy 0 < lo < hi < T");
    return ParamWindow{lo, hi};
  }

  double width() const { return hi - lo; }
  bool contains(double theta) const { return theta > lo && theta < hi; }
};

}  // namespace misspec
