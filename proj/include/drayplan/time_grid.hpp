#pragma once

#include <stdexcept>

namespace drayplan {

/// Cyclic time grid for one representative day. Step t covers
/// [t*step_hours, (t+1)*step_hours); the last step wraps to the first.
struct TimeGrid {
  int step_count = 96;
  double step_hours = 0.25;

  double horizon_hours() const { return step_count * step_hours; }
};

/// Successor step on the cyclic horizon: t+1, wrapping to 0 at the end.
inline int next_time(const TimeGrid& grid, int t) {
  if (t < 0 || t >= grid.step_count) {
    throw std::out_of_range("next_time: step index out of range");
  }
  return (t + 1 < grid.step_count) ? t + 1 : 0;
}

}  // namespace drayplan
