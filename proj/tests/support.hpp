#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "fdde/solver.hpp"

namespace fdde::testing {

/// Classical trapezoid recurrence x_{n+1} = x_n + h/2 (g_n + g_{n+1}) for the
/// integer-order delay equation; coded without the fractional weight table.
inline std::vector<double> classical_trapezoid(const SystemRhs& rhs, double h, std::size_t k1,
                                               std::size_t k2, std::size_t steps, double phi) {
  const std::size_t k = std::max(k1, k2);
  std::vector<double> x(k + steps + 1, phi);
  auto g_at = [&](std::size_t idx) { return rhs(x[idx - k1], x[idx - k2]); };
  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t i = n + k;
    x[i + 1] = x[i] + 0.5 * h * (g_at(i) + g_at(i + 1));
  }
  return x;
}

/// Smallest (max - min) over all windows [t, t + window] of the trajectory
/// with t >= t_start and t + window <= last grid time. Sliding-window
/// extrema via monotone deques.
inline double min_window_amplitude(const Trajectory& traj, double t_start, double window) {
  const std::size_t count = traj.size_from_zero();
  const auto first = static_cast<std::size_t>(std::ceil(t_start / traj.h - 1e-9));
  const auto width = static_cast<std::size_t>(std::llround(window / traj.h));
  double best = std::numeric_limits<double>::infinity();
  if (first + width >= count) return best;
  std::deque<std::size_t> hi;
  std::deque<std::size_t> lo;
  auto value = [&](std::size_t n) { return traj.at(static_cast<std::ptrdiff_t>(n)); };
  for (std::size_t n = first; n < count; ++n) {
    while (!hi.empty() && value(hi.back()) <= value(n)) hi.pop_back();
    while (!lo.empty() && value(lo.back()) >= value(n)) lo.pop_back();
    hi.push_back(n);
    lo.push_back(n);
    if (n < first + width) continue;
    const std::size_t start = n - width;
    while (hi.front() < start) hi.pop_front();
    while (lo.front() < start) lo.pop_front();
    best = std::min(best, value(hi.front()) - value(lo.front()));
  }
  return best;
}

inline double max_abs_from(const Trajectory& traj, double t_start) {
  double worst = 0.0;
  for (std::size_t n = 0; n < traj.size_from_zero(); ++n) {
    const auto i = static_cast<std::ptrdiff_t>(n);
    if (traj.time(i) >= t_start - 1e-12) worst = std::max(worst, std::abs(traj.at(i)));
  }
  return worst;
}

}  // namespace fdde::testing
