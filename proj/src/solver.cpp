#include "fdde/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace fdde {

namespace {

bool near_integer(double x, double tolerance, double& rounded) {
  rounded = std::round(x);
  return rounded >= 1.0 && std::abs(x - rounded) <= tolerance * rounded;
}

}  // namespace

DelayPair::DelayPair(double t1, double t2) : tau1(t1), tau2(t2) {
  if (!(std::isfinite(t1) && std::isfinite(t2) && t1 >= 0.0 && t2 >= 0.0)) {
    std::ostringstream os;
    os << "delays must be finite and nonnegative, got (" << t1 << ", " << t2 << ")";
    throw std::invalid_argument(os.str());
  }
}

double evaluate_history(const HistorySpec& history, double t) {
  if (const double* c = std::get_if<double>(&history)) return *c;
  return std::get<std::function<double(double)>>(history)(t);
}

std::size_t Trajectory::size_from_zero() const {
  const auto offset = static_cast<std::size_t>(-t0_offset);
  return values.size() > offset ? values.size() - offset : 0;
}

double Trajectory::at(std::ptrdiff_t n) const {
  return values.at(static_cast<std::size_t>(n - t0_offset));
}

CommensurateGrid build_grid(const DelayPair& delays, double horizon,
                            double h_request, const GridOptions& options) {
  if (!(delays.tau1 > 0.0 && delays.tau2 > 0.0)) {
    throw std::invalid_argument(
        "build_grid: both delays must be positive; zero delays make the scheme implicit");
  }
  if (!(horizon > 0.0 && std::isfinite(horizon))) {
    throw std::invalid_argument("build_grid: horizon T must be positive");
  }
  if (!(h_request > 0.0 && std::isfinite(h_request))) {
    throw std::invalid_argument("build_grid: requested step must be positive");
  }

  // Every admissible h is tau_min / c for an integer c, so scanning c upward
  // from tau_min / h_request visits admissible steps from largest to smallest.
  const double tau_min = std::min(delays.tau1, delays.tau2);
  const double h_floor = h_request / static_cast<double>(options.max_refinement);
  const double first = std::ceil(tau_min / h_request * (1.0 - 1e-12));
  for (double c = std::max(first, 1.0); tau_min / c >= h_floor * (1.0 - 1e-12); c += 1.0) {
    const double h = tau_min / c;
    double k1 = 0.0;
    double k2 = 0.0;
    double steps = 0.0;
    if (near_integer(delays.tau1 / h, options.tolerance, k1) &&
        near_integer(delays.tau2 / h, options.tolerance, k2) &&
        near_integer(horizon / h, options.tolerance, steps)) {
      CommensurateGrid grid;
      grid.h = h;
      grid.k1 = static_cast<std::size_t>(k1);
      grid.k2 = static_cast<std::size_t>(k2);
      grid.steps = static_cast<std::size_t>(steps);
      grid.k = std::max(grid.k1, grid.k2);
      return grid;
    }
  }
  std::ostringstream os;
  os << "no step in [" << h_floor << ", " << h_request << "] divides tau1=" << delays.tau1
     << ", tau2=" << delays.tau2 << " and T=" << horizon;
  throw IncommensurableDelays(os.str());
}

Trajectory simulate(const SystemRhs& rhs, FractionalOrder alpha,
                    const CommensurateGrid& grid, const HistorySpec& history) {
  if (grid.k1 < 1 || grid.k2 < 1) {
    throw std::invalid_argument("simulate: delays must span at least one step");
  }
  if (!(grid.h > 0.0)) throw std::invalid_argument("simulate: step must be positive");

  const std::size_t k = std::max(grid.k1, grid.k2);
  const std::size_t steps = grid.steps;

  Trajectory traj;
  traj.t0_offset = -static_cast<std::ptrdiff_t>(k);
  traj.h = grid.h;
  traj.values.reserve(k + steps + 1);
  for (std::ptrdiff_t j = -static_cast<std::ptrdiff_t>(k); j <= 0; ++j) {
    const double value = evaluate_history(history, grid.h * static_cast<double>(j));
    if (!std::isfinite(value)) {
      throw std::invalid_argument("simulate: history must be finite on the grid");
    }
    traj.values.push_back(value);
  }
  const double phi0 = traj.values.back();

  // x_m lives at values[m + k].
  auto x = [&](std::ptrdiff_t m) { return traj.values[static_cast<std::size_t>(m + static_cast<std::ptrdiff_t>(k))]; };
  const auto d1 = static_cast<std::ptrdiff_t>(grid.k1);
  const auto d2 = static_cast<std::ptrdiff_t>(grid.k2);

  // interior[m] = a_{j,n+1} with m = n - j + 1
  std::vector<double> interior(steps + 1, 0.0);
  for (std::size_t m = 1; m <= steps; ++m) interior[m] = trapezoid_interior_weight(alpha, m);

  const double scale = std::pow(grid.h, alpha.value()) / gamma_function(alpha.value() + 2.0);

  std::vector<double> rhs_values;
  rhs_values.reserve(steps + 1);
  rhs_values.push_back(rhs(x(-d1), x(-d2)));

  for (std::size_t n = 0; n < steps; ++n) {
    const auto next = static_cast<std::ptrdiff_t>(n) + 1;
    assert(next - d1 <= static_cast<std::ptrdiff_t>(n) && next - d2 <= static_cast<std::ptrdiff_t>(n));
    rhs_values.push_back(rhs(x(next - d1), x(next - d2)));

    double sum = trapezoid_first_weight(alpha, n) * rhs_values[0];
    const double* w = interior.data();
    const double* g = rhs_values.data();
    for (std::size_t j = 1; j <= n; ++j) sum += w[n - j + 1] * g[j];
    sum += rhs_values[n + 1];

    const double value = phi0 + scale * sum;
    if (!std::isfinite(value)) {
      traj.truncated_at = n + 1;
      break;
    }
    traj.values.push_back(value);
  }
  return traj;
}

std::vector<PhaseRow> phase_columns(const Trajectory& traj, const CommensurateGrid& grid) {
  std::vector<PhaseRow> rows;
  const std::size_t count = traj.size_from_zero();
  rows.reserve(count);
  const auto k1 = static_cast<std::ptrdiff_t>(grid.k1);
  const auto k2 = static_cast<std::ptrdiff_t>(grid.k2);
  for (std::size_t i = 0; i < count; ++i) {
    const auto n = static_cast<std::ptrdiff_t>(i);
    rows.push_back({traj.time(n), traj.at(n), traj.at(n - k1), traj.at(n - k2)});
  }
  return rows;
}

}  // namespace fdde
