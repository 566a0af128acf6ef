#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fdde/numerics.hpp"

namespace fdde {

struct Partials {
  double d1 = 0.0;  // dg/dx1, x1 = x(t - tau1)
  double d2 = 0.0;  // dg/dx2, x2 = x(t - tau2)
};

/// Right-hand side g(x(t - tau1), x(t - tau2)) of D^alpha x = g(...).
struct SystemRhs {
  std::function<double(double, double)> g;
  std::optional<std::function<Partials(double, double)>> partials;

  double operator()(double x1, double x2) const { return g(x1, x2); }
};

struct DelayPair {
  double tau1 = 0.0;
  double tau2 = 0.0;

  DelayPair() = default;
  DelayPair(double t1, double t2);
};

/// Uniform grid on which both delays and the horizon are whole numbers of
/// steps: h * k1 = tau1, h * k2 = tau2, h * N = T.
struct CommensurateGrid {
  double h = 0.0;
  std::size_t steps = 0;  // N
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::size_t k = 0;  // max(k1, k2)

  double horizon() const { return h * static_cast<double>(steps); }
};

class IncommensurableDelays : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial function phi on [-k h, 0]; either a constant or a callable.
using HistorySpec = std::variant<double, std::function<double(double)>>;

double evaluate_history(const HistorySpec& history, double t);

/// Grid values x_{-k}, ..., x_0, ..., x_N. values[i] holds x_{i - k}.
struct Trajectory {
  std::ptrdiff_t t0_offset = 0;  // -k
  double h = 0.0;
  std::vector<double> values;
  /// Set when a step produced a non-finite value; holds that step index n.
  /// values then ends at x_{n-1}.
  std::optional<std::size_t> truncated_at;

  bool truncated() const { return truncated_at.has_value(); }
  /// Number of computed steps with index >= 0 (including x_0).
  std::size_t size_from_zero() const;
  /// x_n for n >= t0_offset.
  double at(std::ptrdiff_t n) const;
  double time(std::ptrdiff_t n) const { return h * static_cast<double>(n); }
};

struct GridOptions {
  double tolerance = 1e-9;        // relative distance of tau/h, T/h from integers
  std::size_t max_refinement = 1024;
};

/// Largest h <= h_request for which tau1/h, tau2/h and T/h are integers to
/// within options.tolerance (relative). Throws IncommensurableDelays when no
/// such h >= h_request / max_refinement exists.
CommensurateGrid build_grid(const DelayPair& delays, double horizon,
                            double h_request, const GridOptions& options = {});

/// Advances the product-trapezoid scheme
///   x_{n+1} = phi(0) + h^a / Gamma(a + 2) * sum_{j=0}^{n+1} a_{j,n+1} g(x_{j-k1}, x_{j-k2})
/// over the whole grid. Each g value is evaluated once and reused, so a step
/// costs O(n).
Trajectory simulate(const SystemRhs& rhs, FractionalOrder alpha,
                    const CommensurateGrid& grid, const HistorySpec& history);

struct PhaseRow {
  double t;
  double x;
  double x_tau1;
  double x_tau2;
};

/// Delay-embedding rows (t_n, x_n, x_{n-k1}, x_{n-k2}) for every computed n >= 0.
std::vector<PhaseRow> phase_columns(const Trajectory& traj,
                                    const CommensurateGrid& grid);

}  // namespace fdde
