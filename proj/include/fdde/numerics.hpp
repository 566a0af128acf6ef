#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdde {

/// Order of the Caputo derivative, restricted to (0, 1].
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);

  double value() const noexcept { return alpha_; }
  operator double() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// Thrown when an adaptive series exceeds its term cap.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product-trapezoid weights a_{j,n+1}, j = 0..n+1, for the step producing
/// x_{n+1}.
struct WeightRow {
  std::size_t n = 0;
  std::vector<double> weights;
};

/// Gamma function on (0, 35). Throws std::domain_error for x <= 0.
double gamma_function(double x);

WeightRow trapezoid_weights(FractionalOrder alpha, std::size_t n);

/// First weight a_{0,n+1} = n^{a+1} - (n - a)(n+1)^a.
double trapezoid_first_weight(FractionalOrder alpha, std::size_t n);

/// Interior weight as a function of m = n - j + 1 >= 1:
/// (m+1)^{a+1} + (m-1)^{a+1} - 2 m^{a+1}.
double trapezoid_interior_weight(FractionalOrder alpha, std::size_t m);

struct MittagLefflerOptions {
  double term_tolerance = 1e-14;
  std::size_t max_terms = 10000;
};

/// One-parameter Mittag-Leffler function E_alpha(z) for real |z| <= 50, by
/// direct series summation. Throws NonConvergence when the series does not
/// settle within options.max_terms.
double mittag_leffler(FractionalOrder alpha, double z,
                      const MittagLefflerOptions& options = {});

/// Exact solution of D^alpha x = a x(t - tau) with history x = 1 on t <= 0:
///   sum_k a^k max(t - (k-1) tau, 0)^{k alpha} / Gamma(k alpha + 1).
/// The k = 0 term is 1, which reproduces the constant history.
double delayed_series_oracle(FractionalOrder alpha, double a, double tau,
                             double t);

}  // namespace fdde
