#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fdde/numerics.hpp"
#include "fdde/solver.hpp"

namespace fdde {

struct Equilibrium {
  double x_star = 0.0;
};

/// Coefficients of the linearization D^alpha xi = a xi(t - tau1) + b xi(t - tau2).
struct LinearCoefficients {
  double a = 0.0;
  double b = 0.0;
};

/// Thrown when a or b vanishes; that is the single-delay problem, which the
/// two-delay curve formulas cannot represent.
class DegenerateCoefficients : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Which inverse-cosine branch produced a curve point:
///   alpha pi / 2 + v tau_i = sign_i * arccos(A_i) + 2 pi m_i.
struct Branch {
  int sign1 = 1;
  int m1 = 0;
  int sign2 = 1;
  int m2 = 0;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct CriticalCurvePoint {
  double v = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  Branch branch;
  double residual = 0.0;
};

enum class StabilityVerdict {
  StableAtZeroDelays,
  UnstableAtZeroDelays,
  Stable,
  Unstable,
  OnBoundary,
};

std::string_view to_string(StabilityVerdict verdict);

struct VWindow {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kCurveResidualTolerance = 1e-9;
inline constexpr double kArccosClampSlack = 1e-12;

struct CurveOptions {
  std::optional<VWindow> window;  // defaults to default_v_window()
  std::size_t samples = 4000;
  int max_branch = 8;
};

// ---- equilibria and linearization ----------------------------------------

/// Roots of x -> g(x, x) found by scanning `resolution` points over [lo, hi]
/// and bisecting every sign change. Tangential roots are not detected.
std::vector<Equilibrium> find_equilibria(const SystemRhs& rhs, double lo, double hi,
                                         std::size_t resolution = 2001);

/// Analytic partials when the system provides them, Richardson-refined
/// central differences otherwise.
LinearCoefficients linearize(const SystemRhs& rhs, Equilibrium eq);

/// Central differences with one Richardson step, regardless of whether
/// analytic partials exist.
LinearCoefficients linearize_numerically(const SystemRhs& rhs, double x_star);

// ---- characteristic equation ----------------------------------------------

StabilityVerdict stable_at_zero_delay(LinearCoefficients coef);

/// lambda^alpha - a exp(-lambda tau1) - b exp(-lambda tau2), principal branch.
std::complex<double> characteristic_residual(FractionalOrder alpha, LinearCoefficients coef,
                                             const DelayPair& delays,
                                             std::complex<double> lambda);

/// Arguments of the two inverse cosines at frequency v:
///   A1 = (v^{2a} + a^2 - b^2) / (2 a v^alpha),  A2 = (v^{2a} - a^2 + b^2) / (2 b v^alpha).
std::pair<double, double> arccos_arguments(FractionalOrder alpha, LinearCoefficients coef,
                                           double v);

/// Max absolute residual of the real and imaginary parts of
/// (iv)^alpha = a exp(-iv tau1) + b exp(-iv tau2).
double crossing_residual(FractionalOrder alpha, LinearCoefficients coef, double v,
                         double tau1, double tau2);

/// v-interval on which both arccos arguments can lie in [-1, 1]:
/// v^alpha in [ ||a| - |b||, |a| + |b| ].
VWindow admissible_v_interval(FractionalOrder alpha, LinearCoefficients coef);

/// (1e-6, 4 (|a| + |b|)^{1/alpha}].
VWindow default_v_window(FractionalOrder alpha, LinearCoefficients coef);

// ---- critical curves -------------------------------------------------------

/// Every branch candidate at a single v with tau1, tau2 >= 0 and residual
/// within kCurveResidualTolerance.
std::vector<CriticalCurvePoint> curve_points_at(FractionalOrder alpha, LinearCoefficients coef,
                                                double v, int max_branch);

/// Samples `samples` values of v uniformly over the part of `window` where a
/// crossing is possible, and collects all validated branch points. Sorted by
/// (m1, sign1, v).
std::vector<CriticalCurvePoint> critical_curve(FractionalOrder alpha, LinearCoefficients coef,
                                               VWindow window, std::size_t samples,
                                               int max_branch);

/// Smallest tau2 on the critical curves above tau1 = tau1_query, or nullopt
/// when no validated branch reaches tau1_query in the searched window.
std::optional<double> critical_tau2_for_tau1(FractionalOrder alpha, LinearCoefficients coef,
                                             double tau1_query, const CurveOptions& options = {});

struct CurveExtremum {
  double tau2 = 0.0;
  double tau1 = 0.0;
  double v = 0.0;
  Branch branch;
};

/// Infimum of tau2 over all validated curve points (sampled, then refined by
/// golden-section search along the minimizing branch).
std::optional<CurveExtremum> curve_tau2_infimum(FractionalOrder alpha, LinearCoefficients coef,
                                                const CurveOptions& options = {});

// ---- classification --------------------------------------------------------

struct Classification {
  StabilityVerdict verdict = StabilityVerdict::OnBoundary;
  std::optional<double> critical_tau2;
};

/// Point-in-region test in the (tau1, tau2) plane: the region under the
/// critical curves is stable when the delay-free equation is.
Classification classify(FractionalOrder alpha, LinearCoefficients coef, const DelayPair& delays,
                        double tolerance = 1e-6, const CurveOptions& options = {});

}  // namespace fdde
