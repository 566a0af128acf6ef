#include "fdde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

namespace fdde {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nondegenerate(LinearCoefficients coef) {
  if (coef.a == 0.0 || coef.b == 0.0) {
    std::ostringstream os;
    os << "degenerate coefficients (a=" << coef.a << ", b=" << coef.b
       << "): a vanishing coefficient reduces the problem to a single delay";
    throw DegenerateCoefficients(os.str());
  }
  if (!std::isfinite(coef.a) || !std::isfinite(coef.b)) {
    throw std::invalid_argument("linear coefficients must be finite");
  }
}

// arccos of A with endpoint roundoff absorbed; NaN when A is genuinely out of range.
double clamped_arccos(double arg) {
  if (std::abs(arg) <= 1.0) return std::acos(arg);
  if (std::abs(arg) <= 1.0 + kArccosClampSlack) return arg > 0.0 ? 0.0 : kPi;
  return std::numeric_limits<double>::quiet_NaN();
}

// tau = (sign * arccos(A) + 2 pi m - alpha pi / 2) / v
double branch_tau(int sign, int m, double arccos_value, double alpha, double v) {
  return (sign * arccos_value + 2.0 * kPi * m - alpha * kPi / 2.0) / v;
}

// Delays within roundoff below zero are taken as zero.
double snap_tau(double tau) { return (tau < 0.0 && tau >= -1e-12) ? 0.0 : tau; }

// At arccos = 0 the two signs coincide, and at arccos = pi the branch
// (-, m) repeats (+, m - 1). Only the + label is kept.
bool duplicate_label(int sign, double arccos_value) {
  return sign < 0 && (arccos_value == 0.0 || arccos_value == kPi);
}

std::pair<double, double> branch_arccos(FractionalOrder alpha, LinearCoefficients coef, double v) {
  const auto [a1, a2] = arccos_arguments(alpha, coef, v);
  return {clamped_arccos(a1), clamped_arccos(a2)};
}

std::vector<double> sample_grid(VWindow window, std::size_t samples) {
  std::vector<double> vs;
  if (samples == 0 || window.lo > window.hi) return vs;
  if (samples == 1 || window.lo == window.hi) return {window.lo};
  vs.reserve(samples);
  const double width = window.hi - window.lo;
  for (std::size_t i = 0; i < samples; ++i) {
    vs.push_back(window.lo + width * static_cast<double>(i) / static_cast<double>(samples - 1));
  }
  vs.back() = window.hi;
  return vs;
}

VWindow search_interval(FractionalOrder alpha, LinearCoefficients coef, const CurveOptions& options) {
  const VWindow window = options.window.value_or(default_v_window(alpha, coef));
  const VWindow admissible = admissible_v_interval(alpha, coef);
  return {std::max(window.lo, admissible.lo), std::min(window.hi, admissible.hi)};
}

// tau2 on a fully specified branch, or +inf when the branch does not give a
// validated point at v.
double branch_tau2_or_inf(FractionalOrder alpha, LinearCoefficients coef, const Branch& br, double v) {
  const auto [c1, c2] = branch_arccos(alpha, coef, v);
  if (std::isnan(c1) || std::isnan(c2)) return kInf;
  const double t1 = snap_tau(branch_tau(br.sign1, br.m1, c1, alpha, v));
  const double t2 = snap_tau(branch_tau(br.sign2, br.m2, c2, alpha, v));
  if (t1 < 0.0 || t2 < 0.0) return kInf;
  if (crossing_residual(alpha, coef, v, t1, t2) > kCurveResidualTolerance) return kInf;
  return t2;
}

}  // namespace

std::string_view to_string(StabilityVerdict verdict) {
  switch (verdict) {
    case StabilityVerdict::StableAtZeroDelays: return "StableAtZeroDelays";
    case StabilityVerdict::UnstableAtZeroDelays: return "UnstableAtZeroDelays";
    case StabilityVerdict::Stable: return "Stable";
    case StabilityVerdict::Unstable: return "Unstable";
    case StabilityVerdict::OnBoundary: return "OnBoundary";
  }
  return "OnBoundary";
}

std::vector<Equilibrium> find_equilibria(const SystemRhs& rhs, double lo, double hi,
                                         std::size_t resolution) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw std::invalid_argument("find_equilibria: bracket must be finite with lo < hi");
  }
  if (resolution < 2) throw std::invalid_argument("find_equilibria: resolution must be >= 2");

  auto diag = [&](double x) { return rhs(x, x); };
  std::vector<double> xs(resolution);
  std::vector<double> hs(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
    hs[i] = diag(xs[i]);
  }

  std::vector<double> roots;
  for (std::size_t i = 0; i < resolution; ++i) {
    if (hs[i] == 0.0) roots.push_back(xs[i]);
    if (i + 1 == resolution) break;
    if (!std::isfinite(hs[i]) || !std::isfinite(hs[i + 1])) continue;
    if (!((hs[i] < 0.0 && hs[i + 1] > 0.0) || (hs[i] > 0.0 && hs[i + 1] < 0.0))) continue;

    double left = xs[i];
    double right = xs[i + 1];
    double h_left = hs[i];
    double mid = 0.5 * (left + right);
    for (int iter = 0; iter < 200; ++iter) {
      mid = 0.5 * (left + right);
      const double h_mid = diag(mid);
      if (std::abs(h_mid) <= 1e-12 || mid == left || mid == right) break;
      if ((h_mid < 0.0) == (h_left < 0.0)) {
        left = mid;
        h_left = h_mid;
      } else {
        right = mid;
      }
    }
    roots.push_back(mid);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<Equilibrium> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back().x_star) <= 1e-9 * std::max(1.0, std::abs(r))) continue;
    out.push_back({r});
  }
  return out;
}

LinearCoefficients linearize_numerically(const SystemRhs& rhs, double x_star) {
  const double step = std::max(1e-6, 1e-6 * std::abs(x_star));
  auto central = [&](double s, bool first) {
    if (first) return (rhs(x_star + s, x_star) - rhs(x_star - s, x_star)) / (2.0 * s);
    return (rhs(x_star, x_star + s) - rhs(x_star, x_star - s)) / (2.0 * s);
  };
  // D(s) = f' + c s^2 + O(s^4), so (4 D(s/2) - D(s)) / 3 cancels the s^2 term.
  auto richardson = [&](bool first) {
    return (4.0 * central(step / 2.0, first) - central(step, first)) / 3.0;
  };
  return {richardson(true), richardson(false)};
}

LinearCoefficients linearize(const SystemRhs& rhs, Equilibrium eq) {
  LinearCoefficients coef;
  if (rhs.partials) {
    const Partials p = (*rhs.partials)(eq.x_star, eq.x_star);
    coef = {p.d1, p.d2};
  } else {
    coef = linearize_numerically(rhs, eq.x_star);
  }
  if (!std::isfinite(coef.a) || !std::isfinite(coef.b)) {
    std::ostringstream os;
    os << "linearize: non-finite coefficient at x*=" << eq.x_star;
    throw std::runtime_error(os.str());
  }
  return coef;
}

StabilityVerdict stable_at_zero_delay(LinearCoefficients coef) {
  const double sum = coef.a + coef.b;
  if (std::abs(sum) <= 1e-12) return StabilityVerdict::OnBoundary;
  return sum < 0.0 ? StabilityVerdict::StableAtZeroDelays : StabilityVerdict::UnstableAtZeroDelays;
}

std::complex<double> characteristic_residual(FractionalOrder alpha, LinearCoefficients coef,
                                             const DelayPair& delays,
                                             std::complex<double> lambda) {
  std::complex<double> power;
  if (alpha.value() == 1.0) {
    power = lambda;
  } else {
    if (lambda == 0.0) {
      throw std::invalid_argument("characteristic_residual: lambda^alpha needs lambda != 0");
    }
    power = std::pow(lambda, alpha.value());
  }
  return power - coef.a * std::exp(-lambda * delays.tau1) - coef.b * std::exp(-lambda * delays.tau2);
}

std::pair<double, double> arccos_arguments(FractionalOrder alpha, LinearCoefficients coef,
                                           double v) {
  const double va = std::pow(v, alpha.value());
  const double v2a = va * va;
  // Written so that swapping a and b swaps the two results bit for bit.
  const double d = (coef.a - coef.b) * (coef.a + coef.b);
  return {(v2a + d) / (2.0 * coef.a * va), (v2a - d) / (2.0 * coef.b * va)};
}

double crossing_residual(FractionalOrder alpha, LinearCoefficients coef, double v, double tau1,
                         double tau2) {
  const double va = std::pow(v, alpha.value());
  const double phase = alpha.value() * kPi / 2.0;
  const double re = va * std::cos(phase) - (coef.a * std::cos(v * tau1) + coef.b * std::cos(v * tau2));
  const double im = va * std::sin(phase) + (coef.a * std::sin(v * tau1) + coef.b * std::sin(v * tau2));
  return std::max(std::abs(re), std::abs(im));
}

VWindow admissible_v_interval(FractionalOrder alpha, LinearCoefficients coef) {
  const double inv = 1.0 / alpha.value();
  const double lo = std::abs(std::abs(coef.a) - std::abs(coef.b));
  const double hi = std::abs(coef.a) + std::abs(coef.b);
  return {std::pow(lo, inv), std::pow(hi, inv)};
}

VWindow default_v_window(FractionalOrder alpha, LinearCoefficients coef) {
  return {1e-6, 4.0 * std::pow(std::abs(coef.a) + std::abs(coef.b), 1.0 / alpha.value())};
}

std::vector<CriticalCurvePoint> curve_points_at(FractionalOrder alpha, LinearCoefficients coef,
                                                double v, int max_branch) {
  require_nondegenerate(coef);
  std::vector<CriticalCurvePoint> points;
  if (!(v > 0.0)) return points;
  const auto [c1, c2] = branch_arccos(alpha, coef, v);
  if (std::isnan(c1) || std::isnan(c2)) return points;

  // Squaring lost the sign information, so every (sign, multiple) pair is a
  // candidate; direct substitution decides which ones are real crossings.
  for (int m1 = 0; m1 <= max_branch; ++m1) {
    for (int s1 : {1, -1}) {
      if (duplicate_label(s1, c1)) continue;
      const double t1 = snap_tau(branch_tau(s1, m1, c1, alpha, v));
      if (t1 < 0.0) continue;
      for (int m2 = 0; m2 <= max_branch; ++m2) {
        for (int s2 : {1, -1}) {
          if (duplicate_label(s2, c2)) continue;
          const double t2 = snap_tau(branch_tau(s2, m2, c2, alpha, v));
          if (t2 < 0.0) continue;
          const double residual = crossing_residual(alpha, coef, v, t1, t2);
          if (residual > kCurveResidualTolerance) continue;
          points.push_back({v, t1, t2, Branch{s1, m1, s2, m2}, residual});
        }
      }
    }
  }
  return points;
}

std::vector<CriticalCurvePoint> critical_curve(FractionalOrder alpha, LinearCoefficients coef,
                                               VWindow window, std::size_t samples,
                                               int max_branch) {
  require_nondegenerate(coef);
  if (!(window.lo > 0.0) || window.hi < window.lo) {
    throw std::invalid_argument("critical_curve: v window must satisfy 0 < lo <= hi");
  }
  const VWindow admissible = admissible_v_interval(alpha, coef);
  const VWindow searched{std::max(window.lo, admissible.lo), std::min(window.hi, admissible.hi)};

  std::vector<CriticalCurvePoint> points;
  for (double v : sample_grid(searched, samples)) {
    auto at_v = curve_points_at(alpha, coef, v, max_branch);
    points.insert(points.end(), at_v.begin(), at_v.end());
  }
  std::sort(points.begin(), points.end(), [](const auto& l, const auto& r) {
    return std::tie(l.branch.m1, l.branch.sign1, l.v, l.branch.m2, l.branch.sign2) <
           std::tie(r.branch.m1, r.branch.sign1, r.v, r.branch.m2, r.branch.sign2);
  });
  return points;
}

std::optional<double> critical_tau2_for_tau1(FractionalOrder alpha, LinearCoefficients coef,
                                             double tau1_query, const CurveOptions& options) {
  require_nondegenerate(coef);
  const VWindow searched = search_interval(alpha, coef, options);
  const std::vector<double> vs = sample_grid(searched, options.samples);
  if (vs.empty()) return std::nullopt;

  std::vector<double> arccos1(vs.size());
  std::vector<bool> valid(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto [c1, c2] = branch_arccos(alpha, coef, vs[i]);
    arccos1[i] = c1;
    valid[i] = !std::isnan(c1) && !std::isnan(c2);
  }

  std::optional<double> best;
  auto collect_at = [&](double v, int s1, int m1) {
    const auto [c1, c2] = branch_arccos(alpha, coef, v);
    if (std::isnan(c1) || std::isnan(c2)) return;
    const double t1 = branch_tau(s1, m1, c1, alpha, v);
    for (int m2 = 0; m2 <= options.max_branch; ++m2) {
      for (int s2 : {1, -1}) {
        const double t2 = snap_tau(branch_tau(s2, m2, c2, alpha, v));
        if (t2 < 0.0) continue;
        if (crossing_residual(alpha, coef, v, t1, t2) > kCurveResidualTolerance) continue;
        if (!best || t2 < *best) best = t2;
      }
    }
  };

  for (int m1 = 0; m1 <= options.max_branch; ++m1) {
    for (int s1 : {1, -1}) {
      auto offset = [&](double c1, double v) { return branch_tau(s1, m1, c1, alpha, v) - tau1_query; };
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (!valid[i]) continue;
        const double f_i = offset(arccos1[i], vs[i]);
        if (f_i == 0.0) {
          collect_at(vs[i], s1, m1);
          continue;
        }
        if (i + 1 == vs.size() || !valid[i + 1]) continue;
        const double f_next = offset(arccos1[i + 1], vs[i + 1]);
        if (!((f_i < 0.0 && f_next > 0.0) || (f_i > 0.0 && f_next < 0.0))) continue;

        double left = vs[i];
        double right = vs[i + 1];
        double f_left = f_i;
        for (int iter = 0; iter < 100; ++iter) {
          const double mid = 0.5 * (left + right);
          if (mid == left || mid == right) break;
          const double f_mid = offset(branch_arccos(alpha, coef, mid).first, mid);
          if (f_mid == 0.0) {
            left = right = mid;
            break;
          }
          if ((f_mid < 0.0) == (f_left < 0.0)) {
            left = mid;
            f_left = f_mid;
          } else {
            right = mid;
          }
        }
        collect_at(0.5 * (left + right), s1, m1);
      }
    }
  }
  return best;
}

std::optional<CurveExtremum> curve_tau2_infimum(FractionalOrder alpha, LinearCoefficients coef,
                                                const CurveOptions& options) {
  require_nondegenerate(coef);
  const VWindow searched = search_interval(alpha, coef, options);
  if (searched.lo > searched.hi) return std::nullopt;
  const std::vector<CriticalCurvePoint> points =
      critical_curve(alpha, coef, options.window.value_or(default_v_window(alpha, coef)),
                     options.samples, options.max_branch);
  if (points.empty()) return std::nullopt;

  const auto lowest = std::min_element(points.begin(), points.end(),
                                       [](const auto& l, const auto& r) { return l.tau2 < r.tau2; });
  CurveExtremum result{lowest->tau2, lowest->tau1, lowest->v, lowest->branch};

  // Golden-section search along the minimizing branch, one sample step on
  // either side of the best sample.
  const double step = options.samples > 1
                          ? (searched.hi - searched.lo) / static_cast<double>(options.samples - 1)
                          : 0.0;
  double lo = std::max(searched.lo, lowest->v - step);
  double hi = std::min(searched.hi, lowest->v + step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double v) { return branch_tau2_or_inf(alpha, coef, lowest->branch, v); };
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  const double v_refined = f1 <= f2 ? x1 : x2;
  const double tau2_refined = std::min(f1, f2);
  if (tau2_refined < result.tau2) {
    const auto [c1, c2] = branch_arccos(alpha, coef, v_refined);
    (void)c2;
    result.tau2 = tau2_refined;
    result.v = v_refined;
    result.tau1 = branch_tau(result.branch.sign1, result.branch.m1, c1, alpha, v_refined);
  }
  return result;
}

Classification classify(FractionalOrder alpha, LinearCoefficients coef, const DelayPair& delays,
                        double tolerance, const CurveOptions& options) {
  const StabilityVerdict at_zero = stable_at_zero_delay(coef);
  if (delays.tau1 == 0.0 && delays.tau2 == 0.0) return {at_zero, std::nullopt};

  // With a + b > 0 the characteristic function is negative at lambda = 0 and
  // grows without bound along the positive real axis, so a positive real root
  // exists for every pair of delays. With a + b = 0, lambda = 0 is a root.
  if (at_zero == StabilityVerdict::UnstableAtZeroDelays) return {StabilityVerdict::Unstable, std::nullopt};
  if (at_zero == StabilityVerdict::OnBoundary) return {StabilityVerdict::OnBoundary, std::nullopt};

  const std::optional<double> critical = critical_tau2_for_tau1(alpha, coef, delays.tau1, options);
  if (critical) {
    if (delays.tau2 < *critical - tolerance) return {StabilityVerdict::Stable, critical};
    if (delays.tau2 > *critical + tolerance) return {StabilityVerdict::Unstable, critical};
    return {StabilityVerdict::OnBoundary, critical};
  }

  // No boundary crosses this tau1 inside the searched window. Stability is
  // only certain beneath every sampled curve point.
  const auto floor = curve_tau2_infimum(alpha, coef, options);
  if (!floor || delays.tau2 < floor->tau2 - tolerance) return {StabilityVerdict::Stable, std::nullopt};
  return {StabilityVerdict::Unstable, std::nullopt};
}

}  // namespace fdde
