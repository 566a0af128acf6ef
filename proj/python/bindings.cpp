#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "fdde/models.hpp"
#include "fdde/numerics.hpp"
#include "fdde/solver.hpp"
#include "fdde/stability.hpp"

namespace py = pybind11;
using namespace fdde;

namespace {

CurveOptions make_options(std::optional<double> v_min, std::optional<double> v_max,
                          std::size_t samples, int max_branch, FractionalOrder alpha,
                          LinearCoefficients coef) {
  CurveOptions options;
  if (v_min || v_max) {
    VWindow window = default_v_window(alpha, coef);
    if (v_min) window.lo = *v_min;
    if (v_max) window.hi = *v_max;
    options.window = window;
  }
  options.samples = samples;
  options.max_branch = max_branch;
  return options;
}

py::array_t<double> to_array(const std::vector<double>& values) {
  return py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
}

std::string branch_repr(const Branch& b) {
  return "Branch(sign1=" + std::to_string(b.sign1) + ", m1=" + std::to_string(b.m1) +
         ", sign2=" + std::to_string(b.sign2) + ", m2=" + std::to_string(b.m2) + ")";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Product-trapezoid solver and stability analysis for two-delay fractional equations";

  py::register_exception<IncommensurableDelays>(m, "IncommensurableDelays", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<DegenerateCoefficients>(m, "DegenerateCoefficients", PyExc_ValueError);

  // numerics
  m.def("gamma", &gamma_function, py::arg("x"));
  m.def(
      "trapezoid_weights",
      [](double alpha, std::size_t n) { return to_array(trapezoid_weights(FractionalOrder(alpha), n).weights); },
      py::arg("alpha"), py::arg("n"), "Weights a_{j,n+1} for j = 0..n+1.");
  m.def(
      "mittag_leffler",
      [](double alpha, double z, double term_tolerance, std::size_t max_terms) {
        return mittag_leffler(FractionalOrder(alpha), z, {term_tolerance, max_terms});
      },
      py::arg("alpha"), py::arg("z"), py::arg("term_tolerance") = 1e-14, py::arg("max_terms") = 10000);
  m.def(
      "delayed_series_oracle",
      [](double alpha, double a, double tau, double t) {
        return delayed_series_oracle(FractionalOrder(alpha), a, tau, t);
      },
      py::arg("alpha"), py::arg("a"), py::arg("tau"), py::arg("t"));

  // systems
  py::class_<SystemRhs>(m, "System")
      .def("__call__", &SystemRhs::operator(), py::arg("x1"), py::arg("x2"))
      .def("partials", [](const SystemRhs& s, double x1, double x2) -> std::optional<std::pair<double, double>> {
        if (!s.partials) return std::nullopt;
        const Partials p = (*s.partials)(x1, x2);
        return std::make_pair(p.d1, p.d2);
      }, py::arg("x1"), py::arg("x2"));
  m.def("ucar", [](double delta, double epsilon) { return ucar_rhs({delta, epsilon}); },
        py::arg("delta") = 1.0, py::arg("epsilon") = 1.0);
  m.def("ikeda", [](double c1, double c2) { return ikeda_rhs({c1, c2}); },
        py::arg("c1") = -3.0, py::arg("c2") = 24.0);
  m.def("linear", &linear_rhs, py::arg("a"), py::arg("b"));
  m.def(
      "system",
      [](std::function<double(double, double)> g,
         std::optional<std::function<std::pair<double, double>(double, double)>> partials) {
        SystemRhs rhs{std::move(g), std::nullopt};
        if (partials) {
          rhs.partials = [p = *partials](double x1, double x2) {
            const auto [d1, d2] = p(x1, x2);
            return Partials{d1, d2};
          };
        }
        return rhs;
      },
      py::arg("g"), py::arg("partials") = py::none(), "Wrap a Python callable g(x1, x2).");

  // solver
  py::class_<CommensurateGrid>(m, "Grid")
      .def_readonly("h", &CommensurateGrid::h)
      .def_readonly("steps", &CommensurateGrid::steps)
      .def_readonly("k1", &CommensurateGrid::k1)
      .def_readonly("k2", &CommensurateGrid::k2)
      .def_readonly("k", &CommensurateGrid::k)
      .def_property_readonly("horizon", &CommensurateGrid::horizon)
      .def("__repr__", [](const CommensurateGrid& g) {
        return "Grid(h=" + std::to_string(g.h) + ", steps=" + std::to_string(g.steps) +
               ", k1=" + std::to_string(g.k1) + ", k2=" + std::to_string(g.k2) + ")";
      });
  m.def(
      "build_grid",
      [](double tau1, double tau2, double horizon, double h, double tolerance, std::size_t max_refinement) {
        return build_grid(DelayPair(tau1, tau2), horizon, h, {tolerance, max_refinement});
      },
      py::arg("tau1"), py::arg("tau2"), py::arg("horizon"), py::arg("h"),
      py::arg("tolerance") = 1e-9, py::arg("max_refinement") = 1024);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("h", &Trajectory::h)
      .def_readonly("t0_offset", &Trajectory::t0_offset)
      .def_readonly("truncated_at", &Trajectory::truncated_at)
      .def_property_readonly("truncated", &Trajectory::truncated)
      .def_property_readonly("values", [](const Trajectory& t) { return to_array(t.values); },
                             "All stored values, starting at t = -k h.")
      .def_property_readonly("t", [](const Trajectory& t) {
        std::vector<double> ts(t.size_from_zero());
        for (std::size_t n = 0; n < ts.size(); ++n) ts[n] = t.time(static_cast<std::ptrdiff_t>(n));
        return to_array(ts);
      })
      .def_property_readonly("x", [](const Trajectory& t) {
        std::vector<double> xs(t.size_from_zero());
        for (std::size_t n = 0; n < xs.size(); ++n) xs[n] = t.at(static_cast<std::ptrdiff_t>(n));
        return to_array(xs);
      })
      .def("__len__", &Trajectory::size_from_zero);
  m.def(
      "simulate",
      [](const SystemRhs& rhs, double alpha, const CommensurateGrid& grid,
         std::variant<double, std::function<double(double)>> history) {
        HistorySpec spec = std::visit([](auto&& h) -> HistorySpec { return h; }, history);
        return simulate(rhs, FractionalOrder(alpha), grid, spec);
      },
      py::arg("system"), py::arg("alpha"), py::arg("grid"), py::arg("history"));
  m.def(
      "phase_columns",
      [](const Trajectory& traj, const CommensurateGrid& grid) {
        const auto rows = phase_columns(traj, grid);
        py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), py::ssize_t{4}});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto r = static_cast<py::ssize_t>(i);
          view(r, 0) = rows[i].t;
          view(r, 1) = rows[i].x;
          view(r, 2) = rows[i].x_tau1;
          view(r, 3) = rows[i].x_tau2;
        }
        return out;
      },
      py::arg("trajectory"), py::arg("grid"), "Rows (t, x, x(t - tau1), x(t - tau2)).");

  // stability
  py::enum_<StabilityVerdict>(m, "Verdict")
      .value("StableAtZeroDelays", StabilityVerdict::StableAtZeroDelays)
      .value("UnstableAtZeroDelays", StabilityVerdict::UnstableAtZeroDelays)
      .value("Stable", StabilityVerdict::Stable)
      .value("Unstable", StabilityVerdict::Unstable)
      .value("OnBoundary", StabilityVerdict::OnBoundary);

  py::class_<Branch>(m, "Branch")
      .def_readonly("sign1", &Branch::sign1)
      .def_readonly("m1", &Branch::m1)
      .def_readonly("sign2", &Branch::sign2)
      .def_readonly("m2", &Branch::m2)
      .def("__eq__", [](const Branch& l, const Branch& r) { return l == r; })
      .def("__hash__", [](const Branch& b) { return py::hash(py::make_tuple(b.sign1, b.m1, b.sign2, b.m2)); })
      .def("__repr__", &branch_repr);

  py::class_<CriticalCurvePoint>(m, "CurvePoint")
      .def_readonly("v", &CriticalCurvePoint::v)
      .def_readonly("tau1", &CriticalCurvePoint::tau1)
      .def_readonly("tau2", &CriticalCurvePoint::tau2)
      .def_readonly("branch", &CriticalCurvePoint::branch)
      .def_readonly("residual", &CriticalCurvePoint::residual);

  py::class_<CurveExtremum>(m, "CurveExtremum")
      .def_readonly("tau2", &CurveExtremum::tau2)
      .def_readonly("tau1", &CurveExtremum::tau1)
      .def_readonly("v", &CurveExtremum::v)
      .def_readonly("branch", &CurveExtremum::branch);

  py::class_<Classification>(m, "Classification")
      .def_readonly("verdict", &Classification::verdict)
      .def_readonly("critical_tau2", &Classification::critical_tau2);

  m.def(
      "find_equilibria",
      [](const SystemRhs& rhs, double lo, double hi, std::size_t resolution) {
        std::vector<double> xs;
        for (const auto& eq : find_equilibria(rhs, lo, hi, resolution)) xs.push_back(eq.x_star);
        return xs;
      },
      py::arg("system"), py::arg("lo"), py::arg("hi"), py::arg("resolution") = 2001);
  m.def(
      "linearize",
      [](const SystemRhs& rhs, double x_star) {
        const auto c = linearize(rhs, {x_star});
        return std::make_pair(c.a, c.b);
      },
      py::arg("system"), py::arg("x_star"), "Coefficients (a, b) of the linearization at x*.");
  m.def("stable_at_zero_delay", [](double a, double b) { return stable_at_zero_delay({a, b}); },
        py::arg("a"), py::arg("b"));
  m.def(
      "characteristic_residual",
      [](double alpha, double a, double b, double tau1, double tau2, std::complex<double> lambda) {
        return characteristic_residual(FractionalOrder(alpha), {a, b}, DelayPair(tau1, tau2), lambda);
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("tau1"), py::arg("tau2"), py::arg("lam"));
  m.def(
      "arccos_arguments",
      [](double alpha, double a, double b, double v) { return arccos_arguments(FractionalOrder(alpha), {a, b}, v); },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("v"));
  m.def(
      "crossing_residual",
      [](double alpha, double a, double b, double v, double tau1, double tau2) {
        return crossing_residual(FractionalOrder(alpha), {a, b}, v, tau1, tau2);
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("v"), py::arg("tau1"), py::arg("tau2"));
  m.def(
      "admissible_v_interval",
      [](double alpha, double a, double b) {
        const auto w = admissible_v_interval(FractionalOrder(alpha), {a, b});
        return std::make_pair(w.lo, w.hi);
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"));
  m.def(
      "default_v_window",
      [](double alpha, double a, double b) {
        const auto w = default_v_window(FractionalOrder(alpha), {a, b});
        return std::make_pair(w.lo, w.hi);
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"));
  m.def(
      "curve_points_at",
      [](double alpha, double a, double b, double v, int max_branch) {
        return curve_points_at(FractionalOrder(alpha), {a, b}, v, max_branch);
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("v"), py::arg("max_branch") = 8);
  m.def(
      "critical_curve",
      [](double alpha, double a, double b, std::optional<double> v_min, std::optional<double> v_max,
         std::size_t samples, int max_branch) {
        const FractionalOrder order(alpha);
        const LinearCoefficients coef{a, b};
        const CurveOptions o = make_options(v_min, v_max, samples, max_branch, order, coef);
        return critical_curve(order, coef, o.window.value_or(default_v_window(order, coef)), samples, max_branch);
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("v_min") = py::none(),
      py::arg("v_max") = py::none(), py::arg("samples") = 2001, py::arg("max_branch") = 8);
  m.def(
      "critical_tau2_for_tau1",
      [](double alpha, double a, double b, double tau1, std::size_t samples, int max_branch) {
        const FractionalOrder order(alpha);
        return critical_tau2_for_tau1(order, {a, b}, tau1,
                                      make_options(std::nullopt, std::nullopt, samples, max_branch, order, {a, b}));
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("tau1"), py::arg("samples") = 4000,
      py::arg("max_branch") = 8);
  m.def(
      "curve_tau2_infimum",
      [](double alpha, double a, double b, std::size_t samples, int max_branch) {
        const FractionalOrder order(alpha);
        return curve_tau2_infimum(order, {a, b},
                                  make_options(std::nullopt, std::nullopt, samples, max_branch, order, {a, b}));
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("samples") = 4000, py::arg("max_branch") = 8);
  m.def(
      "classify",
      [](double alpha, double a, double b, double tau1, double tau2, double tolerance, std::size_t samples,
         int max_branch) {
        const FractionalOrder order(alpha);
        return classify(order, {a, b}, DelayPair(tau1, tau2), tolerance,
                        make_options(std::nullopt, std::nullopt, samples, max_branch, order, {a, b}));
      },
      py::arg("alpha"), py::arg("a"), py::arg("b"), py::arg("tau1"), py::arg("tau2"),
      py::arg("tolerance") = 1e-6, py::arg("samples") = 4000, py::arg("max_branch") = 8);
}
