#include "fdde/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fdde/io.hpp"
#include "fdde/models.hpp"
#include "fdde/numerics.hpp"
#include "fdde/solver.hpp"
#include "fdde/stability.hpp"

namespace fdde::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::string model;
  bool linear = false;
  double delta = 1.0;
  double epsilon = 1.0;
  double c1 = -3.0;
  double c2 = 24.0;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> x_star;
};

struct RunConfig {
  ModelFlags model;
  double alpha = 1.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double horizon = 0.0;
  double h = 0.01;
  std::optional<double> history;
  std::string out;
  double grid_tolerance = 1e-9;
  double v_min = 1e-6;
  std::optional<double> v_max;
  std::size_t samples = 0;
  int max_branch = 8;
  double tolerance = 1e-6;
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t resolution = 2001;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags, bool with_x_star) {
  auto* model = cmd->add_option("--model", flags.model, "Built-in model")
                    ->check(CLI::IsMember({std::string(kUcarModel), std::string(kIkedaModel)}));
  auto* linear = cmd->add_flag("--linear", flags.linear, "Use g(x1, x2) = a x1 + b x2");
  model->excludes(linear);
  cmd->add_option("--delta", flags.delta, "Ucar delta")->capture_default_str();
  cmd->add_option("--epsilon", flags.epsilon, "Ucar epsilon")->capture_default_str();
  cmd->add_option("--c1", flags.c1, "Ikeda linear coefficient")->capture_default_str();
  cmd->add_option("--c2", flags.c2, "Ikeda sine coefficient")->capture_default_str();
  cmd->add_option("--a", flags.a, "Linear coefficient of x(t - tau1)");
  cmd->add_option("--b", flags.b, "Linear coefficient of x(t - tau2)");
  if (with_x_star) {
    cmd->add_option("--x-star", flags.x_star,
                    "Equilibrium to linearize about (refined to the nearest root)");
  }
}

SystemRhs make_rhs(const ModelFlags& flags) {
  if (flags.linear) {
    if (!flags.a || !flags.b) throw ConfigError("--linear requires --a and --b");
    return linear_rhs(*flags.a, *flags.b);
  }
  if (flags.model == kUcarModel) return ucar_rhs({flags.delta, flags.epsilon});
  if (flags.model == kIkedaModel) return ikeda_rhs({flags.c1, flags.c2});
  throw ConfigError("one of --model {ucar,ikeda} or --linear is required");
}

double default_history(const ModelFlags& flags) {
  if (flags.model == kUcarModel) return 0.8;
  if (flags.model == kIkedaModel) return 2.5;
  return 1.0;
}

// Linearization target for curve/classify commands.
LinearCoefficients resolve_coefficients(const ModelFlags& flags, double& x_star_out) {
  if (flags.linear) {
    if (!flags.a || !flags.b) throw ConfigError("--linear requires --a and --b");
    x_star_out = 0.0;
    return {*flags.a, *flags.b};
  }
  const SystemRhs rhs = make_rhs(flags);
  double guess = 0.0;
  if (flags.x_star) {
    guess = *flags.x_star;
  } else if (flags.model == kUcarModel) {
    guess = std::sqrt(flags.delta / flags.epsilon);
  } else {
    guess = 2.7859;
  }
  const double radius = 0.5 * std::max(1.0, std::abs(guess));
  const auto roots = find_equilibria(rhs, guess - radius, guess + radius, 1001);
  if (roots.empty()) {
    std::ostringstream os;
    os << "no equilibrium of model '" << flags.model << "' near x*=" << guess;
    throw ConfigError(os.str());
  }
  const auto nearest = std::min_element(roots.begin(), roots.end(), [&](auto l, auto r) {
    return std::abs(l.x_star - guess) < std::abs(r.x_star - guess);
  });
  x_star_out = nearest->x_star;
  return linearize(rhs, *nearest);
}

CurveOptions curve_options(const RunConfig& cfg, FractionalOrder alpha, LinearCoefficients coef) {
  if (!(cfg.v_min > 0.0)) throw ConfigError("--v-min must be positive");
  if (cfg.max_branch < 0) throw ConfigError("--max-branch must be >= 0");
  CurveOptions options;
  VWindow window = default_v_window(alpha, coef);
  window.lo = cfg.v_min;
  if (cfg.v_max) window.hi = *cfg.v_max;
  if (window.hi < window.lo) throw ConfigError("--v-max must not be below --v-min");
  options.window = window;
  options.samples = cfg.samples;
  options.max_branch = cfg.max_branch;
  return options;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  return file;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& err) {
  const SystemRhs rhs = make_rhs(cfg.model);
  const FractionalOrder alpha(cfg.alpha);
  const DelayPair delays(cfg.tau1, cfg.tau2);
  if (!(cfg.horizon > 0.0)) throw ConfigError("--T must be positive");
  if (!(cfg.h > 0.0)) throw ConfigError("--h must be positive");
  const CommensurateGrid grid = build_grid(delays, cfg.horizon, cfg.h, {cfg.grid_tolerance, 1024});
  const double phi = cfg.history.value_or(default_history(cfg.model));
  if (!std::isfinite(phi)) throw ConfigError("--history must be finite");

  std::ofstream file = open_output(cfg.out);
  const Trajectory traj = simulate(rhs, alpha, grid, phi);
  io::write_trajectory_csv(file, phase_columns(traj, grid));
  if (traj.truncated()) {
    err << "simulate: trajectory became non-finite at step " << *traj.truncated_at << " (t="
        << traj.time(static_cast<std::ptrdiff_t>(*traj.truncated_at))
        << "); partial output written to " << cfg.out << '\n';
    return kTruncated;
  }
  return kSuccess;
}

int cmd_curves(const RunConfig& cfg) {
  const FractionalOrder alpha(cfg.alpha);
  double x_star = 0.0;
  const LinearCoefficients coef = resolve_coefficients(cfg.model, x_star);
  const CurveOptions options = curve_options(cfg, alpha, coef);
  const auto points = critical_curve(alpha, coef, *options.window, options.samples, options.max_branch);
  std::ofstream file = open_output(cfg.out);
  io::write_curve_csv(file, points);
  return kSuccess;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const FractionalOrder alpha(cfg.alpha);
  const DelayPair delays(cfg.tau1, cfg.tau2);
  double x_star = 0.0;
  const LinearCoefficients coef = resolve_coefficients(cfg.model, x_star);
  if (!(cfg.tolerance >= 0.0)) throw ConfigError("--tolerance must be nonnegative");
  const CurveOptions options = curve_options(cfg, alpha, coef);
  const Classification result = classify(alpha, coef, delays, cfg.tolerance, options);

  json doc;
  doc["verdict"] = std::string(to_string(result.verdict));
  doc["critical_tau2"] = result.critical_tau2 ? json(*result.critical_tau2) : json(nullptr);
  doc["a"] = coef.a;
  doc["b"] = coef.b;
  doc["alpha"] = alpha.value();
  doc["tau1"] = delays.tau1;
  doc["tau2"] = delays.tau2;
  out << doc.dump(2) << '\n';
  return kSuccess;
}

int cmd_equilibria(const RunConfig& cfg, std::ostream& out) {
  const SystemRhs rhs = make_rhs(cfg.model);
  json list = json::array();
  for (const Equilibrium& eq : find_equilibria(rhs, cfg.x_min, cfg.x_max, cfg.resolution)) {
    const LinearCoefficients coef = linearize(rhs, eq);
    list.push_back({{"x_star", eq.x_star},
                    {"a", coef.a},
                    {"b", coef.b},
                    {"stable_at_zero", stable_at_zero_delay(coef) == StabilityVerdict::StableAtZeroDelays}});
  }
  out << list.dump(2) << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-delay fractional differential equations: simulation and stability curves", "fdde"};
  app.require_subcommand(1);
  // "-h" is left free; --h is the step size.
  app.set_help_flag("--help", "Print this help message and exit");

  RunConfig sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the model and write t,x,x_tau1,x_tau2 CSV");
  simulate_cmd->set_help_flag("--help", "Print this help message and exit");
  add_model_flags(simulate_cmd, sim.model, false);
  simulate_cmd->add_option("--alpha", sim.alpha, "Derivative order in (0, 1]")->required();
  simulate_cmd->add_option("--tau1", sim.tau1, "First delay")->required();
  simulate_cmd->add_option("--tau2", sim.tau2, "Second delay")->required();
  simulate_cmd->add_option("--T", sim.horizon, "Horizon")->required();
  simulate_cmd->add_option("--h", sim.h, "Requested step (refined to divide delays and T)")->capture_default_str();
  simulate_cmd->add_option("--history", sim.history, "Constant initial function (default: 0.8 ucar, 2.5 ikeda, 1 linear)");
  simulate_cmd->add_option("--grid-tolerance", sim.grid_tolerance, "Relative commensurability tolerance")->capture_default_str();
  simulate_cmd->add_option("--out", sim.out, "Output CSV path")->required();

  RunConfig curves;
  curves.samples = 2001;
  auto* curves_cmd = app.add_subcommand("curves", "Sample critical curves and write CSV");
  add_model_flags(curves_cmd, curves.model, true);
  curves_cmd->add_option("--alpha", curves.alpha, "Derivative order in (0, 1]")->required();
  curves_cmd->add_option("--v-min", curves.v_min, "Lower end of the frequency window")->capture_default_str();
  curves_cmd->add_option("--v-max", curves.v_max, "Upper end of the frequency window (default 4 (|a|+|b|)^(1/alpha))");
  curves_cmd->add_option("--samples", curves.samples, "Frequency samples")->capture_default_str();
  curves_cmd->add_option("--max-branch", curves.max_branch, "Largest 2 pi multiple per delay")->capture_default_str();
  curves_cmd->add_option("--out", curves.out, "Output CSV path")->required();

  RunConfig cls;
  cls.samples = 4000;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a delay pair as stable or unstable (JSON)");
  add_model_flags(classify_cmd, cls.model, true);
  classify_cmd->add_option("--alpha", cls.alpha, "Derivative order in (0, 1]")->required();
  classify_cmd->add_option("--tau1", cls.tau1, "First delay")->capture_default_str();
  classify_cmd->add_option("--tau2", cls.tau2, "Second delay")->capture_default_str();
  classify_cmd->add_option("--v-min", cls.v_min, "Lower end of the frequency window")->capture_default_str();
  classify_cmd->add_option("--v-max", cls.v_max, "Upper end of the frequency window");
  classify_cmd->add_option("--samples", cls.samples, "Frequency samples")->capture_default_str();
  classify_cmd->add_option("--max-branch", cls.max_branch, "Largest 2 pi multiple per delay")->capture_default_str();
  classify_cmd->add_option("--tolerance", cls.tolerance, "Boundary tolerance in tau2")->capture_default_str();

  RunConfig eqs;
  auto* equilibria_cmd = app.add_subcommand("equilibria", "List equilibria with their linearizations (JSON)");
  add_model_flags(equilibria_cmd, eqs.model, false);
  equilibria_cmd->add_option("--x-min", eqs.x_min, "Scan bracket lower end")->capture_default_str();
  equilibria_cmd->add_option("--x-max", eqs.x_max, "Scan bracket upper end")->capture_default_str();
  equilibria_cmd->add_option("--resolution", eqs.resolution, "Scan points")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, err);
    if (*curves_cmd) return cmd_curves(curves);
    if (*classify_cmd) return cmd_classify(cls, out);
    if (*equilibria_cmd) return cmd_equilibria(eqs, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace fdde::cli
