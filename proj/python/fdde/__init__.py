"""Fractional-order differential equations with two discrete delays."""

from ._core import (
    DegenerateCoefficients,
    IncommensurableDelays,
    NonConvergence,
    Verdict,
    admissible_v_interval,
    arccos_arguments,
    build_grid,
    characteristic_residual,
    classify,
    critical_curve,
    critical_tau2_for_tau1,
    crossing_residual,
    curve_points_at,
    curve_tau2_infimum,
    default_v_window,
    delayed_series_oracle,
    find_equilibria,
    gamma,
    ikeda,
    linear,
    linearize,
    mittag_leffler,
    phase_columns,
    simulate,
    stable_at_zero_delay,
    system,
    trapezoid_weights,
    ucar,
)

__version__ = "0.1.0"
