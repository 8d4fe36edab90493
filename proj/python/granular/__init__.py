"""DSMC solver and analysis toolkit for the homogeneous inelastic Boltzmann equation."""

from ._core import (
    DivergenceError,
    NumericalError,
    PreconditionError,
    __version__,
    bootstrap_noise_floor,
    build_scaling_map,
    check_moment_bound,
    collide,
    dissipation_rate,
    fit_convergence,
    fit_cooling,
    init_ensemble,
    l1_distance,
    moment,
    radial_histogram,
    run_cli,
    run_physical,
    run_rescaled,
    sample_omega,
    sphere_area,
)

__all__ = [
    "DivergenceError",
    "NumericalError",
    "PreconditionError",
    "__version__",
    "bootstrap_noise_floor",
    "build_scaling_map",
    "check_moment_bound",
    "collide",
    "dissipation_rate",
    "fit_convergence",
    "fit_cooling",
    "init_ensemble",
    "l1_distance",
    "moment",
    "radial_histogram",
    "run_cli",
    "run_physical",
    "run_rescaled",
    "sample_omega",
    "sphere_area",
]
