"""Python bindings for the disperse-uc verification kernels."""

from ._core import (
    ArgumentError,
    DecayFit,
    Grid1D,
    NumericalError,
    dft_forward,
    dft_inverse,
    dispersive_slope,
    fit_decay,
    free_propagate,
    kernel,
    lp_norm,
    make_grid,
    points,
    pq_split,
    qb_roots,
    run_experiment,
    theta,
    vdc_decay,
    weighted_norm,
)

__all__ = [
    "ArgumentError",
    "DecayFit",
    "Grid1D",
    "NumericalError",
    "dft_forward",
    "dft_inverse",
    "dispersive_slope",
    "fit_decay",
    "free_propagate",
    "kernel",
    "lp_norm",
    "make_grid",
    "points",
    "pq_split",
    "qb_roots",
    "run_experiment",
    "theta",
    "vdc_decay",
    "weighted_norm",
]

__version__ = "0.1.0"
