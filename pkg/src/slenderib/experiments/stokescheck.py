"""Spectral solver self-check against the single-mode analytic solution.

A body force f0 sin(2 pi y / L) x_hat is divergence-free and excites a
single Fourier mode, for which the periodic Stokes solution is exactly
u = f0 L^2 / (4 pi^2 mu) sin(2 pi y / L) x_hat. The solver should
reproduce it to rounding error.
"""

from __future__ import annotations

import numpy as np

from ..config import RunConfig
from ..stokes import Grid, VectorField, solve_stokes
from .report import ExperimentReport


def analytic_mode_error(n: int, length: float = 1.0, mu: float = 1.0,
                        f0: float = 1.0) -> float:
    """Max relative error of the computed single-mode solution."""
    h = length / n
    grid = Grid(n, n, n, h, mu=mu)
    y = grid.axis_coords(1)
    profile = np.sin(2.0 * np.pi * y / length)
    force = VectorField.zeros(grid)
    force.data[0] += (f0 * profile)[None, :, None]
    u = solve_stokes(grid, force)
    amplitude = f0 * length ** 2 / (4.0 * np.pi ** 2 * mu)
    exact = np.zeros_like(u.data)
    exact[0] += (amplitude * profile)[None, :, None]
    return float(np.max(np.abs(u.data - exact)) / amplitude)


def run_stokes_check(cfg: RunConfig) -> ExperimentReport:
    p = cfg.params
    err = analytic_mode_error(p["n"], p["length"], p["mu"], p["f0"])
    scalars = {"max_rel_error": err, "grid_points": p["n"]}
    return ExperimentReport(
        experiment=cfg.experiment,
        params=p,
        seed=cfg.seed,
        scalars=scalars,
        series=[],
    )
