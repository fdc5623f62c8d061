"""Measure the grid's hydrodynamic radius with a two-particle pull test.

Two markers in a unit periodic box receive equal and opposite random
forces each step (so the net force vanishes); the plain IB velocity of
each marker then defines six per-step samples

    R_h = F_ij / (6 pi mu U_ij),      i = component, j = particle,

whose mean over the run estimates the effective Stokes radius of one
marker on this grid. The markers are advected along the way so the
estimate averages over positions relative to the grid.
"""

from __future__ import annotations

import numpy as np

from ..config import RunConfig, parse_spacing
from ..interaction import interpolate, spread
from ..rng import rng_stream
from ..stokes import Grid, solve_stokes
from .report import ExperimentReport, Series

START_POSITIONS = np.array(
    [[-0.31, 0.14, 0.04], [-0.46, -0.22, 0.20]]
)
VELOCITY_FLOOR = 1.0e-14


def calibrate_hydrodynamic_radius(grid: Grid, seed: int,
                                  n_steps: int = 500, dt: float = 1.0e-3):
    """Run the pull test; return (mean R_h/h, per-step sample array).

    The sample array has shape (n_steps, 6), columns ordered as
    (particle 1 xyz, particle 2 xyz), NaN where a velocity component
    was below the measurement floor.
    """
    rng = rng_stream(seed, 0)
    markers = START_POSITIONS.copy()
    samples = np.full((n_steps, 6), np.nan)
    denom = 6.0 * np.pi * grid.mu
    for step in range(n_steps):
        force1 = rng.uniform(-1.0, 1.0, size=3)
        forces = np.vstack([force1, -force1])
        u = solve_stokes(grid, spread(grid, markers, forces))
        vel = interpolate(grid, u, markers)
        usable = np.abs(vel) >= VELOCITY_FLOOR
        ratio = np.where(usable, forces / np.where(usable, vel, 1.0), np.nan)
        samples[step] = (ratio / denom).ravel() / grid.h
        markers = markers + dt * vel
    mean = float(np.nanmean(samples))
    return mean, samples


def run_calibrate(cfg: RunConfig) -> ExperimentReport:
    p = cfg.params
    h = parse_spacing(p["h"])
    n = round(1.0 / h)
    grid = Grid(n, n, n, h, mu=p["mu"])
    mean, samples = calibrate_hydrodynamic_radius(
        grid, cfg.seed, n_steps=p["n_steps"], dt=p["dt"]
    )
    times = [step * p["dt"] for step in range(p["n_steps"])]
    labels = ["rh_p1_x", "rh_p1_y", "rh_p1_z", "rh_p2_x", "rh_p2_y", "rh_p2_z"]
    series = [
        Series(label, times, samples[:, i].tolist())
        for i, label in enumerate(labels)
    ]
    n_skipped = int(np.count_nonzero(np.isnan(samples)))
    scalars = {
        "mean_rh_over_h": mean,
        "std_rh_over_h": float(np.nanstd(samples)),
        "n_samples": int(samples.size - n_skipped),
        "n_skipped": n_skipped,
        "grid_points": n,
    }
    return ExperimentReport(
        experiment=cfg.experiment,
        params=p,
        seed=cfg.seed,
        scalars=scalars,
        series=series,
    )
