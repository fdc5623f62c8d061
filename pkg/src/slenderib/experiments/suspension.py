"""Effective viscosity of a sheared-aligned fiber suspension.

Straight fibers are scattered through the unit periodic box with start
points uniform in space and orientations drawn from the aligned
distribution (see orientation.py), then driven by a single-mode probe
force f(y) = f0 sin(2 pi y / L) x_hat. For a fiber-free fluid the exact
response is u = f0 L^2/(4 pi^2 mu) sin(2 pi y / L), so projecting the
computed velocity back onto the forcing mode measures an apparent
viscosity per (x, z) column:

    mu(x, z) = f0 L^3 / (8 pi^2 sum_y u(x, y, z) sin(2 pi y / L) h),

and mu_eff = <mu>/mu_f - 1 is the fibers' added resistance. The fibers
are effectively rigid at this forcing (displacements stay tiny), and
mu_eff grows to a steady value, declared converged when consecutive
samples agree to a configured number of digits.
"""

from __future__ import annotations

import numpy as np

from ..config import RunConfig, make_config, parse_spacing
from ..drag import (
    correction_radius,
    hydrodynamic_radius,
    marker_spacing_policy,
    xi_coefficient,
)
from ..fibers import Fiber
from ..rng import rng_stream
from ..stepping import (
    SchemeConfig,
    SimulationState,
    grid_velocity,
    ordered_map,
    step,
)
from ..stokes import Grid, VectorField
from .orientation import OrientationDistribution, sample_orientation
from .report import ExperimentReport, Series

DOMAIN = 1.0


def probe_body_force(grid: Grid, f0: float) -> VectorField:
    field = VectorField.zeros(grid)
    y = grid.axis_coords(1)
    field.data[0] += (f0 * np.sin(2.0 * np.pi * y / grid.lengths[1]))[None, :, None]
    return field


def measured_viscosity(grid: Grid, u: VectorField, f0: float) -> float:
    """Mean over (x, z) of the single-mode viscosity estimate."""
    length = grid.lengths[1]
    weights = np.sin(2.0 * np.pi * grid.axis_coords(1) / length)
    integral = grid.h * np.tensordot(u.data[0], weights, axes=([1], [0]))
    mu_xz = f0 * length ** 3 / (8.0 * np.pi ** 2 * integral)
    return float(np.mean(mu_xz))


def place_fibers(n_fibers: int, rng, dist: OrientationDistribution,
                 length: float, n_markers: int, ds: float,
                 ks: float, kb: float, xi: float) -> list[Fiber]:
    """Uniform start points, sampled orientations, straight fibers."""
    fibers = []
    s_grid = ds * np.arange(n_markers)
    for _ in range(n_fibers):
        start = rng.uniform(-0.5 * DOMAIN, 0.5 * DOMAIN, size=3)
        p = sample_orientation(dist, rng)
        x = start[None, :] + s_grid[:, None] * p[None, :]
        fibers.append(Fiber(x, ds, ks, kb, xi))
    return fibers


def _relative_gap(current: float, previous: float, digits: int) -> bool:
    tol = 10.0 ** (-digits) * max(abs(current), 1.0e-12)
    return abs(current - previous) <= tol


def suspension_trial(params: dict, seed: int, trial: int):
    """One random placement evolved to steady state.

    Returns (sample times, mu_eff samples, converged flag, max marker
    displacement).
    """
    p = params
    h = parse_spacing(p["h"])
    n = round(DOMAIN / h)
    grid = Grid(n, n, n, h, mu=p["mu"])
    r_h = hydrodynamic_radius(h, p["c_h"])
    xi = xi_coefficient(p["mu"], correction_radius(r_h, p["radius"]))
    n_markers, ds = marker_spacing_policy(
        "hybrid", r_h, p["radius"], p["fiber_length"]
    )
    dist = OrientationDistribution(p["r_const"], p["re_factor"] * p["aspect"])
    n_fibers = round(p["n_lf3"] * DOMAIN ** 3 / p["fiber_length"] ** 3)
    rng = rng_stream(seed, trial)
    fibers = place_fibers(
        n_fibers, rng, dist, p["fiber_length"], n_markers, ds,
        p["ks"], p["kb"], xi,
    )
    initial = [f.X.copy() for f in fibers]

    state = SimulationState(
        grid=grid, fibers=fibers, body_force=probe_body_force(grid, p["f0"])
    )
    cfg = SchemeConfig(scheme="implicit_bending", dt=p["dt"])
    mu_f = p["mu"]

    def sample() -> float:
        u = grid_velocity(state)
        return measured_viscosity(grid, u, p["f0"]) / mu_f - 1.0

    times = [0.0]
    samples = [sample()]
    converged = False
    max_disp = 0.0
    while state.step < p["max_steps"]:
        state = step(state, cfg)
        if state.step % p["sample_every"] != 0:
            continue
        times.append(state.step * p["dt"])
        samples.append(sample())
        for fiber, x0 in zip(state.fibers, initial):
            disp = float(np.max(np.abs(fiber.X - x0)))
            if disp > max_disp:
                max_disp = disp
        if _relative_gap(samples[-1], samples[-2], p["digits"]):
            converged = True
            break
    return times, samples, converged, max_disp


def suspension_viscosity_experiment(n_lf3: float, trials: int, seed: int,
                                    h="1/64", **overrides):
    """Mean and spread of steady mu_eff over independent placements."""
    params = dict(overrides)
    params.update({"n_lf3": n_lf3, "trials": trials, "h": h})
    cfg = make_config("suspension", params, seed=seed)
    report = run_suspension(cfg)
    return report.scalars["mu_eff_mean"], report.scalars["mu_eff_std"]


def run_suspension(cfg: RunConfig) -> ExperimentReport:
    p = cfg.params
    series = []
    finals = []
    flags = []
    max_disp = 0.0
    results = ordered_map(
        lambda trial: suspension_trial(p, cfg.seed, trial), range(p["trials"])
    )
    for trial, (times, samples, converged, disp) in enumerate(results):
        series.append(Series(f"mu_eff_trial{trial}", times, samples))
        finals.append(samples[-1])
        flags.append(converged)
        max_disp = max(max_disp, disp)
    finals_arr = np.asarray(finals)
    scalars = {
        "mu_eff_mean": float(np.mean(finals_arr)),
        "mu_eff_std": float(np.std(finals_arr, ddof=1)) if len(finals) > 1 else 0.0,
        "mu_eff_trials": finals,
        "converged": all(flags),
        "n_fibers": round(p["n_lf3"] * DOMAIN ** 3 / p["fiber_length"] ** 3),
        "max_marker_displacement": max_disp,
    }
    return ExperimentReport(
        experiment=cfg.experiment,
        params=p,
        seed=cfg.seed,
        scalars=scalars,
        series=series,
        status="ok" if all(flags) else "unconverged",
    )
