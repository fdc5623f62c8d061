"""Two bent fibers relaxing toward each other's tips.

Two opposed parabolic fibers sit in the z = 0 plane of a flat periodic
box, bowed away from each other in the middle so their tips face across
a small gap. As bending relaxes them straight, the tips retreat and the
gap Delta y(t) grows; that single curve is sensitive to both the fiber
mobility (effective radius) and the fiber-fiber hydrodynamic coupling,
which makes it a good accuracy metric for comparing velocity models:

- "hybrid": coarse-grid IB velocity plus the local drag correction,
- "plain": coarse-grid IB velocity alone (marker radius ~ R_h),
- "pure_drag": no grid at all, markers move by local Stokes drag only.

Errors are quoted as max_t |dy(t) - dy_ref(t)| / dy(0) against a finer
reference run of the same geometry.
"""

from __future__ import annotations

import numpy as np

from ..config import RunConfig, parse_spacing
from ..drag import (
    correction_radius,
    hydrodynamic_radius,
    marker_spacing_policy,
    xi_coefficient,
)
from ..fibers import Fiber
from ..stepping import (
    NumericalBlowupError,
    SchemeConfig,
    SimulationState,
    step,
)
from ..stokes import Grid
from .report import ExperimentReport, Series

DOMAIN_XY = 1.0
DOMAIN_Z = 0.25


def relaxation_fibers(mode: str, r_h: float, radius: float, length: float,
                      ks: float, kb: float, ell: float, dy0: float,
                      mu: float) -> list[Fiber]:
    """The two mirrored parabolas, bowed apart with tip gap dy0."""
    policy = "pure_drag" if mode == "pure_drag" else "hybrid"
    n, ds = marker_spacing_policy(policy, r_h, radius, length)
    s = ds * np.arange(n)
    u = 2.0 * s / length - 1.0
    c = ell + 0.5 * dy0  # tips at +-(c - ell), gap dy0
    lower = np.zeros((n, 3))
    lower[:, 0] = s - 0.5 * length
    lower[:, 1] = -c + ell * u * u
    upper = lower.copy()
    upper[:, 1] = -lower[:, 1]
    if mode == "hybrid":
        xi = xi_coefficient(mu, correction_radius(r_h, radius))
    elif mode == "plain":
        xi = 0.0
    else:
        xi = xi_coefficient(mu, radius)  # drag at the physical radius
    return [
        Fiber(lower, ds, ks, kb, xi),
        Fiber(upper, ds, ks, kb, xi),
    ]


def tip_separation(fibers) -> float:
    """Minimum vertical gap between the two fibers."""
    return float(np.min(fibers[1].X[:, 1] - fibers[0].X[:, 1]))


def two_fiber_relaxation(h, scheme: str, dt: float, t_end: float = 0.02,
                         mode: str = "hybrid", radius: float = 0.008,
                         ks: float = 100.0, kb: float = 0.25,
                         ell: float = 0.1, dy0: float = 0.045,
                         length: float = 0.5, mu: float = 1.0,
                         sample_dt: float = 1.0e-4, c_h: float = 1.33):
    """Evolve the pair; return (times, dy values, stable flag).

    On blow-up the series is truncated at the last completed step and
    the stable flag is False.
    """
    h = parse_spacing(h)
    r_h = hydrodynamic_radius(h, c_h)
    fibers = relaxation_fibers(mode, r_h, radius, length, ks, kb, ell, dy0, mu)
    if mode == "pure_drag":
        grid = None
    else:
        nxy = round(DOMAIN_XY / h)
        nz = round(DOMAIN_Z / h)
        grid = Grid(nxy, nxy, nz, h, mu=mu)
    state = SimulationState(grid=grid, fibers=fibers)
    cfg = SchemeConfig(scheme=scheme, dt=dt)

    n_steps = round(t_end / dt)
    sample_every = max(round(sample_dt / dt), 1)
    times = [0.0]
    values = [tip_separation(state.fibers)]
    stable = True
    for _ in range(n_steps):
        try:
            state = step(state, cfg)
        except NumericalBlowupError:
            stable = False
            break
        if state.step % sample_every == 0:
            times.append(state.step * dt)
            values.append(tip_separation(state.fibers))
    return times, values, stable


def max_relative_error(times, values, ref_times, ref_values,
                       dy0: float) -> float:
    """max_t |dy - dy_ref| / dy(0), with the reference interpolated."""
    ref = np.interp(np.asarray(times), np.asarray(ref_times),
                    np.asarray(ref_values))
    return float(np.max(np.abs(np.asarray(values) - ref))) / dy0


def run_relax(cfg: RunConfig) -> ExperimentReport:
    p = cfg.params
    times, values, stable = two_fiber_relaxation(
        p["h"], p["scheme"], p["dt"], t_end=p["t_end"], mode=p["mode"],
        radius=p["radius"], ks=p["ks"], kb=p["kb"], ell=p["ell"],
        dy0=p["dy0"], length=p["fiber_length"], mu=p["mu"],
        sample_dt=p["sample_dt"], c_h=p["c_h"],
    )
    scalars = {
        "stable": stable,
        "dy_initial": values[0],
        "dy_final": values[-1],
        "n_samples": len(values),
    }
    return ExperimentReport(
        experiment=cfg.experiment,
        params=p,
        seed=cfg.seed,
        scalars=scalars,
        series=[Series("dy", times, values)],
        status="ok" if stable else "blowup",
    )
