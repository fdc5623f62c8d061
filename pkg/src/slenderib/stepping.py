"""Time integrators for the hybrid fiber update.

Each step advances every fiber through

    (X^{n+1} - X^n)/dt = S*(X^n) u^n + u_sh(X^n) + xi * F,

where u^n is the grid velocity driven by all fibers' elastic forces (one
Stokes solve per step regardless of fiber count), u_sh an optional
background linear shear treated explicitly, and xi*F the local drag
velocity. Three treatments of the drag term are provided:

- "explicit": F = F^n, forward Euler.
- "implicit_bending": the linear bending part is taken at X^{n+1},
  giving one pentadiagonal solve per coordinate per fiber.
- "newton": bending and stretching both implicit; each Newton iteration
  linearizes the tension force and solves one banded system over the
  fiber's 3N unknowns (3x3 blocks, scalar bandwidth 6).

The grid velocity always enters explicitly, so fibers decouple: the
implicit solves are independent per fiber and may run on a thread pool
(SLENDERIB_THREADS). Results are identical for any thread count because
fibers are mapped in order and spreading is always sequential.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .banded import BandedMatrix, banded_solve, cholesky_factor
from .fibers import (
    Fiber,
    bending_force,
    bending_matrix,
    elastic_force,
    stretch_force,
    stretch_jacobian,
)
from .interaction import interpolate, spread
from .stokes import Grid, VectorField, solve_stokes

SCHEMES = ("explicit", "implicit_bending", "newton")

# Operational divergence threshold for Table-style stability scans.
SPEED_LIMIT = 1.0e6  # um/s


class NumericalBlowupError(RuntimeError):
    """Marker speeds exceeded the blow-up threshold or became non-finite."""

    def __init__(self, step: int, time: float, max_speed: float):
        super().__init__(
            f"solution blew up at step {step} (t = {time:.6g} s): "
            f"max marker speed {max_speed:.3g} um/s"
        )
        self.step = step
        self.time = time
        self.max_speed = max_speed


class NewtonConvergenceError(RuntimeError):
    """Newton iteration for the implicit tension solve did not converge."""

    def __init__(self, step: int, residuals: list[float]):
        super().__init__(
            f"Newton iteration did not converge at step {step}; "
            f"residual history {residuals}"
        )
        self.step = step
        self.residuals = residuals


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str
    dt: float
    shear_rate: float = 0.0
    newton_tol: float = 1.0e-6
    newton_max_iter: int = 50
    speed_limit: float = SPEED_LIMIT

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.dt <= 0.0:
            raise ValueError("timestep must be positive")
        if self.newton_tol <= 0.0 or self.newton_max_iter < 1:
            raise ValueError("invalid Newton controls")


@dataclass
class SimulationState:
    """Grid (or None for a pure-drag run), fibers, clock, and body force."""

    grid: Grid | None
    fibers: list[Fiber]
    time: float = 0.0
    step: int = 0
    body_force: VectorField | None = None


def thread_count() -> int:
    """Worker threads for per-fiber solves (SLENDERIB_THREADS, default 1)."""
    raw = os.environ.get("SLENDERIB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError("SLENDERIB_THREADS must be an integer") from exc
    return max(1, n)


def ordered_map(fn, items):
    """Map fn over items, concurrently when SLENDERIB_THREADS allows.

    Results always come back in input order, so output is independent of
    the worker count.
    """
    items = list(items)
    n = thread_count()
    if n > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


_map_fibers = ordered_map


def grid_velocity(state: SimulationState, forces=None) -> VectorField | None:
    """Stokes velocity from all fibers' forces plus any body force.

    One spread and one solve for the whole ensemble; None when the state
    has no grid (pure-drag runs).
    """
    if state.grid is None:
        return None
    grid = state.grid
    if forces is None:
        forces = [elastic_force(f) for f in state.fibers]
    if state.fibers:
        markers = np.concatenate([f.X for f in state.fibers])
        values = np.concatenate(forces)
        field = spread(grid, markers, values)
    else:
        field = VectorField.zeros(grid)
    if state.body_force is not None:
        field = VectorField(grid, field.data + state.body_force.data)
    return solve_stokes(grid, field)


def _external_velocity(state: SimulationState, cfg: SchemeConfig, u, fiber: Fiber):
    """Interpolated grid velocity plus background shear at the markers."""
    if u is not None:
        vel = interpolate(state.grid, u, fiber.X)
    else:
        vel = np.zeros_like(fiber.X)
    if cfg.shear_rate != 0.0:
        vel[:, 0] += cfg.shear_rate * fiber.X[:, 1]
    return vel


def _finalize(state, cfg, new_fibers, max_speed) -> SimulationState:
    finite = np.isfinite(max_speed) and all(
        np.all(np.isfinite(f.X)) for f in new_fibers
    )
    if not finite or max_speed > cfg.speed_limit:
        # Report the step being computed, not the last completed one.
        raise NumericalBlowupError(state.step + 1, state.time + cfg.dt, max_speed)
    return SimulationState(
        grid=state.grid,
        fibers=new_fibers,
        time=state.time + cfg.dt,
        step=state.step + 1,
        body_force=state.body_force,
    )


def step_explicit(state: SimulationState, cfg: SchemeConfig) -> SimulationState:
    """Forward Euler on the full update."""
    forces = [elastic_force(f) for f in state.fibers]
    u = grid_velocity(state, forces)

    def advance(item):
        fiber, force = item
        vel = _external_velocity(state, cfg, u, fiber)
        vel += fiber.xi[:, None] * force
        speed = float(np.max(np.abs(vel))) if vel.size else 0.0
        return fiber.with_positions(fiber.X + cfg.dt * vel), speed

    results = _map_fibers(advance, list(zip(state.fibers, forces)))
    new_fibers = [r[0] for r in results]
    max_speed = max((r[1] for r in results), default=0.0)
    return _finalize(state, cfg, new_fibers, max_speed)


@lru_cache(maxsize=None)
def _bending_banded(n: int, ds: float, kb: float, form: str) -> BandedMatrix:
    return bending_matrix(n, ds, kb, form)


def implicit_bending_matrix(n, ds, kb, form, dt, xi) -> BandedMatrix:
    """Pentadiagonal I/dt - diag(xi) B acting on one coordinate."""
    bmat = _bending_banded(n, ds, kb, form)
    ab = np.zeros_like(bmat.ab)
    for r in range(5):
        shift = r - 2  # row index minus column index on this diagonal
        if shift >= 0:
            ab[r, : n - shift] = -xi[shift:] * bmat.ab[r, : n - shift]
        else:
            ab[r, -shift:] = -xi[: n + shift] * bmat.ab[r, -shift:]
    ab[2, :] += 1.0 / dt
    return BandedMatrix(ab, 2, 2)


_IMPB_CACHE: dict = {}


def _impb_solver(n, ds, kb, form, dt, xi):
    # With uniform xi the matrix is SPD and the Cholesky factor is shared
    # by every fiber with the same parameters (e.g. a whole suspension).
    key = (n, ds, kb, form, dt, xi.tobytes())
    solver = _IMPB_CACHE.get(key)
    if solver is None:
        mat = implicit_bending_matrix(n, ds, kb, form, dt, xi)
        if np.all(xi == xi[0]):
            solver = cholesky_factor(mat).solve
        else:
            solver = lambda rhs: banded_solve(mat, rhs)  # noqa: E731
        _IMPB_CACHE[key] = solver
    return solver


def step_implicit_bending(state: SimulationState, cfg: SchemeConfig) -> SimulationState:
    """Bending at X^{n+1}; stretching, grid velocity, and shear explicit."""
    stretch = [stretch_force(f.X, f.ds, f.Ks) for f in state.fibers]
    bend = [
        bending_force(f.X, f.ds, f.Kb, f.bending_form) for f in state.fibers
    ]
    u = grid_velocity(state, [s + b for s, b in zip(stretch, bend)])

    def advance(item):
        fiber, fs = item
        uext = _external_velocity(state, cfg, u, fiber)
        rhs = fiber.X / cfg.dt + uext + fiber.xi[:, None] * fs
        solver = _impb_solver(
            fiber.n_markers, fiber.ds, fiber.Kb, fiber.bending_form, cfg.dt, fiber.xi
        )
        xnew = solver(rhs)
        speed = float(np.max(np.abs(xnew - fiber.X))) / cfg.dt
        return fiber.with_positions(xnew), speed

    results = _map_fibers(advance, list(zip(state.fibers, stretch)))
    new_fibers = [r[0] for r in results]
    max_speed = max((r[1] for r in results), default=0.0)
    return _finalize(state, cfg, new_fibers, max_speed)


def newton_system_matrix(n, dt, xi, bmat: BandedMatrix, jac) -> BandedMatrix:
    """Banded I/dt - diag(xi)(B + J) over marker-major (k, coord) unknowns.

    B couples same coordinates two markers apart (offsets 0, +-3, +-6);
    the tension Jacobian contributes full 3x3 blocks one marker apart, so
    the scalar bandwidth is 6 on each side.
    """
    ab = np.zeros((13, 3 * n))
    ab[6, :] = 1.0 / dt
    for r in range(5):
        shift = r - 2
        if shift >= 0:
            vals = -xi[shift:] * bmat.ab[r, : n - shift]
            cols = 3 * np.arange(n - shift)
        else:
            vals = -xi[: n + shift] * bmat.ab[r, -shift:]
            cols = 3 * np.arange(-shift, n)
        for alpha in range(3):
            ab[6 + 3 * shift, cols + alpha] += vals
    diag, off = jac.diag, jac.off
    cols_all = 3 * np.arange(n)
    cols_up = 3 * np.arange(n - 1)  # j for blocks at (j+1, j) and (j, j+1)
    for alpha in range(3):
        for beta in range(3):
            ab[6 + alpha - beta, cols_all + beta] += -xi * diag[:, alpha, beta]
            # block (i = j+1, j): dF_{j+1}/dX_j, symmetric segment block
            ab[9 + alpha - beta, cols_up + beta] += -xi[1:] * off[:, alpha, beta]
            # block (i = j-1, j): dF_{j-1}/dX_j
            ab[3 + alpha - beta, cols_up + 3 + beta] += -xi[:-1] * off[:, alpha, beta]
    return BandedMatrix(ab, 6, 6)


def _newton_update(fiber: Fiber, uext, cfg: SchemeConfig, step_index: int):
    n = fiber.n_markers
    x0 = fiber.X
    bmat = _bending_banded(n, fiber.ds, fiber.Kb, fiber.bending_form)
    xi_col = fiber.xi[:, None]
    y = x0.copy()
    residuals: list[float] = []
    for _ in range(cfg.newton_max_iter):
        fs = stretch_force(y, fiber.ds, fiber.Ks)
        g = (y - x0) / cfg.dt - uext - xi_col * (bmat.matvec(y) + fs)
        res = float(np.max(np.abs(g)))
        residuals.append(res)
        if res < cfg.newton_tol:
            return y, residuals
        jac = stretch_jacobian(y, fiber.ds, fiber.Ks)
        mat = newton_system_matrix(n, cfg.dt, fiber.xi, bmat, jac)
        delta = banded_solve(mat, -g.ravel())
        y = y + delta.reshape(n, 3)
    raise NewtonConvergenceError(step_index, residuals)


def step_newton(state: SimulationState, cfg: SchemeConfig) -> SimulationState:
    """Bending and tension at X^{n+1}, solved by Newton iteration.

    Converges to the residual tolerance in velocity units (um/s); with
    Ks = 0 the first iteration already solves the linear system and the
    scheme coincides with implicit bending.
    """
    u = grid_velocity(state)

    def advance(fiber):
        uext = _external_velocity(state, cfg, u, fiber)
        xnew, _ = _newton_update(fiber, uext, cfg, state.step)
        speed = float(np.max(np.abs(xnew - fiber.X))) / cfg.dt
        return fiber.with_positions(xnew), speed

    results = _map_fibers(advance, state.fibers)
    new_fibers = [r[0] for r in results]
    max_speed = max((r[1] for r in results), default=0.0)
    return _finalize(state, cfg, new_fibers, max_speed)


_STEPPERS = {
    "explicit": step_explicit,
    "implicit_bending": step_implicit_bending,
    "newton": step_newton,
}


def step(state: SimulationState, cfg: SchemeConfig) -> SimulationState:
    """Advance one timestep with the configured scheme."""
    return _STEPPERS[cfg.scheme](state, cfg)
