"""Time integration schemes: fixed points, consistency, implicit systems."""

import numpy as np
import pytest

from helpers import random_fiber, rng
from slenderib import stepping
from slenderib.drag import DragParams
from slenderib.fibers import Fiber, bending_matrix, elastic_force, stretch_jacobian
from slenderib.stepping import (
    SCHEMES,
    NewtonConvergenceError,
    NumericalBlowupError,
    SchemeConfig,
    SimulationState,
    grid_velocity,
    implicit_bending_matrix,
    newton_system_matrix,
    step,
    thread_count,
)
from slenderib.stokes import Grid, solve_stokes


def rest_fiber(n=10, ds=0.05, xi=1.0, **kw):
    X = np.zeros((n, 3))
    X[:, 0] = ds * np.arange(n)
    params = dict(ds=ds, Ks=10.0, Kb=0.5, xi=xi)
    params.update(kw)
    return Fiber(X=X, **params)


def bent_fiber(n=12, ds=0.05, bend=0.3, **kw):
    fiber = rest_fiber(n=n, ds=ds, **kw)
    X = fiber.X.copy()
    s = np.linspace(0.0, 1.0, n)
    X[:, 1] = bend * ds * n * s * (1.0 - s)
    return fiber.with_positions(X)


class TestFixedPoints:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_rest_fiber_does_not_move(self, scheme):
        state = SimulationState(grid=None, fibers=[rest_fiber()])
        cfg = SchemeConfig(scheme=scheme, dt=1.0e-3)
        out = step(state, cfg)
        assert np.abs(out.fibers[0].X - state.fibers[0].X).max() < 1.0e-12
        assert out.step == 1
        assert out.time == pytest.approx(1.0e-3)

    def test_clock_accumulates(self):
        state = SimulationState(grid=None, fibers=[rest_fiber()])
        cfg = SchemeConfig(scheme="explicit", dt=2.0e-3)
        for _ in range(5):
            state = step(state, cfg)
        assert state.step == 5
        assert state.time == pytest.approx(1.0e-2)


class TestShearAdvection:
    def test_rest_fiber_advects_with_shear(self):
        fiber = rest_fiber()
        shifted = fiber.with_positions(fiber.X + np.array([0.0, 0.2, 0.0]))
        state = SimulationState(grid=None, fibers=[shifted])
        cfg = SchemeConfig(scheme="explicit", dt=1.0e-3, shear_rate=3.0)
        out = step(state, cfg)
        moved = out.fibers[0].X - shifted.X
        expected = 1.0e-3 * 3.0 * shifted.X[:, 1]
        assert np.abs(moved[:, 0] - expected).max() < 1.0e-12
        assert np.abs(moved[:, 1:]).max() < 1.0e-12


class TestLocalDragTerm:
    def test_explicit_velocity_is_xi_times_force(self):
        fiber = bent_fiber(xi=2.5)
        state = SimulationState(grid=None, fibers=[fiber])
        dt = 1.0e-5
        out = step(state, SchemeConfig(scheme="explicit", dt=dt))
        velocity = (out.fibers[0].X - fiber.X) / dt
        expected = 2.5 * elastic_force(fiber)
        assert np.abs(velocity - expected).max() < 1.0e-9 * max(
            np.abs(expected).max(), 1.0
        )


class TestImplicitSystems:
    def test_bending_system_matches_dense(self):
        gen = rng(0)
        n, ds, kb, dt = 15, 0.04, 0.7, 1.0e-3
        xi = gen.uniform(0.5, 2.0, size=n)
        banded = implicit_bending_matrix(n, ds, kb, "curvature", dt, xi)
        dense = np.eye(n) / dt - np.diag(xi) @ bending_matrix(
            n, ds, kb, "curvature"
        ).to_dense()
        assert np.allclose(banded.to_dense(), dense, rtol=1.0e-12, atol=1.0e-9)

    def test_newton_system_matches_dense(self):
        gen = rng(1)
        fiber = random_fiber(gen, n=9)
        n, dt = fiber.n_markers, 2.0e-3
        xi = gen.uniform(0.5, 2.0, size=n)
        bmat = bending_matrix(n, fiber.ds, fiber.Kb, fiber.bending_form)
        jac = stretch_jacobian(fiber.X, fiber.ds, fiber.Ks)
        banded = newton_system_matrix(n, dt, xi, bmat, jac)
        b_dense = np.kron(bmat.to_dense(), np.eye(3))
        dense = (
            np.eye(3 * n) / dt
            - np.kron(np.diag(xi), np.eye(3)) @ (b_dense + jac.to_dense())
        )
        assert np.allclose(banded.to_dense(), dense, rtol=1.0e-12, atol=1.0e-8)

    def test_newton_reduces_to_bending_solve_without_stretching(self):
        fiber = bent_fiber(Ks=0.0, xi=1.5)
        state = SimulationState(grid=None, fibers=[fiber])
        dt = 1.0e-4
        impb = step(state, SchemeConfig(scheme="implicit_bending", dt=dt))
        newt = step(state, SchemeConfig(scheme="newton", dt=dt))
        scale = np.abs(impb.fibers[0].X).max()
        assert np.abs(impb.fibers[0].X - newt.fibers[0].X).max() < 1.0e-12 * scale


class TestConsistency:
    def test_schemes_converge_to_each_other(self):
        """Accumulated differences between schemes shrink with the timestep."""

        def run(scheme, dt, n_steps):
            state = SimulationState(grid=None, fibers=[bent_fiber(xi=1.0)])
            cfg = SchemeConfig(scheme=scheme, dt=dt)
            for _ in range(n_steps):
                state = step(state, cfg)
            return state.fibers[0].X

        dt = 2.0e-6
        diffs = []
        for k in (1, 2):
            a = run("explicit", dt / k, 16 * k)
            b = run("newton", dt / k, 16 * k)
            diffs.append(np.abs(a - b).max())
        assert diffs[1] < 0.75 * diffs[0]


class TestGridCoupling:
    def test_one_stokes_solve_per_step(self, monkeypatch):
        calls = []

        def counting_solve(grid, f):
            calls.append(1)
            return solve_stokes(grid, f)

        monkeypatch.setattr(stepping, "solve_stokes", counting_solve)
        grid = Grid(16, 16, 16, 1.0 / 16)
        fibers = [bent_fiber(n=8, ds=0.03), bent_fiber(n=8, ds=0.03, bend=0.1)]
        state = SimulationState(grid=grid, fibers=fibers)
        for scheme in SCHEMES:
            calls.clear()
            step(state, SchemeConfig(scheme=scheme, dt=1.0e-5))
            assert len(calls) == 1

    def test_gridless_state_has_no_grid_velocity(self):
        state = SimulationState(grid=None, fibers=[rest_fiber()])
        assert grid_velocity(state) is None

    def test_fibers_feel_their_own_flow(self):
        grid = Grid(24, 24, 24, 1.0 / 24)
        fiber = bent_fiber(n=8, ds=0.03, xi=0.0)
        state = SimulationState(grid=grid, fibers=[fiber])
        out = step(state, SchemeConfig(scheme="explicit", dt=1.0e-5))
        # Elastic forces move markers through the fluid even with xi = 0.
        assert np.abs(out.fibers[0].X - fiber.X).max() > 0.0


class TestFailureModes:
    def test_blowup_raises_with_diagnostics(self):
        fiber = rest_fiber(xi=1.0, Ks=1.0e12)
        stretched = fiber.with_positions(fiber.X * 50.0)
        state = SimulationState(grid=None, fibers=[stretched])
        with pytest.raises(NumericalBlowupError) as info:
            step(state, SchemeConfig(scheme="explicit", dt=1.0e-3))
        err = info.value
        assert err.step == 1
        assert err.max_speed > stepping.SPEED_LIMIT

    def test_nonfinite_positions_trip_blowup(self):
        fiber = rest_fiber()
        bad = fiber.with_positions(
            np.where(np.arange(30).reshape(10, 3) == 0, np.nan, fiber.X)
        )
        state = SimulationState(grid=None, fibers=[bad])
        with pytest.raises(NumericalBlowupError):
            step(state, SchemeConfig(scheme="explicit", dt=1.0e-6))

    def test_newton_iteration_budget_enforced(self):
        fiber = bent_fiber(bend=1.5, xi=5.0, Ks=500.0)
        state = SimulationState(grid=None, fibers=[fiber])
        cfg = SchemeConfig(
            scheme="newton", dt=1.0e-2, newton_tol=1.0e-12, newton_max_iter=1
        )
        with pytest.raises(NewtonConvergenceError):
            step(state, cfg)


class TestConfigValidation:
    def test_bad_scheme_and_timestep(self):
        with pytest.raises(ValueError):
            SchemeConfig(scheme="leapfrog", dt=1.0e-3)
        with pytest.raises(ValueError):
            SchemeConfig(scheme="explicit", dt=0.0)
        with pytest.raises(ValueError):
            SchemeConfig(scheme="newton", dt=1.0e-3, newton_max_iter=0)

    def test_thread_count_env(self, monkeypatch):
        monkeypatch.setenv("SLENDERIB_THREADS", "5")
        assert thread_count() == 5
        monkeypatch.setenv("SLENDERIB_THREADS", "0")
        assert thread_count() == 1
        monkeypatch.delenv("SLENDERIB_THREADS")
        assert thread_count() == 1
        monkeypatch.setenv("SLENDERIB_THREADS", "many")
        with pytest.raises(ValueError):
            thread_count()


class TestDragParamsIntegration:
    def test_uniform_xi_from_grid_radius(self):
        p = DragParams.for_grid(mu=1.0, r_phys=0.008, h=1.0 / 64)
        fiber = rest_fiber(xi=p.xi)
        assert np.all(fiber.xi == p.xi)
