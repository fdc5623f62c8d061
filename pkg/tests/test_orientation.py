"""Sheared-fiber orientation distribution and its rejection sampler."""

import numpy as np
import pytest

from slenderib.experiments.orientation import (
    OrientationDistribution,
    sample_orientation,
)
from slenderib.rng import rng_stream


class CountingStream:
    """Wraps a generator and counts scalar uniform draws."""

    def __init__(self, gen):
        self.gen = gen
        self.calls = 0

    def random(self):
        self.calls += 1
        return self.gen.random()


def quadrature_mass(dist, n_theta=2001, n_phi=4001):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi)
    vals = dist.omega(theta[:, None], phi[None, :]) * np.sin(theta)[:, None]
    return float(np.trapezoid(np.trapezoid(vals, phi, axis=1), theta))


class TestDistribution:
    def test_density_positive_and_flow_peaked(self):
        dist = OrientationDistribution()
        theta = np.linspace(1.0e-3, np.pi - 1.0e-3, 181)
        phi = np.linspace(0.0, 2.0 * np.pi, 360, endpoint=False)
        vals = dist.omega(theta[:, None], phi[None, :])
        assert np.all(vals > 0.0)
        # Much more mass near the flow axis than near the vorticity axis.
        near_flow = dist.omega(1.0e-3, 0.0)
        near_vorticity = dist.omega(np.pi / 2.0, 0.0)
        assert near_flow > 100.0 * near_vorticity

    def test_bound_dominates_scan(self):
        dist = OrientationDistribution()
        bound = dist.omega_sin_bound()
        gen = rng_stream(1, 0)
        theta = np.pi * gen.random(20_000)
        phi = 2.0 * np.pi * gen.random(20_000)
        vals = dist.omega(theta, phi) * np.sin(theta)
        assert float(vals.max()) < bound

    def test_nearly_normalized(self):
        # The density integrates to about 1 over the sphere; the sampler
        # never relies on exact normalization.
        mass = quadrature_mass(OrientationDistribution())
        assert mass == pytest.approx(1.0, rel=0.05)

    def test_direction_convention(self):
        dist = OrientationDistribution()
        p = dist.direction(0.0, 0.3)
        assert p == pytest.approx([1.0, 0.0, 0.0])
        p = dist.direction(np.pi / 2.0, np.pi / 2.0)
        assert p == pytest.approx([0.0, 1.0, 0.0], abs=1.0e-12)
        p = dist.direction(np.pi / 2.0, 0.0)
        assert p == pytest.approx([0.0, 0.0, 1.0], abs=1.0e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            OrientationDistribution(r_const=0.0)
        with pytest.raises(ValueError):
            OrientationDistribution(r_e=0.9)


class TestSampler:
    def test_unit_norm(self):
        dist = OrientationDistribution()
        gen = rng_stream(2, 0)
        for _ in range(200):
            p = sample_orientation(dist, gen)
            assert abs(np.linalg.norm(p) - 1.0) < 1.0e-12

    def test_deterministic_given_stream(self):
        dist = OrientationDistribution()
        a = [sample_orientation(dist, rng_stream(3, 1)) for _ in range(1)][0]
        b = [sample_orientation(dist, rng_stream(3, 1)) for _ in range(1)][0]
        assert np.array_equal(a, b)

    def test_acceptance_rate_matches_quadrature(self):
        dist = OrientationDistribution()
        mass = quadrature_mass(dist)
        bound = dist.omega_sin_bound()
        expected = mass / (2.0 * np.pi ** 2 * bound)
        stream = CountingStream(rng_stream(4, 0))
        n_samples = 4000
        for _ in range(n_samples):
            sample_orientation(dist, stream)
        attempts = stream.calls // 3
        observed = n_samples / attempts
        sigma = np.sqrt(expected * (1.0 - expected) / attempts)
        assert abs(observed - expected) < 3.0 * sigma

    def test_samples_concentrate_near_flow_axis(self):
        dist = OrientationDistribution()
        gen = rng_stream(5, 0)
        p = np.array([sample_orientation(dist, gen) for _ in range(3000)])
        counts, _ = np.histogram(np.abs(p[:, 0]), bins=10, range=(0.0, 1.0))
        assert counts.argmax() == 9
        assert np.abs(p[:, 0]).mean() > 0.75

    def test_bound_violation_aborts(self, monkeypatch):
        dist = OrientationDistribution()
        dist.omega_sin_bound()  # populate the cached bound first
        monkeypatch.setattr(
            OrientationDistribution, "omega",
            lambda self, theta, phi: np.asarray(1.0e9),
        )
        with pytest.raises(RuntimeError, match="rejection bound violated"):
            sample_orientation(dist, rng_stream(6, 0))
