"""Banded matrix container and direct solvers against dense oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import rng
from slenderib.banded import BandedMatrix, banded_solve, cholesky_factor


def random_banded_dense(gen, n, lower, upper, dominant=True):
    m = np.zeros((n, n))
    for off in range(-lower, upper + 1):
        k = n - abs(off)
        if k <= 0:
            continue
        vals = gen.standard_normal(k)
        m += np.diag(vals, off)
    if dominant:
        m += np.diag(np.abs(m).sum(axis=1) + 1.0)
    return m


@given(
    n=st.integers(3, 20),
    lower=st.integers(0, 4),
    upper=st.integers(0, 4),
    seed=st.integers(0, 2 ** 16),
)
@settings(max_examples=60, deadline=None)
def test_dense_roundtrip(n, lower, upper, seed):
    m = random_banded_dense(rng(seed), n, lower, upper, dominant=False)
    banded = BandedMatrix.from_dense(m, lower, upper)
    assert np.array_equal(banded.to_dense(), m)


def test_matvec_matches_dense():
    gen = rng(1)
    for _ in range(20):
        n = int(gen.integers(3, 30))
        lower = int(gen.integers(0, 4))
        upper = int(gen.integers(0, 4))
        m = random_banded_dense(gen, n, lower, upper, dominant=False)
        banded = BandedMatrix.from_dense(m, lower, upper)
        x = gen.standard_normal(n)
        assert np.allclose(banded.matvec(x), m @ x, rtol=1.0e-13, atol=1.0e-13)


def test_matvec_multiple_columns():
    gen = rng(2)
    m = random_banded_dense(gen, 12, 2, 3, dominant=False)
    banded = BandedMatrix.from_dense(m, 2, 3)
    x = gen.standard_normal((12, 5))
    assert np.allclose(banded.matvec(x), m @ x, rtol=1.0e-13, atol=1.0e-13)


def test_solve_matches_dense():
    gen = rng(3)
    for _ in range(10):
        n = int(gen.integers(4, 40))
        lower = int(gen.integers(1, 4))
        upper = int(gen.integers(1, 4))
        m = random_banded_dense(gen, n, lower, upper)
        banded = BandedMatrix.from_dense(m, lower, upper)
        b = gen.standard_normal(n)
        x = banded_solve(banded, b)
        assert np.allclose(m @ x, b, rtol=1.0e-10, atol=1.0e-10)


def test_solve_multiple_rhs():
    gen = rng(4)
    m = random_banded_dense(gen, 15, 2, 2)
    banded = BandedMatrix.from_dense(m, 2, 2)
    b = gen.standard_normal((15, 3))
    x = banded_solve(banded, b)
    assert np.allclose(m @ x, b, rtol=1.0e-10, atol=1.0e-10)


def test_cholesky_matches_dense_solve():
    gen = rng(5)
    for _ in range(10):
        n = int(gen.integers(4, 40))
        half = int(gen.integers(1, 3))
        m = random_banded_dense(gen, n, half, half, dominant=False)
        spd = m @ m.T + n * np.eye(n)
        spd_banded = BandedMatrix.from_dense(spd, 2 * half, 2 * half)
        factor = cholesky_factor(spd_banded)
        b = gen.standard_normal(n)
        assert np.allclose(factor.solve(b), np.linalg.solve(spd, b),
                           rtol=1.0e-9, atol=1.0e-10)


def test_cholesky_factor_reusable():
    gen = rng(6)
    m = random_banded_dense(gen, 10, 1, 1, dominant=False)
    spd = m @ m.T + 10.0 * np.eye(10)
    factor = cholesky_factor(BandedMatrix.from_dense(spd, 2, 2))
    b1 = gen.standard_normal(10)
    b2 = gen.standard_normal((10, 4))
    assert np.allclose(spd @ factor.solve(b1), b1, rtol=1.0e-9, atol=1.0e-10)
    assert np.allclose(spd @ factor.solve(b2), b2, rtol=1.0e-9, atol=1.0e-10)


def test_cholesky_requires_symmetric_bandwidth():
    banded = BandedMatrix(np.ones((4, 6)), lower=1, upper=2)
    with pytest.raises(ValueError):
        cholesky_factor(banded)


def test_band_shape_validated():
    with pytest.raises(ValueError):
        BandedMatrix(np.ones((3, 6)), lower=1, upper=2)
