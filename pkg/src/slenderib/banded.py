"""Banded matrices and direct solvers for the per-fiber implicit systems.

Matrices are stored in LAPACK diagonal-ordered form: ``ab[u + i - j, j]``
holds entry (i, j) for a matrix with ``l`` sub- and ``u`` superdiagonals.
Entries outside the band are kept at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass
class BandedMatrix:
    ab: np.ndarray
    lower: int
    upper: int

    def __post_init__(self):
        self.ab = np.asarray(self.ab, dtype=np.float64)
        if self.ab.ndim != 2 or self.ab.shape[0] != self.lower + self.upper + 1:
            raise ValueError("ab must have lower + upper + 1 rows")

    @property
    def n(self) -> int:
        return self.ab.shape[1]

    @classmethod
    def from_dense(cls, m: np.ndarray, lower: int, upper: int) -> "BandedMatrix":
        m = np.asarray(m, dtype=np.float64)
        n = m.shape[0]
        ab = np.zeros((lower + upper + 1, n))
        for off in range(max(-lower, 1 - n), min(upper, n - 1) + 1):
            diag = np.diagonal(m, offset=off)
            if off >= 0:
                ab[upper - off, off:] = diag
            else:
                ab[upper - off, : n + off] = diag
        return cls(ab, lower, upper)

    def to_dense(self) -> np.ndarray:
        n = self.n
        m = np.zeros((n, n))
        for off in range(max(-self.lower, 1 - n), min(self.upper, n - 1) + 1):
            if off >= 0:
                idx = np.arange(n - off)
                m[idx, idx + off] = self.ab[self.upper - off, off:]
            else:
                idx = np.arange(n + off)
                m[idx - off, idx] = self.ab[self.upper - off, : n + off]
        return m

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Product with a vector, or with each column when x is (n, k)."""
        x = np.asarray(x, dtype=np.float64)
        y = np.zeros_like(x)
        n = self.n
        extra = (1,) * (x.ndim - 1)
        for off in range(max(-self.lower, 1 - n), min(self.upper, n - 1) + 1):
            band = self.ab[self.upper - off]
            if off >= 0:
                y[: n - off] += band[off:].reshape(-1, *extra) * x[off:]
            else:
                y[-off:] += band[: n + off].reshape(-1, *extra) * x[: n + off]
        return y


def banded_solve(matrix: BandedMatrix, rhs: np.ndarray) -> np.ndarray:
    """Direct solve of a general banded system; raises on singular input."""
    return scipy.linalg.solve_banded(
        (matrix.lower, matrix.upper), matrix.ab, rhs, check_finite=False
    )


@dataclass
class CholeskyBandedFactor:
    """Prefactorized SPD banded matrix, reusable across right-hand sides."""

    cb: np.ndarray

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return scipy.linalg.cho_solve_banded((self.cb, False), rhs, check_finite=False)


def cholesky_factor(matrix: BandedMatrix) -> CholeskyBandedFactor:
    """Cholesky factorization of a symmetric positive definite banded matrix."""
    if matrix.lower != matrix.upper:
        raise ValueError("symmetric banded matrix must have lower == upper")
    upper_rows = np.ascontiguousarray(matrix.ab[: matrix.upper + 1])
    return CholeskyBandedFactor(scipy.linalg.cholesky_banded(upper_rows, check_finite=False))
