"""Discrete elastic fibers: energies, forces, and force derivatives.

A fiber is an open chain of N markers with rest spacing ds. Its elastic
content is a stretching energy over segments,

    E_s = (Ks/2) sum_k (|X_{k+1} - X_k|/ds - 1)^2 ds,

and a bending energy over interior second differences
D_k = X_{k+1} - 2 X_k + X_{k-1},

    E_b = (Kb/2) sum_k |D_k|^2 / ds^p.

The physical discretization of curvature energy has p = 3 ("curvature"
form, the default); p = 1 ("difference" form) is also available, mostly
as a cross-check of hand-evaluated unit examples where ds = 1 makes the
two coincide. Forces are exact negative gradients of these sums, so free
ends need no ghost markers: the boundary terms simply drop out of the
sums. Bending is linear, F_b = B X per coordinate, with B symmetric
negative semidefinite and pentadiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .banded import BandedMatrix

BENDING_FORMS = ("curvature", "difference")


@dataclass
class Fiber:
    """Ordered marker chain with elastic moduli and per-marker drag.

    X: (N, 3) marker positions (um); ds: rest spacing (um); Ks: stretching
    stiffness (pN); Kb: bending stiffness (pN*um^2); xi: drag coefficient
    per marker ((um/s)/pN), zero meaning no local drag correction.
    """

    X: np.ndarray
    ds: float
    Ks: float
    Kb: float
    xi: np.ndarray
    bending_form: str = "curvature"

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        if self.X.ndim != 2 or self.X.shape[1] != 3 or self.X.shape[0] < 3:
            raise ValueError("fiber needs at least 3 markers of shape (N, 3)")
        if self.ds <= 0.0:
            raise ValueError("rest spacing must be positive")
        if self.Ks < 0.0 or self.Kb < 0.0:
            raise ValueError("elastic moduli must be nonnegative")
        self.xi = np.broadcast_to(
            np.asarray(self.xi, dtype=np.float64), (self.X.shape[0],)
        ).copy()
        if np.any(self.xi < 0.0):
            raise ValueError("drag coefficients must be nonnegative")
        if self.bending_form not in BENDING_FORMS:
            raise ValueError(f"bending_form must be one of {BENDING_FORMS}")

    @property
    def n_markers(self) -> int:
        return self.X.shape[0]

    def with_positions(self, X: np.ndarray) -> "Fiber":
        return replace(self, X=X)


def _bending_scale(ds: float, Kb: float, form: str) -> float:
    if form == "curvature":
        return Kb / ds**3
    if form == "difference":
        return Kb / ds
    raise ValueError(f"bending_form must be one of {BENDING_FORMS}")


def segment_geometry(X: np.ndarray):
    """Segment lengths R_k and unit tangents tau_k (both length N-1)."""
    d = X[1:] - X[:-1]
    r = np.linalg.norm(d, axis=1)
    if np.any(r == 0.0):
        raise ValueError("coincident adjacent markers")
    return r, d / r[:, None]


def tension(r, ds: float, Ks: float):
    """Segment tension T = Ks (R/ds - 1); linear in the strain."""
    return Ks * (np.asarray(r) / ds - 1.0)


def stretch_energy(X: np.ndarray, ds: float, Ks: float) -> float:
    r = np.linalg.norm(X[1:] - X[:-1], axis=1)
    return 0.5 * Ks * float(np.sum((r / ds - 1.0) ** 2)) * ds


def bending_energy(X: np.ndarray, ds: float, Kb: float, form: str = "curvature") -> float:
    d2 = X[2:] - 2.0 * X[1:-1] + X[:-2]
    return 0.5 * _bending_scale(ds, Kb, form) * float(np.sum(d2 * d2))


def stretch_force(X: np.ndarray, ds: float, Ks: float) -> np.ndarray:
    """Tension force -dE_s/dX; telescopes to zero total force."""
    r, tau = segment_geometry(X)
    s = tension(r, ds, Ks)[:, None] * tau
    f = np.zeros_like(X)
    f[:-1] += s
    f[1:] -= s
    return f


def bending_force(X: np.ndarray, ds: float, Kb: float, form: str = "curvature") -> np.ndarray:
    """Bending force -dE_b/dX, the pentadiagonal operator applied to X."""
    d2 = X[2:] - 2.0 * X[1:-1] + X[:-2]
    g = np.zeros_like(X)
    g[:-2] += d2
    g[1:-1] -= 2.0 * d2
    g[2:] += d2
    return -_bending_scale(ds, Kb, form) * g


def elastic_force(fiber: Fiber, X: np.ndarray | None = None) -> np.ndarray:
    """Total marker force F = F_s + F_b for the fiber's parameters."""
    if X is None:
        X = fiber.X
    return stretch_force(X, fiber.ds, fiber.Ks) + bending_force(
        X, fiber.ds, fiber.Kb, fiber.bending_form
    )


def bending_matrix(n: int, ds: float, Kb: float, form: str = "curvature") -> BandedMatrix:
    """Banded B with F_b = B X per coordinate: B = -(Kb/ds^p) A^T A."""
    if n < 3:
        raise ValueError("bending matrix needs at least 3 markers")
    a = np.zeros((n - 2, n))
    idx = np.arange(n - 2)
    a[idx, idx] = 1.0
    a[idx, idx + 1] = -2.0
    a[idx, idx + 2] = 1.0
    b = -_bending_scale(ds, Kb, form) * (a.T @ a)
    return BandedMatrix.from_dense(b, 2, 2)


@dataclass
class BlockTridiagonal:
    """Symmetric block-tridiagonal matrix with 3x3 blocks.

    diag[k] is the (k, k) block; off[k] is the (k, k+1) block, equal to
    the transpose of the (k+1, k) block (here the blocks are themselves
    symmetric, so no transpose is taken in matvec).
    """

    diag: np.ndarray
    off: np.ndarray

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = np.einsum("kab,kb->ka", self.diag, x)
        y[:-1] += np.einsum("kab,kb->ka", self.off, x[1:])
        y[1:] += np.einsum("kab,kb->ka", self.off, x[:-1])
        return y

    def to_dense(self) -> np.ndarray:
        n = self.diag.shape[0]
        m = np.zeros((3 * n, 3 * n))
        for k in range(n):
            m[3 * k : 3 * k + 3, 3 * k : 3 * k + 3] = self.diag[k]
        for k in range(n - 1):
            m[3 * k : 3 * k + 3, 3 * k + 3 : 3 * k + 6] = self.off[k]
            m[3 * k + 3 : 3 * k + 6, 3 * k : 3 * k + 3] = self.off[k]
        return m


def stretch_jacobian(X: np.ndarray, ds: float, Ks: float) -> BlockTridiagonal:
    """dF_s/dX as a block-tridiagonal matrix.

    Per segment the coupling block is T' tau tau^T + (T/R)(I - tau tau^T);
    diagonal blocks follow from the zero-row-sum identity sum_j dF_j/dX_k = 0.
    """
    n = X.shape[0]
    r, tau = segment_geometry(X)
    t = tension(r, ds, Ks)
    tprime = Ks / ds
    outer = np.einsum("ka,kb->kab", tau, tau)
    eye = np.eye(3)
    seg = tprime * outer + (t / r)[:, None, None] * (eye[None, :, :] - outer)
    diag = np.zeros((n, 3, 3))
    diag[:-1] -= seg
    diag[1:] -= seg
    return BlockTridiagonal(diag=diag, off=seg)
