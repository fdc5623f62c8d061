"""Spectral solver for Stokes flow on a triply periodic grid.

The grid is uniform with the same spacing h along all three axes; the box
spans [-L/2, L/2) per axis with L = n*h. A body force density f (pN/um^3)
drives the steady Stokes equations

    0 = -grad(p) + mu*lap(u) + f,    div(u) = 0,

which decouple mode by mode in Fourier space. With khat = k/|k| the
solution is the projected inverse Laplacian

    u_hat(k) = (1/(mu*|k|^2)) * (I - khat khat^T) f_hat(k),   k != 0,

applied uniformly to every retained mode. The k = 0 mode of u is set to
zero: dropping it removes the mean of f (the periodic problem is only
solvable for mean-free forcing) and pins the arbitrary mean flow at zero.

Units are microns, seconds, picoNewtons; 1 Pa*s equals 1 pN*s/um^2, so
water-like viscosities are O(1) numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft


@dataclass(frozen=True)
class Grid:
    """Uniform periodic box with spacing ``h`` and viscosity ``mu``."""

    nx: int
    ny: int
    nz: int
    h: float
    mu: float = 1.0

    def __post_init__(self):
        if min(self.nx, self.ny, self.nz) < 3:
            raise ValueError("grid needs at least 3 nodes per axis")
        if self.h <= 0.0:
            raise ValueError("grid spacing must be positive")
        if self.mu <= 0.0:
            raise ValueError("viscosity must be positive")

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def lengths(self) -> tuple[float, float, float]:
        return (self.nx * self.h, self.ny * self.h, self.nz * self.h)

    @property
    def cell_volume(self) -> float:
        return self.h * self.h * self.h

    @cached_property
    def origin(self) -> np.ndarray:
        """Coordinate of node (0, 0, 0); the box is centered on zero."""
        return np.array([-0.5 * l for l in self.lengths])

    def axis_coords(self, axis: int) -> np.ndarray:
        """Node coordinates along one axis."""
        n = self.shape[axis]
        return self.origin[axis] + self.h * np.arange(n)

    @cached_property
    def _wavenumbers(self):
        # rfft layout: full frequencies on x and y, half spectrum on z.
        kx = 2.0 * np.pi * scipy.fft.fftfreq(self.nx, d=self.h)
        ky = 2.0 * np.pi * scipy.fft.fftfreq(self.ny, d=self.h)
        kz = 2.0 * np.pi * scipy.fft.rfftfreq(self.nz, d=self.h)
        return (
            kx[:, None, None],
            ky[None, :, None],
            kz[None, None, :],
        )

    @cached_property
    def _inverse_k2(self):
        """(1/|k|^2, 1/(mu*|k|^2)) with the k = 0 entries set to zero."""
        kx, ky, kz = self._wavenumbers
        k2 = kx * kx + ky * ky + kz * kz
        inv_k2 = np.zeros_like(k2)
        nonzero = k2 > 0.0
        np.divide(1.0, k2, out=inv_k2, where=nonzero)
        return inv_k2, inv_k2 / self.mu


@dataclass
class VectorField:
    """Three-component real field sampled on the nodes of a :class:`Grid`.

    ``data`` has shape (3, nx, ny, nz) with component index first.
    """

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.shape != (3,) + self.grid.shape:
            raise ValueError(
                f"field shape {self.data.shape} does not match grid {(3,) + self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls(grid, np.zeros((3,) + grid.shape))

    def copy(self) -> "VectorField":
        return VectorField(self.grid, self.data.copy())


def solve_stokes(grid: Grid, f: VectorField) -> VectorField:
    """Velocity field of periodic Stokes flow driven by force density ``f``.

    The zero mode of the force is discarded, which plays the role of a
    uniform compensating body force: only the mean-free part of f can
    drive a periodic flow. The returned velocity has zero mean.
    """
    if f.grid != grid:
        raise ValueError("force field was built on a different grid")
    fh = scipy.fft.rfftn(f.data, axes=(1, 2, 3))
    kx, ky, kz = grid._wavenumbers
    inv_k2, inv_mu_k2 = grid._inverse_k2
    kdotf = kx * fh[0] + ky * fh[1] + kz * fh[2]
    kdotf *= inv_k2
    uh = np.empty_like(fh)
    uh[0] = (fh[0] - kx * kdotf) * inv_mu_k2
    uh[1] = (fh[1] - ky * kdotf) * inv_mu_k2
    uh[2] = (fh[2] - kz * kdotf) * inv_mu_k2
    u = scipy.fft.irfftn(uh, s=grid.shape, axes=(1, 2, 3))
    return VectorField(grid, u)


def divergence_spectral(grid: Grid, u: VectorField) -> np.ndarray:
    """Spectral divergence of a velocity field (diagnostic).

    The derivative multiplier ik is zeroed on unpaired Nyquist modes,
    where an odd operator has no consistent real-signal action.
    """
    if u.grid != grid:
        raise ValueError("velocity field was built on a different grid")
    uh = scipy.fft.rfftn(u.data, axes=(1, 2, 3))
    kx, ky, kz = (k.copy() for k in grid._wavenumbers)
    if grid.nx % 2 == 0:
        kx[grid.nx // 2] = 0.0
    if grid.ny % 2 == 0:
        ky[:, grid.ny // 2] = 0.0
    if grid.nz % 2 == 0:
        kz[..., grid.nz // 2] = 0.0
    dh = 1j * (kx * uh[0] + ky * uh[1] + kz * uh[2])
    return scipy.fft.irfftn(dh, s=grid.shape)
