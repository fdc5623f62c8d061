"""Force spreading and velocity interpolation with the 4-point kernel.

Markers talk to the grid through the regularized delta function
delta_h(x) = phi4(x/h) phi4(y/h) phi4(z/h) / h^3. Spreading scatters each
marker force onto its 4x4x4 node stencil; interpolation is the exact
adjoint gather, so that <spread(F), u> h^3 = <F, interpolate(u)> for any
force set and field. Marker coordinates are reduced into the primary box
before the stencil is formed, which makes both operators exactly
periodic.

Two interchangeable backends implement the hot loops: a compiled
extension (built from _kernels.pyx) and a pure NumPy fallback. The
compiled one is chosen at import when available; set
SLENDERIB_PURE_PYTHON=1 to force the fallback. They are designed to be
bit-identical, and spreading always accumulates in marker order so that
results do not depend on thread count.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from .stokes import Grid, VectorField

if os.environ.get("SLENDERIB_PURE_PYTHON", "0") not in ("", "0"):
    _impl = _kernels_py
    _BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        _BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        _BACKEND = "python"


def kernel_backend() -> str:
    """Name of the active kernel backend: "compiled" or "python"."""
    return _BACKEND


def phi4(r) -> np.ndarray:
    """Four-point kernel phi(r): support (-2, 2), unit sums on integer shifts."""
    return _kernels_py.phi4(r)


def wrap_positions(grid: Grid, markers: np.ndarray) -> np.ndarray:
    """Reduce marker coordinates into the primary box [-L/2, L/2) per axis."""
    markers = np.asarray(markers, dtype=np.float64)
    wrapped = np.empty_like(markers)
    for axis, length in enumerate(grid.lengths):
        half = 0.5 * length
        w = np.fmod(markers[:, axis], length)
        w = np.where(w < -half, w + length, w)
        w = np.where(w >= half, w - length, w)
        wrapped[:, axis] = w
    return wrapped


def _checked_markers(grid: Grid, markers: np.ndarray) -> np.ndarray:
    markers = np.ascontiguousarray(markers, dtype=np.float64)
    if markers.ndim != 2 or markers.shape[1] != 3:
        raise ValueError("markers must have shape (M, 3)")
    if markers.size and not np.all(np.isfinite(markers)):
        raise ValueError("marker positions must be finite")
    return np.ascontiguousarray(wrap_positions(grid, markers))


def spread(grid: Grid, markers: np.ndarray, forces: np.ndarray) -> VectorField:
    """Spread marker forces (pN) to a grid force density field (pN/um^3)."""
    xw = _checked_markers(grid, markers)
    forces = np.ascontiguousarray(forces, dtype=np.float64)
    if forces.shape != xw.shape:
        raise ValueError("forces must match markers in shape")
    out = np.zeros((3, grid.nx * grid.ny * grid.nz))
    inv_h3 = 1.0 / grid.cell_volume
    _impl.spread_kernel(
        xw, forces, grid.nx, grid.ny, grid.nz, grid.origin, grid.h, inv_h3, out
    )
    return VectorField(grid, out.reshape((3,) + grid.shape))


def interpolate(grid: Grid, u: VectorField, markers: np.ndarray) -> np.ndarray:
    """Interpolate a grid field to the markers; returns (M, 3) values."""
    if u.grid != grid:
        raise ValueError("field was built on a different grid")
    xw = _checked_markers(grid, markers)
    u_flat = np.ascontiguousarray(u.data.reshape(3, -1))
    out = np.zeros((xw.shape[0], 3))
    _impl.interpolate_kernel(
        u_flat, xw, grid.nx, grid.ny, grid.nz, grid.origin, grid.h, out
    )
    return out
