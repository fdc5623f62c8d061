"""Pure NumPy spreading/interpolation kernels.

This is the fallback used when the compiled extension is unavailable. It
mirrors _kernels.pyx expression for expression, and accumulates with
np.add.at in the compiled loops' exact order (marker-major, then x/y/z
stencil offsets), so the two backends produce bit-identical output.
"""

import numpy as np

_OFFSETS = np.arange(4, dtype=np.int64)
_OFFSETS_F = np.arange(4, dtype=np.float64)


def phi4(r):
    """Four-point regularized delta kernel, one axis, evaluated at r."""
    r = np.asarray(r, dtype=np.float64)
    a = np.abs(r)
    out = np.zeros_like(a)
    near = a <= 1.0
    far = (a > 1.0) & (a < 2.0)
    an = a[near]
    out[near] = 0.125 * (3.0 - 2.0 * an + np.sqrt(1.0 + 4.0 * an - 4.0 * an * an))
    af = a[far]
    out[far] = 0.125 * (5.0 - 2.0 * af - np.sqrt(-7.0 + 12.0 * af - 4.0 * af * af))
    return out


def _stencil(xw, nx, ny, nz, origin, h):
    """Per-axis stencil nodes and delta weights for wrapped markers xw."""
    g = (xw - origin[None, :]) / h
    base = np.floor(g)
    r = g[:, :, None] - (base[:, :, None] - 1.0 + _OFFSETS_F)
    w = phi4(r)
    n = np.array([nx, ny, nz], dtype=np.int64)
    idx = (base.astype(np.int64)[:, :, None] - 1 + _OFFSETS) % n[None, :, None]
    return idx, w


def _flat_nodes(idx, ny, nz):
    return (
        (idx[:, 0, :, None, None] * ny + idx[:, 1, None, :, None]) * nz
        + idx[:, 2, None, None, :]
    )


def spread_kernel(xw, forces, nx, ny, nz, origin, h, inv_h3, out):
    """Scatter marker forces onto the flat (3, nx*ny*nz) array ``out``."""
    m = xw.shape[0]
    if m == 0:
        return
    idx, w = _stencil(xw, nx, ny, nz, origin, h)
    w3 = (w[:, 0, :, None, None] * w[:, 1, None, :, None]) * w[:, 2, None, None, :]
    c = w3 * inv_h3
    flat = _flat_nodes(idx, ny, nz).ravel()
    cflat = c.reshape(m, 64)
    for d in range(3):
        vals = forces[:, d, None] * cflat
        np.add.at(out[d], flat, vals.ravel())


def interpolate_kernel(u_flat, xw, nx, ny, nz, origin, h, out):
    """Gather grid values of ``u_flat`` (3, nx*ny*nz) at markers into ``out``."""
    m = xw.shape[0]
    if m == 0:
        return
    idx, w = _stencil(xw, nx, ny, nz, origin, h)
    w3 = (w[:, 0, :, None, None] * w[:, 1, None, :, None]) * w[:, 2, None, None, :]
    flat = _flat_nodes(idx, ny, nz).reshape(m, 64)
    ids = np.repeat(np.arange(m), 64)
    wflat = w3.reshape(m, 64)
    for d in range(3):
        vals = u_flat[d][flat] * wflat
        np.add.at(out[:, d], ids, vals.ravel())
