# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled spreading/interpolation kernels.

Bit-compatibility with _kernels_py requires identical expression trees
and accumulation order; the build also disables FMA contraction so that
w*u + acc rounds the same way in both backends.
"""

from libc.math cimport floor, sqrt


cdef inline double phi4_scalar(double r) noexcept nogil:
    cdef double a = r if r >= 0.0 else -r
    if a <= 1.0:
        return 0.125 * (3.0 - 2.0 * a + sqrt(1.0 + 4.0 * a - 4.0 * a * a))
    if a < 2.0:
        return 0.125 * (5.0 - 2.0 * a - sqrt(-7.0 + 12.0 * a - 4.0 * a * a))
    return 0.0


cdef inline void axis_stencil(double x, double origin, double h, Py_ssize_t n,
                              double* w, Py_ssize_t* nodes) noexcept nogil:
    cdef double g = (x - origin) / h
    cdef double base = floor(g)
    cdef Py_ssize_t b = <Py_ssize_t>base
    cdef Py_ssize_t l, node
    for l in range(4):
        w[l] = phi4_scalar(g - (base - 1.0 + <double>l))
        node = (b - 1 + l) % n
        if node < 0:
            node += n
        nodes[l] = node


def spread_kernel(double[:, ::1] xw, double[:, ::1] forces,
                  Py_ssize_t nx, Py_ssize_t ny, Py_ssize_t nz,
                  double[::1] origin, double h, double inv_h3,
                  double[:, ::1] out):
    """Scatter marker forces onto the flat (3, nx*ny*nz) array ``out``."""
    cdef Py_ssize_t m = xw.shape[0]
    cdef Py_ssize_t p, i, j, k, node, rowbase
    cdef double wx[4]
    cdef double wy[4]
    cdef double wz[4]
    cdef Py_ssize_t ix[4]
    cdef Py_ssize_t iy[4]
    cdef Py_ssize_t iz[4]
    cdef double f0, f1, f2, cxy, c
    with nogil:
        for p in range(m):
            axis_stencil(xw[p, 0], origin[0], h, nx, wx, ix)
            axis_stencil(xw[p, 1], origin[1], h, ny, wy, iy)
            axis_stencil(xw[p, 2], origin[2], h, nz, wz, iz)
            f0 = forces[p, 0]
            f1 = forces[p, 1]
            f2 = forces[p, 2]
            for i in range(4):
                for j in range(4):
                    cxy = wx[i] * wy[j]
                    rowbase = (ix[i] * ny + iy[j]) * nz
                    for k in range(4):
                        c = (cxy * wz[k]) * inv_h3
                        node = rowbase + iz[k]
                        out[0, node] += f0 * c
                        out[1, node] += f1 * c
                        out[2, node] += f2 * c


def interpolate_kernel(double[:, ::1] u_flat, double[:, ::1] xw,
                       Py_ssize_t nx, Py_ssize_t ny, Py_ssize_t nz,
                       double[::1] origin, double h,
                       double[:, ::1] out):
    """Gather grid values of ``u_flat`` (3, nx*ny*nz) at markers into ``out``."""
    cdef Py_ssize_t m = xw.shape[0]
    cdef Py_ssize_t p, i, j, k, node, rowbase
    cdef double wx[4]
    cdef double wy[4]
    cdef double wz[4]
    cdef Py_ssize_t ix[4]
    cdef Py_ssize_t iy[4]
    cdef Py_ssize_t iz[4]
    cdef double cxy, c, acc0, acc1, acc2
    with nogil:
        for p in range(m):
            axis_stencil(xw[p, 0], origin[0], h, nx, wx, ix)
            axis_stencil(xw[p, 1], origin[1], h, ny, wy, iy)
            axis_stencil(xw[p, 2], origin[2], h, nz, wz, iz)
            acc0 = 0.0
            acc1 = 0.0
            acc2 = 0.0
            for i in range(4):
                for j in range(4):
                    cxy = wx[i] * wy[j]
                    rowbase = (ix[i] * ny + iy[j]) * nz
                    for k in range(4):
                        c = cxy * wz[k]
                        node = rowbase + iz[k]
                        acc0 += u_flat[0, node] * c
                        acc1 += u_flat[1, node] * c
                        acc2 += u_flat[2, node] * c
            out[p, 0] = acc0
            out[p, 1] = acc1
            out[p, 2] = acc2
