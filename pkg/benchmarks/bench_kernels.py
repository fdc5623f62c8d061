#!/usr/bin/env python3
"""Benchmark the compiled spreading/interpolation kernels vs the NumPy
fallback, and check they produce bit-identical output.

Usage: python3 benchmarks/bench_kernels.py [--markers 4096] [--n 64]
"""

import argparse
import time

import numpy as np

from slenderib import _kernels_py
from slenderib.interaction import kernel_backend
from slenderib.stokes import Grid

try:
    from slenderib import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def run_backend(mod, grid, markers, forces, u_flat, repeats):
    out_spread = np.zeros((3, grid.nx * grid.ny * grid.nz))
    out_interp = np.zeros_like(markers)
    inv_h3 = 1.0 / grid.cell_volume
    best_spread = best_interp = float("inf")
    for _ in range(repeats):
        out_spread[:] = 0.0
        t0 = time.perf_counter()
        mod.spread_kernel(markers, forces, grid.nx, grid.ny, grid.nz,
                          grid.origin, grid.h, inv_h3, out_spread)
        best_spread = min(best_spread, time.perf_counter() - t0)
        out_interp[:] = 0.0
        t0 = time.perf_counter()
        mod.interpolate_kernel(u_flat, markers, grid.nx, grid.ny, grid.nz,
                               grid.origin, grid.h, out_interp)
        best_interp = min(best_interp, time.perf_counter() - t0)
    return best_spread, best_interp, out_spread, out_interp


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--markers", type=int, default=4096)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = Grid(args.n, args.n, args.n, 1.0 / args.n)
    rng = np.random.default_rng(args.seed)
    markers = rng.uniform(-0.5, 0.5, size=(args.markers, 3))
    forces = rng.standard_normal((args.markers, 3))
    u_flat = np.ascontiguousarray(
        rng.standard_normal((3, args.n ** 3))
    )

    print(f"active backend: {kernel_backend()}")
    print(f"{args.markers} markers on a {args.n}^3 grid, "
          f"best of {args.repeats}")

    py_s, py_i, py_out_s, py_out_i = run_backend(
        _kernels_py, grid, markers, forces, u_flat, args.repeats
    )
    print(f"python  spread {py_s * 1e3:8.2f} ms   interp {py_i * 1e3:8.2f} ms")

    if _kernels_c is None:
        print("compiled kernels unavailable; build the extension to compare")
        return

    c_s, c_i, c_out_s, c_out_i = run_backend(
        _kernels_c, grid, markers, forces, u_flat, args.repeats
    )
    print(f"cython  spread {c_s * 1e3:8.2f} ms   interp {c_i * 1e3:8.2f} ms")
    print(f"speedup spread {py_s / c_s:8.1f} x    interp {py_i / c_i:8.1f} x")

    same_s = np.array_equal(py_out_s, c_out_s)
    same_i = np.array_equal(py_out_i, c_out_i)
    print(f"bit-identical outputs: spread {same_s}, interp {same_i}")
    if not (same_s and same_i):
        raise SystemExit("backend outputs differ")


if __name__ == "__main__":
    main()
