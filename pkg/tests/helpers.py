"""Shared helpers for the test suite."""

import numpy as np

from slenderib.fibers import Fiber


def rng(seed=0):
    return np.random.default_rng(seed)


def random_fiber(gen, n=16, ds=0.05, Ks=10.0, Kb=0.5, xi=1.0,
                 wiggle=0.2, form="curvature"):
    """Fiber with a smooth random shape and well-separated markers.

    The base shape is a straight chain at rest spacing; a low-frequency
    perturbation of relative size `wiggle` keeps segment lengths bounded
    away from zero so finite differences of the forces stay well posed.
    """
    s = ds * np.arange(n)
    X = np.zeros((n, 3))
    X[:, 0] = s
    for axis in range(3):
        amp = wiggle * ds * gen.standard_normal(3)
        for m, a in enumerate(amp, start=1):
            X[:, axis] += a * np.sin(m * np.pi * s / s[-1])
    return Fiber(X=X, ds=ds, Ks=Ks, Kb=Kb, xi=xi, bending_form=form)


def numerical_gradient(f, X, eps=1.0e-6):
    """Central-difference gradient of a scalar function of marker positions."""
    g = np.zeros_like(X)
    flat = X.ravel()
    for i in range(flat.size):
        x0 = flat[i]
        flat[i] = x0 + eps
        fp = f(X)
        flat[i] = x0 - eps
        fm = f(X)
        flat[i] = x0
        g.ravel()[i] = (fp - fm) / (2.0 * eps)
    return g


def numerical_jacobian(f, X, eps=1.0e-7):
    """Central-difference Jacobian of a vector function of marker positions."""
    base = f(X).ravel()
    jac = np.zeros((base.size, X.size))
    flat = X.ravel()
    for i in range(flat.size):
        x0 = flat[i]
        flat[i] = x0 + eps
        fp = f(X).ravel()
        flat[i] = x0 - eps
        fm = f(X).ravel()
        flat[i] = x0
        jac[:, i] = (fp - fm) / (2.0 * eps)
    return jac


def second_difference_dense(n):
    a = np.zeros((n - 2, n))
    idx = np.arange(n - 2)
    a[idx, idx] = 1.0
    a[idx, idx + 1] = -2.0
    a[idx, idx + 2] = 1.0
    return a
