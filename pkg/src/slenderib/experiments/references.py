"""Closed-form drag references for a prolate ellipsoid.

Two independent references are used by the drag experiment: the exact
Oberbeck formula, and the local slender-body mobility whose error is
O(log(beta)/beta^2) for an ellipsoidal shape. Lengths in um, viscosity
in pN s/um^2, forces in pN.
"""

from __future__ import annotations

import math

import numpy as np

DIRECTIONS = ("parallel", "perpendicular")


def _check_beta(beta: float) -> None:
    if beta <= 1.0:
        raise ValueError("aspect ratio beta must exceed 1")


def oberbeck_shape_factor(beta: float, direction: str) -> float:
    """Shape factor K in F/U = 6 pi mu a K for a prolate ellipsoid."""
    _check_beta(beta)
    e2 = beta * beta - 1.0
    root = math.sqrt(e2)
    logterm = math.log(beta + root)
    if direction == "parallel":
        return (4.0 / 3.0) * e2 / ((2.0 * beta * beta - 1.0) / root * logterm - beta)
    if direction == "perpendicular":
        return (8.0 / 3.0) * e2 / ((2.0 * beta * beta - 3.0) / root * logterm + beta)
    raise ValueError(f"direction must be one of {DIRECTIONS}")


def oberbeck_drag(a: float, beta: float, mu: float, direction: str) -> float:
    """Total drag ratio F/U for rigid translation along the given axis."""
    if a <= 0.0 or mu <= 0.0:
        raise ValueError("a and mu must be positive")
    return 6.0 * math.pi * mu * a * oberbeck_shape_factor(beta, direction)


def sbt_reference_velocity(f, tangent, beta: float, mu: float):
    """Local slender-body velocity from a force density f (pN/um).

    U = (1/(8 pi mu)) [ -log(e/(2 beta)^2) (I + t t^T) + 2 (I - t t^T) ] f,
    the straight-filament form where the nonlocal integral vanishes.
    """
    _check_beta(beta)
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    f = np.asarray(f, dtype=float)
    t = np.asarray(tangent, dtype=float)
    t = t / np.linalg.norm(t)
    lam = -math.log(math.e / (2.0 * beta) ** 2)
    ft = np.dot(f, t)
    par = ft * t
    perp = f - par
    return (lam * (f + par) + 2.0 * perp) / (8.0 * math.pi * mu)


def sbt_drag_ratio(b: float, beta: float, mu: float, direction: str) -> float:
    """F/U for a uniformly forced straight filament of length 2b."""
    if b <= 0.0:
        raise ValueError("b must be positive")
    fhat = np.array([1.0, 0.0, 0.0])
    tangent = fhat if direction == "parallel" else np.array([0.0, 1.0, 0.0])
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    # total force 1 spread over length 2b
    u = sbt_reference_velocity(fhat / (2.0 * b), tangent, beta, mu)
    return 1.0 / float(np.dot(u, fhat))
