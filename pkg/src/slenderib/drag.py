"""Local Stokes-drag correction for subgrid fiber radii.

Each immersed marker has an effective hydrodynamic radius R_h ~ 1.33 h on
the grid. To make a marker move like a sphere of a smaller physical
radius R, its mobility is split into the grid part plus a local drag
term,

    1/(6 pi mu R) = 1/(6 pi mu R_h) + 1/(6 pi mu R_c),

so the correction radius is R_c = R_h R / (R_h - R), infinite when
R = R_h (no correction), and the local coefficient is
xi = 1/(6 pi mu R_c). The slender-ellipsoid profile makes R, and hence
xi, a function of arclength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_CH = 1.33


def hydrodynamic_radius(h: float, c_h: float = DEFAULT_CH) -> float:
    """Effective radius of a single marker on a grid of spacing h."""
    return c_h * h


def correction_radius(r_h: float, r_phys) -> np.ndarray | float:
    """Radius of the local drag term; inf when r_phys == r_h.

    Values r_phys > r_h are rejected: the correction can only shrink the
    effective radius below the grid's hydrodynamic radius.
    """
    r_phys_arr = np.asarray(r_phys, dtype=np.float64)
    if np.any(r_phys_arr <= 0.0):
        raise ValueError("physical radius must be positive")
    if np.any(r_phys_arr > r_h):
        raise ValueError(
            f"physical radius {np.max(r_phys_arr)} exceeds grid hydrodynamic radius {r_h}"
        )
    with np.errstate(divide="ignore"):
        rc = np.where(
            r_phys_arr == r_h, np.inf, r_h * r_phys_arr / (r_h - r_phys_arr)
        )
    if np.isscalar(r_phys) or r_phys_arr.ndim == 0:
        return float(rc)
    return rc


def xi_coefficient(mu: float, r_c) -> np.ndarray | float:
    """Drag coefficient xi = 1/(6 pi mu R_c); zero for R_c = inf."""
    r_c_arr = np.asarray(r_c, dtype=np.float64)
    if np.any(r_c_arr <= 0.0):
        raise ValueError("correction radius must be positive or infinite")
    out = np.where(np.isinf(r_c_arr), 0.0, 1.0 / (6.0 * math.pi * mu * r_c_arr))
    if np.isscalar(r_c) or r_c_arr.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class DragParams:
    """Radii and drag coefficient for markers of one physical radius."""

    mu: float
    r_phys: float
    r_h: float

    @property
    def r_c(self) -> float:
        return correction_radius(self.r_h, self.r_phys)

    @property
    def xi(self) -> float:
        return xi_coefficient(self.mu, self.r_c)

    @classmethod
    def for_grid(cls, mu: float, r_phys: float, h: float, c_h: float = DEFAULT_CH) -> "DragParams":
        return cls(mu=mu, r_phys=r_phys, r_h=hydrodynamic_radius(h, c_h))


def ellipsoid_radius_profile(s, b: float, beta: float):
    """Centerline radius profile R(s) = sqrt(s(2b - s))/(2 beta).

    s is arclength in the open interval (0, 2b); b the half-major axis;
    beta = b/a the aspect ratio.
    """
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any(s_arr <= 0.0) or np.any(s_arr >= 2.0 * b):
        raise ValueError("arclength must lie strictly inside (0, 2b)")
    if beta <= 1.0:
        raise ValueError("aspect ratio must exceed 1")
    out = np.sqrt(s_arr * (2.0 * b - s_arr)) / (2.0 * beta)
    if np.isscalar(s) or s_arr.ndim == 0:
        return float(out)
    return out


def marker_spacing_policy(mode: str, r_h: float, r_phys: float, length: float):
    """Marker count and spacing for a fiber of the given length.

    hybrid mode spaces markers approximately one hydrodynamic radius
    apart (N = round(L/R_h) markers spanning [0, L]); pure_drag spaces
    them one physical diameter apart, a chain of touching spheres.
    """
    if mode == "hybrid":
        target = r_h
    elif mode == "pure_drag":
        target = 2.0 * r_phys
    else:
        raise ValueError("mode must be 'hybrid' or 'pure_drag'")
    n = int(round(length / target))
    if n < 3:
        raise ValueError("fiber too short for the requested spacing")
    return n, length / (n - 1)
