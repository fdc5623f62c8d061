"""Periodic-Stokes immersed boundary solver for slender elastic fibers.

The solver couples a coarse spectral Stokes grid to Lagrangian fiber
markers through regularized-delta spreading/interpolation, and corrects
each marker's velocity with a local Stokes drag term so that markers
behave as spheres of a prescribed subgrid radius. Explicit and
semi-implicit time integrators are provided, along with experiment
drivers (drag calibration, ellipsoid drag, fiber relaxation, shear-flow
dynamics, suspension rheology) and a deterministic CLI.
"""

from .stokes import Grid, VectorField, divergence_spectral, solve_stokes
from .interaction import interpolate, kernel_backend, phi4, spread
from .fibers import Fiber, bending_energy, bending_force, elastic_force, stretch_energy, stretch_force
from .drag import DragParams, correction_radius, hydrodynamic_radius, xi_coefficient
from .stepping import SchemeConfig, SimulationState, grid_velocity, step
from .rng import rng_stream

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "VectorField",
    "solve_stokes",
    "divergence_spectral",
    "spread",
    "interpolate",
    "phi4",
    "kernel_backend",
    "Fiber",
    "stretch_energy",
    "bending_energy",
    "stretch_force",
    "bending_force",
    "elastic_force",
    "DragParams",
    "hydrodynamic_radius",
    "correction_radius",
    "xi_coefficient",
    "SchemeConfig",
    "SimulationState",
    "grid_velocity",
    "step",
    "rng_stream",
    "__version__",
]
