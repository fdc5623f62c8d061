"""Experiment drivers reproducing the validation and application studies.

Each driver is a pure function of (RunConfig, seed embedded therein)
returning an ExperimentReport; repeated runs are bit-identical.
"""

from .calibration import calibrate_hydrodynamic_radius, run_calibrate
from .ellipsoid import (
    ellipsoid_drag_experiment,
    extrapolate_to_infinity,
    run_ellipsoid_drag,
)
from .orientation import OrientationDistribution, sample_orientation
from .references import (
    oberbeck_drag,
    oberbeck_shape_factor,
    sbt_drag_ratio,
    sbt_reference_velocity,
)
from .relaxation import (
    max_relative_error,
    run_relax,
    two_fiber_relaxation,
)
from .report import ExperimentReport, Series, write_series_csv, write_summary_json
from .shear import classify_mode, run_shear, shear_fiber_experiment
from .stokescheck import analytic_mode_error, run_stokes_check
from .suspension import run_suspension, suspension_viscosity_experiment

DRIVERS = {
    "calibrate": run_calibrate,
    "ellipsoid-drag": run_ellipsoid_drag,
    "relax": run_relax,
    "shear": run_shear,
    "suspension": run_suspension,
    "stokes-check": run_stokes_check,
}

__all__ = [
    "DRIVERS",
    "ExperimentReport",
    "OrientationDistribution",
    "Series",
    "analytic_mode_error",
    "calibrate_hydrodynamic_radius",
    "classify_mode",
    "ellipsoid_drag_experiment",
    "extrapolate_to_infinity",
    "max_relative_error",
    "oberbeck_drag",
    "oberbeck_shape_factor",
    "run_calibrate",
    "run_ellipsoid_drag",
    "run_relax",
    "run_shear",
    "run_stokes_check",
    "run_suspension",
    "sample_orientation",
    "sbt_drag_ratio",
    "sbt_reference_velocity",
    "shear_fiber_experiment",
    "suspension_viscosity_experiment",
    "two_fiber_relaxation",
    "write_series_csv",
    "write_summary_json",
]
