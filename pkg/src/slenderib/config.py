"""Run configuration for the experiment drivers.

Each experiment has a schema of typed parameters with defaults taken
from the validation studies this package reproduces. Configs come from
JSON documents and/or CLI flags; unknown keys are rejected and every
parameter is validated before any compute starts. Grid spacings may be
given as exact fraction strings ("1/64"), which is how such studies
usually quote them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .drag import hydrodynamic_radius
from .stepping import SCHEMES


class ConfigError(ValueError):
    """Invalid or malformed run configuration."""


def parse_spacing(value) -> float:
    """Grid spacing from a number or an exact fraction string like "1/64"."""
    if isinstance(value, str):
        try:
            result = float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse grid spacing {value!r}") from exc
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        result = float(value)
    else:
        raise ConfigError(f"cannot parse grid spacing {value!r}")
    if result <= 0.0:
        raise ConfigError("grid spacing must be positive")
    return result


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # "int" | "float" | "spacing" | "choice" | "float_list"
    default: object
    help: str = ""
    choices: tuple = ()
    positive: bool = False


def _coerce(param: Param, value):
    """Validate one raw value and return its canonical stored form."""
    name = param.name
    if param.kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer")
        out = int(value)
        if param.positive and out <= 0:
            raise ConfigError(f"{name} must be positive")
        return out
    if param.kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number")
        out = float(value)
        if param.positive and out <= 0.0:
            raise ConfigError(f"{name} must be positive")
        return out
    if param.kind == "spacing":
        parse_spacing(value)  # raises on anything unusable
        return value if isinstance(value, str) else float(value)
    if param.kind == "choice":
        if value not in param.choices:
            raise ConfigError(f"{name} must be one of {param.choices}")
        return value
    if param.kind == "float_list":
        if isinstance(value, str):
            parts = [p for p in value.split(",") if p.strip()]
            try:
                value = [float(p) for p in parts]
            except ValueError as exc:
                raise ConfigError(f"{name} must be a comma-separated list") from exc
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{name} must be a non-empty list of numbers")
        out = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{name} must contain only numbers")
            if param.positive and v <= 0:
                raise ConfigError(f"{name} entries must be positive")
            out.append(float(v))
        return out
    raise AssertionError(f"unknown parameter kind {param.kind}")


_MODES = ("hybrid", "plain", "pure_drag")
_DIRECTIONS = ("parallel", "perpendicular")

SCHEMAS: dict[str, tuple[Param, ...]] = {
    "calibrate": (
        Param("h", "spacing", "1/64", "grid spacing of the unit box"),
        Param("mu", "float", 1.0, "fluid viscosity", positive=True),
        Param("dt", "float", 1.0e-3, "timestep", positive=True),
        Param("n_steps", "int", 500, "number of advected steps", positive=True),
    ),
    "ellipsoid-drag": (
        Param("h", "spacing", "1/32", "grid spacing"),
        Param("box_sizes", "float_list", [1.0, 2.0, 4.0],
              "periodic box edge lengths used for the 1/L extrapolation",
              positive=True),
        Param("direction", "choice", "parallel", "force direction",
              choices=_DIRECTIONS),
        Param("mu", "float", 1.0, "fluid viscosity", positive=True),
        Param("a", "float", 1.33 / 64, "ellipsoid half-minor axis", positive=True),
        Param("b", "float", 0.5, "ellipsoid half-major axis", positive=True),
        Param("fit_points", "int", 3,
              "how many of the largest boxes enter the linear fit", positive=True),
        Param("c_h", "float", 1.33, "hydrodynamic radius per grid spacing",
              positive=True),
    ),
    "relax": (
        Param("h", "spacing", "1/64", "grid spacing"),
        Param("scheme", "choice", "implicit_bending", "time integrator",
              choices=SCHEMES),
        Param("dt", "float", 1.0e-4, "timestep", positive=True),
        Param("t_end", "float", 0.02, "simulated horizon", positive=True),
        Param("mode", "choice", "hybrid", "velocity model", choices=_MODES),
        Param("radius", "float", 0.008, "physical fiber radius", positive=True),
        Param("ks", "float", 100.0, "stretching stiffness", positive=True),
        Param("kb", "float", 0.25, "bending stiffness", positive=True),
        Param("ell", "float", 0.1, "initial bend depth", positive=True),
        Param("dy0", "float", 0.045, "initial tip separation", positive=True),
        Param("fiber_length", "float", 0.5, "fiber length", positive=True),
        Param("mu", "float", 1.0, "fluid viscosity", positive=True),
        Param("sample_dt", "float", 1.0e-4, "separation sampling interval",
              positive=True),
        Param("c_h", "float", 1.33, "hydrodynamic radius per grid spacing",
              positive=True),
    ),
    "shear": (
        Param("eta_tilde", "float", 450.0, "elasto-viscous number", positive=True),
        Param("h", "spacing", "1/32", "grid spacing"),
        Param("gamma_dot", "float", 3.0, "shear rate", positive=True),
        Param("mu", "float", 1.0, "fluid viscosity", positive=True),
        Param("ks", "float", 100.0, "stretching stiffness", positive=True),
        Param("dt", "float", 1.0e-3, "timestep", positive=True),
        Param("t_end", "float", 10.0, "simulated horizon", positive=True),
        Param("fiber_length", "float", 1.0, "fiber length", positive=True),
        Param("scheme", "choice", "newton", "time integrator", choices=SCHEMES),
        Param("sample_dt", "float", 0.01, "frame sampling interval", positive=True),
        Param("c_h", "float", 1.33, "hydrodynamic radius per grid spacing",
              positive=True),
    ),
    "suspension": (
        Param("n_lf3", "float", 5.0, "dimensionless concentration n*Lf^3"),
        Param("trials", "int", 2, "independent random placements", positive=True),
        Param("h", "spacing", "1/64", "grid spacing"),
        Param("f0", "float", 0.1, "probe force amplitude", positive=True),
        Param("digits", "int", 3, "steady-state agreement digits", positive=True),
        Param("dt", "float", 1.0e-6, "timestep", positive=True),
        Param("max_steps", "int", 40000, "step budget per trial", positive=True),
        Param("sample_every", "int", 10, "steps between viscosity samples",
              positive=True),
        Param("fiber_length", "float", 0.5, "fiber length", positive=True),
        Param("radius", "float", 7.5e-3, "physical fiber radius", positive=True),
        Param("ks", "float", 100.0, "stretching stiffness", positive=True),
        Param("kb", "float", 0.25, "bending stiffness", positive=True),
        Param("mu", "float", 1.0, "fluid viscosity", positive=True),
        Param("r_const", "float", 3.0, "orientation diffusivity constant",
              positive=True),
        Param("re_factor", "float", 0.7, "effective aspect ratio factor",
              positive=True),
        Param("aspect", "float", 33.0, "fiber aspect ratio", positive=True),
        Param("c_h", "float", 1.33, "hydrodynamic radius per grid spacing",
              positive=True),
    ),
    "stokes-check": (
        Param("n", "int", 64, "grid points per axis", positive=True),
        Param("length", "float", 1.0, "box edge length", positive=True),
        Param("mu", "float", 1.0, "fluid viscosity", positive=True),
        Param("f0", "float", 1.0, "force amplitude", positive=True),
    ),
}


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    params: dict
    seed: int = 0
    out: str | None = None


def experiment_names() -> tuple[str, ...]:
    return tuple(SCHEMAS)


def _validate_cross(experiment: str, p: dict) -> None:
    """Fail-fast checks spanning several parameters."""
    if experiment == "calibrate":
        if round(1.0 / parse_spacing(p["h"])) < 3:
            raise ConfigError("grid spacing too coarse for the unit box")
    elif experiment == "ellipsoid-drag":
        if p["b"] <= p["a"]:
            raise ConfigError("half-major axis must exceed half-minor axis")
        if len(p["box_sizes"]) < 2:
            raise ConfigError("need at least two box sizes to extrapolate")
        r_h = hydrodynamic_radius(parse_spacing(p["h"]), p["c_h"])
        if p["a"] > r_h:
            raise ConfigError(
                "physical radius exceeds grid hydrodynamic radius "
                f"(half-minor axis {p['a']:.6g} vs R_h {r_h:.6g})"
            )
        if p["fit_points"] < 2:
            raise ConfigError("fit_points must be at least 2")
    elif experiment == "relax":
        if p["mode"] == "hybrid":
            r_h = hydrodynamic_radius(parse_spacing(p["h"]), p["c_h"])
            if p["radius"] > r_h:
                raise ConfigError(
                    "physical radius exceeds grid hydrodynamic radius "
                    f"({p['radius']:.6g} vs R_h {r_h:.6g})"
                )
        if p["sample_dt"] < p["dt"]:
            raise ConfigError("sample_dt must be at least one timestep")
    elif experiment == "shear":
        if p["sample_dt"] < p["dt"]:
            raise ConfigError("sample_dt must be at least one timestep")
    elif experiment == "suspension":
        if p["n_lf3"] < 0:
            raise ConfigError("n_lf3 must be nonnegative")
        r_h = hydrodynamic_radius(parse_spacing(p["h"]), p["c_h"])
        if p["radius"] > r_h:
            raise ConfigError(
                "physical radius exceeds grid hydrodynamic radius "
                f"({p['radius']:.6g} vs R_h {r_h:.6g})"
            )
        if p["re_factor"] * p["aspect"] <= 1.0:
            raise ConfigError("effective aspect ratio must exceed 1")


def make_config(experiment: str, overrides: dict | None = None,
                seed: int = 0, out: str | None = None) -> RunConfig:
    """Build a fully defaulted, validated RunConfig."""
    if experiment not in SCHEMAS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; "
            f"expected one of {sorted(SCHEMAS)}"
        )
    schema = {param.name: param for param in SCHEMAS[experiment]}
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(schema))
    if unknown:
        raise ConfigError(f"unknown parameters for {experiment}: {unknown}")
    params = {}
    for name, param in schema.items():
        if name in overrides:
            params[name] = _coerce(param, overrides[name])
        else:
            params[name] = param.default
    _validate_cross(experiment, params)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    if seed < 0 or seed >= 2 ** 64:
        raise ConfigError("seed must fit in 64 unsigned bits")
    return RunConfig(experiment=experiment, params=params, seed=seed, out=out)


_RESERVED = ("experiment", "seed", "out")


def parse_config(text: str) -> RunConfig:
    """Parse a JSON config document into a validated RunConfig."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    if "experiment" not in doc:
        raise ConfigError("config document must name an experiment")
    experiment = doc["experiment"]
    seed = doc.get("seed", 0)
    out = doc.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out must be a string path")
    overrides = {k: v for k, v in doc.items() if k not in _RESERVED}
    return make_config(experiment, overrides, seed=seed, out=out)


def config_document(cfg: RunConfig) -> dict:
    """Canonical JSON-serializable form; parse_config round-trips it."""
    doc = {"experiment": cfg.experiment, "seed": cfg.seed}
    if cfg.out is not None:
        doc["out"] = cfg.out
    doc.update(cfg.params)
    return doc


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(config_document(cfg), sort_keys=True, indent=2) + "\n"
