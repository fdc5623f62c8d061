"""Command-line entry points for the experiment suite.

Each experiment is a subcommand whose flags mirror its config schema;
values may also come from a JSON config file, with CLI flags taking
precedence. Results land in the output directory as

    <experiment>_series.csv    labeled time series
    <experiment>_summary.json  scalars, parameters, seed, status
    effective_config.json      the fully defaulted config actually run
    timing.log                 wall time (kept out of the JSON so that
                               reruns are byte-identical)

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure
(blow-up, non-convergence).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .config import (
    SCHEMAS,
    ConfigError,
    RunConfig,
    make_config,
    serialize_config,
)
from .experiments import DRIVERS
from .experiments.report import write_series_csv, write_summary_json
from .stepping import NewtonConvergenceError, NumericalBlowupError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slenderib",
        description="Hybrid drag-corrected immersed boundary experiments",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, schema in SCHEMAS.items():
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="RNG seed")
        p.add_argument("--out", default=None, help="output directory")
        for param in schema:
            flag = "--" + param.name.replace("_", "-")
            kwargs: dict = {"help": param.help, "default": None}
            if param.kind == "int":
                kwargs["type"] = int
            elif param.kind == "float":
                kwargs["type"] = float
            elif param.kind == "choice":
                kwargs["choices"] = param.choices
            # spacing and float_list stay strings; the schema parses them
            p.add_argument(flag, **kwargs)
    return parser


def _load_file_config(path: str, experiment: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    named = doc.get("experiment", experiment)
    if named != experiment:
        raise ConfigError(
            f"config file is for {named!r}, not {experiment!r}"
        )
    return doc


def _assemble_config(args) -> RunConfig:
    experiment = args.experiment
    doc = _load_file_config(args.config, experiment) if args.config else {}
    seed = doc.get("seed", 0)
    out = doc.get("out")
    overrides = {
        k: v for k, v in doc.items()
        if k not in ("experiment", "seed", "out")
    }
    for param in SCHEMAS[experiment]:
        value = getattr(args, param.name)
        if value is not None:
            overrides[param.name] = value
    if args.seed is not None:
        seed = args.seed
    if args.out is not None:
        out = args.out
    return make_config(experiment, overrides, seed=seed, out=out)


def _slug(experiment: str) -> str:
    return experiment.replace("-", "_")


def write_artifacts(report, cfg: RunConfig, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    slug = _slug(cfg.experiment)
    write_series_csv(os.path.join(out_dir, f"{slug}_series.csv"), report.series)
    write_summary_json(os.path.join(out_dir, f"{slug}_summary.json"), report)
    with open(os.path.join(out_dir, "effective_config.json"), "w") as fh:
        fh.write(serialize_config(cfg))


def _headline(report) -> str:
    name = report.experiment
    s = report.scalars
    if name == "stokes-check":
        return f"stokes-check: max relative error {s['max_rel_error']:.3e}"
    if name == "calibrate":
        return f"calibrate: mean R_h/h = {s['mean_rh_over_h']:.4f}"
    if name == "ellipsoid-drag":
        return (
            f"ellipsoid-drag: F/U = {s['fu_extrapolated']:.4f} "
            f"(reference {s['fu_oberbeck']:.4f})"
        )
    if name == "relax":
        return (
            f"relax: dy {s['dy_initial']:.4f} -> {s['dy_final']:.4f}, "
            f"stable = {s['stable']}"
        )
    if name == "shear":
        return f"shear: mode = {s['mode_label']} (min e = {s['min_e']:.3f})"
    if name == "suspension":
        return (
            f"suspension: mu_eff = {s['mu_eff_mean']:.4f} "
            f"+- {s['mu_eff_std']:.4f}"
        )
    return f"{name}: done"


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _assemble_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = cfg.out or "."
    started = time.perf_counter()
    try:
        report = DRIVERS[cfg.experiment](cfg)
    except (NumericalBlowupError, NewtonConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    elapsed = time.perf_counter() - started
    write_artifacts(report, cfg, out_dir)
    with open(os.path.join(out_dir, "timing.log"), "w") as fh:
        fh.write(f"wall_seconds {elapsed:.3f}\n")
    print(_headline(report))
    if report.status != "ok":
        print(f"numerical failure: status = {report.status}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
