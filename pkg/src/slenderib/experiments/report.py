"""Experiment results and their on-disk form.

A report is a plain record: scalar results, labeled time series, the
parameters and seed that produced them, and a status. Serialization is
deliberately boring (CSV for series, JSON for the summary) and fully
deterministic: floats are written with repr, which round-trips exactly,
and JSON keys are sorted. Wall-clock time never enters these files; the
CLI keeps it in a separate timing.log so that repeated runs with the
same config and seed are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field


@dataclass
class Series:
    """One labeled curve: values[i] recorded at t[i]."""

    label: str
    t: list
    values: list

    def __post_init__(self):
        if len(self.t) != len(self.values):
            raise ValueError("series t and values must have equal length")


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    seed: int
    scalars: dict = field(default_factory=dict)
    series: list = field(default_factory=list)
    status: str = "ok"

    def summary_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "parameters": self.params,
            "seed": self.seed,
            "scalars": self.scalars,
            "status": self.status,
        }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value))


def write_series_csv(path, series_list) -> None:
    """Wide CSV: t column plus one column per series.

    Rows follow the sorted union of sample times; a series missing a
    given time leaves its cell blank.
    """
    times = sorted({float(t) for s in series_list for t in s.t})
    columns = [dict(zip(map(float, s.t), s.values)) for s in series_list]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [s.label for s in series_list])
        for t in times:
            writer.writerow([repr(t)] + [_cell(col.get(t)) for col in columns])


def write_summary_json(path, report: ExperimentReport) -> None:
    with open(path, "w") as fh:
        json.dump(report.summary_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
