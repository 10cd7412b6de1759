"""Experiment report containers and machine-readable output.

Every run produces a replicate table (one row per replicate, carrying the
child seed that reproduces it), per-t summary statistics, optional log-log
fit, and a list of verdicts whose bands record how they were derived.
CSV floats use 17 significant digits so reruns are byte-comparable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["ScalingFit", "Verdict", "ExperimentReport", "describe", "fit_loglog"]


def describe(values) -> dict:
    """mean / sd / median / iqr summary (sd with ddof=1, NaN if n < 2)."""
    arr = np.asarray(values, dtype=np.float64)
    n = len(arr)
    if n == 0:
        return {"n": 0, "mean": math.nan, "sd": math.nan, "median": math.nan, "iqr": math.nan}
    q25, q75 = np.percentile(arr, [25.0, 75.0])
    return {
        "n": n,
        "mean": float(arr.mean()),
        "sd": float(arr.std(ddof=1)) if n > 1 else math.nan,
        "median": float(np.median(arr)),
        "iqr": float(q75 - q25),
    }


@dataclass(frozen=True)
class ScalingFit:
    """Ordinary least squares on (log t, log statistic)."""

    slope: float
    stderr: float
    intercept: float


def fit_loglog(ts, values) -> ScalingFit:
    x = np.log(np.asarray(ts, dtype=np.float64))
    y = np.log(np.asarray(values, dtype=np.float64))
    n = len(x)
    if n < 2 or not np.all(np.isfinite(y)):
        raise ValueError("log-log fit needs >= 2 finite points")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = ym - slope * xm
    if n > 2:
        resid = y - (intercept + slope * x)
        stderr = math.sqrt(float(np.sum(resid**2)) / (n - 2) / sxx)
    else:
        stderr = math.nan
    return ScalingFit(slope, stderr, float(intercept))


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    band: str
    observed: float | None = None
    derivation: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "band": self.band,
            "observed": self.observed,
            "derivation": self.derivation,
        }


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


@dataclass
class ExperimentReport:
    command: str
    params: dict
    columns: list[str]
    rows: list[tuple]
    per_t: list[dict] = field(default_factory=list)
    fit: ScalingFit | None = None
    verdicts: list[Verdict] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])

    def csv_text(self) -> str:
        lines = [",".join(self.columns)]
        lines.extend(",".join(_fmt_cell(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "command": self.command,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "per_t": [{k: _jsonable(v) for k, v in entry.items()} for entry in self.per_t],
            "fit": None
            if self.fit is None
            else {"slope": self.fit.slope, "stderr": self.fit.stderr, "intercept": self.fit.intercept},
            "verdicts": [v.as_dict() for v in self.verdicts],
            "flags": list(self.flags),
            "stats": {k: _jsonable(v) for k, v in self.stats.items()},
            "pass": self.passed,
        }

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{self.command}.csv").write_text(self.csv_text(), encoding="ascii")
        (out / f"{self.command}_summary.json").write_text(
            json.dumps(self.summary(), indent=2, sort_keys=False, allow_nan=True) + "\n",
            encoding="ascii",
        )


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v
