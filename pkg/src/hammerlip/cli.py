"""Command-line front end.

Subcommands mirror the experiment runners plus two utilities (`rect` for
the closed-form maximal rectangle, `dump-cloud` for raw samples).  Options
may come from an INI-style `key = value` file via --config; explicit flags
override file values, unknown file keys are rejected, and the fully
resolved configuration is echoed to <out>/config.resolved for provenance.

Exit codes: 0 all verdicts pass, 1 usage/validation error, 2 some verdict
failed, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import DegenerateBand, WrongCase
from .experiments import (
    ExperimentSpec,
    run_coupling_check,
    run_crossing,
    run_fluctuation,
    run_localization,
    run_noncentral_drift,
    run_parallelogram_gap,
    run_shape,
    run_stationarity,
    run_wandering,
)
from .geometry import Parallelogram, Rect, SlopeBand, max_inscribed_rectangle
from .sampler import dump_cloud_csv, sample_poisson_rect

_MASK64 = (1 << 64) - 1


def _u64(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v <= _MASK64:
        raise ValueError("seed must fit in 64 bits")
    return v


def _pos_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise ValueError("must be a nonnegative integer")
    return v


def _float_or_inf(s: str) -> float:
    if str(s).strip().lower() in {"inf", "infinity", "+inf"}:
        return math.inf
    return float(s)


def _t_grid(s: str) -> tuple[float, ...]:
    return tuple(float(part) for part in str(s).split(",") if part.strip())


def _default_seed() -> int:
    env = os.environ.get("HAMMERLIP_SEED")
    return _u64(env) if env else 42


# (dest, converter, default factory or value, help)
_COMMON = [
    ("seed", _u64, _default_seed, "master seed (default: HAMMERLIP_SEED or 42)"),
    ("out", str, "./out", "output directory"),
    ("jobs", _pos_int, lambda: os.cpu_count() or 1, "worker processes for replicates"),
    ("config", str, None, "INI-style key=value file; flags override it"),
]

_BAND = [
    ("alpha", float, 0.0, "lower slope bound (>= 0)"),
    ("beta", _float_or_inf, math.inf, "upper slope bound (finite or 'inf')"),
    ("a", float, 1.0, "box width coefficient"),
    ("b", float, 1.0, "box height coefficient"),
]

_OPTIONS: dict[str, list[tuple]] = {
    "shape": _BAND
    + [
        ("t", _t_grid, (100.0, 200.0, 400.0), "comma-separated t grid"),
        ("reps", _pos_int, 20, "replicates per t"),
        ("intensity", float, 1.0, "cloud intensity"),
        ("rel_tol", float, 0.05, "relative tolerance of the shape verdict"),
        ("abs_tol", float, None, "absolute tolerance override"),
    ],
    "fluct": _BAND
    + [
        ("t", _t_grid, (100.0, 200.0, 400.0, 800.0), "comma-separated t grid (>= 4 values)"),
        ("reps", _pos_int, 100, "replicates per t"),
        ("intensity", float, 1.0, "cloud intensity"),
        ("slope_lo", float, 0.26, "lower bound of the exponent verdict"),
        ("slope_hi", float, 0.41, "upper bound of the exponent verdict"),
    ],
    "drift": [
        ("alpha", float, 1.0, "lower slope bound"),
        ("beta", _float_or_inf, 3.0, "upper slope bound"),
        ("a", float, 1.0, "box width coefficient"),
        ("b", float, 2.5, "box height coefficient"),
        ("t", _t_grid, (200.0, 400.0, 800.0, 1600.0), "comma-separated t grid"),
        ("reps", _pos_int, 50, "replicates per t"),
        ("intensity", float, 1.0, "cloud intensity"),
    ],
    "localize": _BAND
    + [
        ("t", _t_grid, (500.0,), "comma-separated t grid"),
        ("reps", _pos_int, 20, "replicates per t"),
        ("intensity", float, 1.0, "cloud intensity"),
        ("delta", float, 0.25, "strip half-width per unit t"),
        ("min_fraction", float, 0.9, "required containment fraction"),
        ("measure", str, "support", "containment measure: support or path"),
    ],
    "wander": _BAND
    + [
        ("t", _t_grid, (125.0, 250.0, 500.0, 1000.0), "comma-separated t grid"),
        ("reps", _pos_int, 40, "replicates per t"),
        ("intensity", float, 1.0, "cloud intensity"),
    ],
    "gap": [
        ("alpha", float, 0.5, "lower slope bound"),
        ("beta", _float_or_inf, 2.0, "upper slope bound"),
        ("a", float, 1.0, "box width coefficient"),
        ("b", float, 1.0, "box height coefficient"),
        ("t", _t_grid, (200.0, 400.0), "comma-separated t grid"),
        ("reps", _pos_int, 40, "replicates per t"),
    ],
    "coupling-check": [
        ("trials", _pos_int, 500, "number of random trials"),
        ("n_points_max", _pos_int, 200, "max points per trial (<= 300)"),
    ],
    "stationarity": [
        ("lam", float, 1.0, "source intensity (sinks get 1/lambda)"),
        ("x0", float, 5.0, "left edge of the horizontal increment"),
        ("x1", float, 55.0, "right edge of the horizontal increment"),
        ("y0", float, 5.0, "bottom edge of the vertical increment"),
        ("y1", float, 55.0, "top edge of the vertical increment"),
        ("reps", _pos_int, 500, "replicates"),
        ("corr_tol", float, None, "correlation tolerance (default 3/sqrt(reps))"),
    ],
    "crossing-check": [
        ("configs", _pos_int, 100, "retained configurations with Z > 0"),
        ("probes", _pos_int, 20, "probes per configuration"),
    ],
    "rect": [
        ("mu", float, None, "parallelogram shear parameter (> 1)"),
        ("sigma", float, None, "far-corner abscissa"),
        ("rho", float, None, "far-corner ordinate"),
        ("c", float, None, "upper side scale (alternative to sigma/rho)"),
        ("cprime", float, None, "lower side scale (alternative to sigma/rho)"),
    ],
    "dump-cloud": [
        ("x_max", float, 1.0, "rectangle width"),
        ("y_max", float, 1.0, "rectangle height"),
        ("intensity", float, 1.0, "cloud intensity"),
    ],
}

_KEY_ALIASES = {"lambda": "lam"}


@dataclass
class RunConfig:
    command: str
    values: dict
    out_dir: Path
    seed: int
    jobs: int


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hammerlip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for command, options in _OPTIONS.items():
        p = sub.add_parser(command)
        for dest, _conv, _default, help_text in options + _COMMON:
            flag = "--lambda" if dest == "lam" else "--" + dest.replace("_", "-")
            p.add_argument(flag, dest=dest, default=None, help=help_text)
    return parser


def _read_config_file(path: str, known: set[str], parser: _Parser) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        key = _KEY_ALIASES.get(key, key)
        if key not in known:
            parser.error(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _validate(command: str, v: dict, parser: _Parser) -> None:
    def fail(msg: str):
        parser.error(f"{command}: {msg}")

    if command in {"shape", "fluct", "drift", "localize", "wander", "gap"}:
        if not (v["a"] > 0 and v["b"] > 0):
            fail("a and b must be positive")
        try:
            band = SlopeBand(v["alpha"], v["beta"])
        except ValueError as exc:
            fail(str(exc))
        ts = v["t"]
        if not ts or any(t <= 0 for t in ts) or list(ts) != sorted(set(ts)):
            fail("t grid must be positive and strictly ascending")
        if command == "fluct" and len(ts) < 4:
            fail("fluct needs at least 4 t values")
        if command == "gap" and not band.is_finite:
            fail("gap needs a finite band")
        if command == "localize" and v["delta"] <= 0:
            fail("delta must be positive")
        if command == "localize" and v["measure"] not in {"support", "path"}:
            fail("measure must be 'support' or 'path'")
        if command in {"shape", "fluct", "drift", "localize", "wander"} and v["intensity"] < 0:
            fail("intensity must be nonnegative")
    elif command == "coupling-check":
        if v["n_points_max"] > 300:
            fail("n_points_max must be <= 300")
    elif command == "stationarity":
        if v["lam"] <= 0:
            fail("lambda must be positive")
        if not (0 < v["x0"] < v["x1"] and 0 < v["y0"] < v["y1"]):
            fail("need 0 < x0 < x1 and 0 < y0 < y1")
    elif command == "rect":
        if v["mu"] is None or not v["mu"] > 1:
            fail("mu must be given and exceed 1")
        has_sr = v["sigma"] is not None and v["rho"] is not None
        has_cc = v["c"] is not None and v["cprime"] is not None
        if has_sr == has_cc:
            fail("give exactly one of (--sigma, --rho) or (--c, --cprime)")
        if has_cc and not (v["c"] > 0 and v["cprime"] > 0):
            fail("c and cprime must be positive")
    elif command == "dump-cloud":
        if v["x_max"] < 0 or v["y_max"] < 0 or v["intensity"] < 0:
            fail("x_max, y_max and intensity must be nonnegative")


def parse_config(argv=None) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.error("a subcommand is required")
    options = _OPTIONS[ns.command] + _COMMON
    dests = {dest for dest, *_ in options}

    raw = {dest: getattr(ns, dest) for dest in dests}
    if raw.get("config"):
        file_values = _read_config_file(raw["config"], dests, parser)
        for key, value in file_values.items():
            if raw[key] is None:  # flags win over the file
                raw[key] = value

    values: dict = {}
    for dest, conv, default, _help in options:
        value = raw[dest]
        if value is None:
            value = default() if callable(default) else default
        elif isinstance(value, str):
            try:
                value = conv(value)
            except (ValueError, TypeError) as exc:
                parser.error(f"invalid value for --{dest.replace('_', '-')}: {exc}")
        values[dest] = value
    _validate(ns.command, values, parser)
    return RunConfig(
        command=ns.command,
        values=values,
        out_dir=Path(values["out"]),
        seed=values["seed"],
        jobs=values["jobs"],
    )


def _echo_resolved(config: RunConfig) -> None:
    lines = [f"command = {config.command}"]
    for key in sorted(config.values):
        if key in {"config", "out"}:
            continue
        value = config.values[key]
        if value is None:
            continue
        if isinstance(value, tuple):
            value = ",".join(f"{x:g}" for x in value)
        lines.append(f"{key} = {value}")
    lines.append(f"out = {config.out_dir}")
    (config.out_dir / "config.resolved").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _spec_from(values: dict, extras: dict) -> ExperimentSpec:
    return ExperimentSpec(
        a=values["a"],
        b=values["b"],
        band=SlopeBand(values["alpha"], values["beta"]),
        t_grid=values["t"],
        reps=values["reps"],
        master_seed=values["seed"],
        extras=extras,
    )


def _dispatch(config: RunConfig):
    v = config.values
    jobs = config.jobs
    if config.command == "shape":
        extras = {"intensity": v["intensity"], "rel_tol": v["rel_tol"]}
        if v["abs_tol"] is not None:
            extras["abs_tol"] = v["abs_tol"]
        return run_shape(_spec_from(v, extras), jobs=jobs)
    if config.command == "fluct":
        extras = {"intensity": v["intensity"], "slope_lo": v["slope_lo"], "slope_hi": v["slope_hi"]}
        return run_fluctuation(_spec_from(v, extras), jobs=jobs)
    if config.command == "drift":
        return run_noncentral_drift(_spec_from(v, {"intensity": v["intensity"]}), jobs=jobs)
    if config.command == "localize":
        extras = {
            "intensity": v["intensity"],
            "delta": v["delta"],
            "min_fraction": v["min_fraction"],
            "measure": v["measure"],
        }
        return run_localization(_spec_from(v, extras), jobs=jobs)
    if config.command == "wander":
        return run_wandering(_spec_from(v, {"intensity": v["intensity"]}), jobs=jobs)
    if config.command == "gap":
        return run_parallelogram_gap(_spec_from(v, {}), jobs=jobs)
    if config.command == "coupling-check":
        return run_coupling_check(v["trials"], v["n_points_max"], v["seed"], jobs=jobs)
    if config.command == "stationarity":
        return run_stationarity(
            v["lam"],
            (v["x0"], v["x1"], v["y0"], v["y1"]),
            v["reps"],
            v["seed"],
            jobs=jobs,
            corr_tol=v["corr_tol"],
        )
    if config.command == "crossing-check":
        return run_crossing(v["configs"], v["seed"], probes_per_config=v["probes"], jobs=jobs)
    raise AssertionError(f"unhandled command {config.command}")


def _run_rect(config: RunConfig) -> int:
    v = config.values
    if v["sigma"] is not None:
        par = Parallelogram.from_sigma_rho(v["sigma"], v["rho"], v["mu"])
    else:
        par = Parallelogram.from_c_cprime(v["c"], v["cprime"], v["mu"])
    result = max_inscribed_rectangle(par)
    w = result.witness
    print(f"area = {result.area:.17g}")
    print(f"witness = [{w.x0:.17g}, {w.x1:.17g}] x [{w.y0:.17g}, {w.y1:.17g}]")
    if result.family.is_singleton:
        print("family = unique maximizer")
    else:
        d = result.family.direction
        print(f"family = translations by u*({d[0]:g}, {d[1]:g}), u in [0, {result.family.u_max:.17g}]")
    payload = {
        "mu": par.mu,
        "c": par.c,
        "cprime": par.cprime,
        "sigma": par.sigma,
        "rho": par.rho,
        "area": result.area,
        "witness": [w.x0, w.x1, w.y0, w.y1],
        "family_direction": list(result.family.direction),
        "family_u_max": result.family.u_max,
    }
    (config.out_dir / "rect.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="ascii")
    return 0


def _run_dump_cloud(config: RunConfig) -> int:
    v = config.values
    cloud = sample_poisson_rect(Rect(0.0, v["x_max"], 0.0, v["y_max"]), v["intensity"], v["seed"])
    dump_cloud_csv(cloud, config.out_dir / "cloud.csv")
    print(f"wrote {len(cloud)} points to {config.out_dir / 'cloud.csv'}")
    return 0


def execute(config: RunConfig) -> int:
    """Run a parsed configuration; returns the process exit code."""
    try:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        _echo_resolved(config)
    except OSError as exc:
        print(f"hammerlip: I/O error: {exc}", file=sys.stderr)
        return 3

    try:
        if config.command == "rect":
            return _run_rect(config)
        if config.command == "dump-cloud":
            return _run_dump_cloud(config)
        report = _dispatch(config)
    except (WrongCase, DegenerateBand, ValueError) as exc:
        print(f"hammerlip: {config.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"hammerlip: I/O error: {exc}", file=sys.stderr)
        return 3

    try:
        report.write(config.out_dir)
    except OSError as exc:
        print(f"hammerlip: I/O error: {exc}", file=sys.stderr)
        return 3
    for flag in report.flags:
        print(f"flag: {flag}")
    for verdict in report.verdicts:
        status = "PASS" if verdict.passed else "FAIL"
        print(f"{status} {verdict.name}: observed={verdict.observed} band={verdict.band}")
    return 0 if report.passed else 2


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return execute(config)


if __name__ == "__main__":
    sys.exit(main())
