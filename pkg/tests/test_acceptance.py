"""Acceptance gate: every stated criterion at its pinned tolerance.

Each test prints one `ACCEPTANCE <id> <name>: PASS` line.  Statistical
criteria run with a one-rerun flakiness budget: if the first seed fails its
3-to-4-sigma band, one independent seed is tried and must pass.  The
deterministic criteria (1, 2, 4, 5, 10, 12) allow no retry.
"""

import math
import os
import time

import numpy as np
import pytest

from hammerlip import kernels
from hammerlip.chains import longest_chain_bruteforce, longest_chain_standard
from hammerlip.experiments import (
    ExperimentSpec,
    run_coupling_check,
    run_crossing,
    run_fluctuation,
    run_localization,
    run_noncentral_drift,
    run_parallelogram_gap,
    run_shape,
    run_stationarity,
)
from hammerlip.geometry import (
    Parallelogram,
    Rect,
    SlopeBand,
    max_inscribed_rectangle,
    max_rectangle_convex,
)
from hammerlip.sampler import PointCloud, child_seed, sample_poisson_rect

INF = math.inf
JOBS = min(4, os.cpu_count() or 1)


def _announce(ident: str, name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE {ident} {name}: PASS{suffix}")


def _with_rerun(make_report, seeds, describe_fail):
    """Statistical criteria get one retry on an independent seed."""
    first = make_report(seeds[0])
    if first.passed:
        return first, 1
    print(f"\nfirst attempt failed ({describe_fail(first)}); retrying once on seed {seeds[1]}")
    second = make_report(seeds[1])
    return second, 2


def _failed_names(report):
    return [v.name for v in report.verdicts if not v.passed]


def test_criterion_01_coupling_exactness():
    t0 = time.time()
    report = run_coupling_check(500, 200, seed=101, jobs=JOBS)
    elapsed = time.time() - t0
    assert report.stats["failures"] == 0, f"coupling mismatches: {_failed_names(report)}"
    assert report.stats["passes"] == 500
    assert elapsed < 60.0, f"runtime {elapsed:.1f}s exceeds 1 min"
    _announce("1", "coupling exactness", f"500/500 trials, {elapsed:.1f}s")


def test_criterion_02_engine_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(202)
    classical = SlopeBand(0, INF)
    for trial in range(200):
        n = int(rng.integers(1, 301))
        cloud = PointCloud.from_arrays(rng.uniform(0, 1, n), rng.uniform(0, 1, n))
        fast = longest_chain_standard(cloud).length
        slow = longest_chain_bruteforce(cloud, classical)
        assert fast == slow, f"trial {trial}: engine {fast} != oracle {slow} (seed 202)"
    elapsed = time.time() - t0
    assert elapsed < 30.0, f"runtime {elapsed:.1f}s exceeds 30 s"
    _announce("2", "engine-oracle equivalence", f"200/200 clouds, {elapsed:.1f}s")


def test_criterion_03_limiting_shape():
    cases = [
        ("central", 1.0, 1.0, SlopeBand(0.5, 2.0), {"abs_tol": 0.035}, 2 / math.sqrt(3)),
        ("super", 1.0, 2.5, SlopeBand(1.0, 3.0), {"rel_tol": 0.05}, math.sqrt(2)),
        ("classical", 1.0, 1.0, SlopeBand(0.0, INF), {"rel_tol": 0.03}, 2.0),
    ]
    for tag, a, b, band, extras, target in cases:
        def attempt(seed, a=a, b=b, band=band, extras=extras):
            spec = ExperimentSpec(a, b, band, (1000.0,), 100, seed, extras=dict(extras))
            return run_shape(spec, jobs=JOBS)

        report, tries = _with_rerun(attempt, (3001, 3002), _failed_names)
        verdict = report.verdicts[0]
        assert verdict.passed, f"{tag}: observed {verdict.observed} outside {verdict.band}"
        _announce("3", f"limiting shape [{tag}]",
                  f"mean L/t = {verdict.observed:.4f}, target {target:.4f}, attempt {tries}")


def test_criterion_04_boundary_continuity():
    t0 = time.time()
    rng = np.random.default_rng(404)
    for _ in range(1000):
        alpha = float(rng.uniform(0.05, 3.0))
        beta = alpha * float(rng.uniform(1.01, 10.0))
        a = float(rng.uniform(0.1, 10.0))
        b_hi = a * (alpha + beta) / 2.0
        central_hi = 2 * math.sqrt((beta * a - b_hi) * (b_hi - a * alpha) / (beta - alpha))
        plateau_hi = a * math.sqrt(beta - alpha)
        assert abs(central_hi - plateau_hi) <= 1e-12 * plateau_hi
        b_lo = 2 * a * alpha * beta / (alpha + beta)
        central_lo = 2 * math.sqrt((beta * a - b_lo) * (b_lo - a * alpha) / (beta - alpha))
        plateau_lo = b_lo * math.sqrt(1 / alpha - 1 / beta)
        assert abs(central_lo - plateau_lo) <= 1e-12 * plateau_lo
    elapsed = time.time() - t0
    assert elapsed < 1.0, f"runtime {elapsed:.2f}s exceeds 1 s"
    _announce("4", "boundary continuity", f"1000 bands at 1e-12 relative, {elapsed:.2f}s")


def test_criterion_05_max_rectangle():
    t0 = time.time()
    # worked values, exact
    flat = max_inscribed_rectangle(Parallelogram.from_sigma_rho(9.0, 1.0, 2.0))
    assert flat.area == 15.125
    central = max_inscribed_rectangle(Parallelogram.from_c_cprime(1.0, 1.0, 2.0))
    assert central.area == central.witness.area == 1.0  # sigma * rho
    # closed form vs numeric optimizer on 100 random parallelograms
    rng = np.random.default_rng(505)
    for trial in range(100):
        par = Parallelogram.from_c_cprime(
            float(rng.uniform(0.3, 3.0)), float(rng.uniform(0.3, 3.0)), float(rng.uniform(1.1, 4.0))
        )
        area = max_inscribed_rectangle(par).area
        value, _ = max_rectangle_convex(par.as_polygon(), resolution=512)
        closed = 2 * math.sqrt(area)
        assert abs(value - closed) <= 1e-6 * closed, f"trial {trial}: {value} vs {closed}"
    elapsed = time.time() - t0
    assert elapsed < 30.0, f"runtime {elapsed:.1f}s exceeds 30 s"
    _announce("5", "max rectangle closed form vs optimizer", f"100 parallelograms, {elapsed:.1f}s")


def test_criterion_06_localization():
    def central_attempt(seed):
        spec = ExperimentSpec(
            1.0, 1.0, SlopeBand(0.5, 2.0), (2000.0,), 50, seed,
            extras={"delta": 0.25, "measure": "support", "min_fraction": 0.9},
        )
        return run_localization(spec, jobs=JOBS)

    report, tries = _with_rerun(central_attempt, (606, 607), _failed_names)
    frac = report.per_t[-1]["frac_support_contained"]
    assert report.passed, f"central containment fraction {frac}"
    _announce("6", "localization [central support]", f"fraction {frac:.2f}, attempt {tries}")

    def sub_attempt(seed):
        spec = ExperimentSpec(
            1.0, 1.2, SlopeBand(1.0, 3.0), (2000.0,), 50, seed,
            extras={"delta": 0.25, "measure": "path", "min_fraction": 0.9},
        )
        return run_localization(spec, jobs=JOBS)

    report, tries = _with_rerun(sub_attempt, (616, 617), _failed_names)
    assert report.params["strip_slope"] == 1.5
    frac = report.per_t[-1]["frac_path_contained"]
    assert report.passed, f"sub containment fraction {frac}"
    _announce("6", "localization [sub path, slope 1.5]", f"fraction {frac:.2f}, attempt {tries}")


def test_criterion_07_central_fluctuation():
    def attempt(seed):
        spec = ExperimentSpec(
            1.0, 1.0, SlopeBand(0.5, 2.0), (100.0, 200.0, 400.0, 800.0), 300, seed
        )
        return run_fluctuation(spec, jobs=JOBS)

    report, tries = _with_rerun(attempt, (707, 708), _failed_names)
    assert report.passed, f"failed verdicts: {_failed_names(report)}"
    _announce(
        "7",
        "central fluctuation exponent",
        f"slope {report.fit.slope:.3f} in [0.26, 0.41], "
        f"normalized mean {report.stats['normalized_mean']:.2f}, "
        f"variance {report.stats['normalized_var']:.2f}, attempt {tries}",
    )


def test_criterion_08_noncentral_drift():
    spec = ExperimentSpec(1.0, 2.5, SlopeBand(1.0, 3.0), (200.0, 400.0, 800.0, 1600.0), 200, 808)
    report = run_noncentral_drift(spec, jobs=JOBS)
    med13 = [entry["median_drift_t13"] for entry in report.per_t]
    med045 = [entry["median_drift_t045"] for entry in report.per_t]

    # clause 1: the t^(1/3)-normalized excess diverges
    if not any(v.name == "drift-t13-increasing" and v.passed for v in report.verdicts):
        report = run_noncentral_drift(
            ExperimentSpec(1.0, 2.5, SlopeBand(1.0, 3.0), (200.0, 400.0, 800.0, 1600.0), 200, 809),
            jobs=JOBS,
        )
        med13 = [entry["median_drift_t13"] for entry in report.per_t]
        med045 = [entry["median_drift_t045"] for entry in report.per_t]
    assert all(a < b for a, b in zip(med13, med13[1:])), f"medians/t^(1/3) not increasing: {med13}"
    _announce("8", "non-central drift [t^(1/3) clause]", f"medians {['%.3f' % m for m in med13]}")

    # clause 2 as stated: the t^0.45-normalized medians must decrease.  Multi-
    # seed pilots show the opposite at this pinned scale (the effective drift
    # exponent over t in [200, 1600] is ~0.52 > 0.45, so the statistic still
    # grows; the limiting vanishing only bites at much larger t).  Asserted
    # faithfully; an honest failure here is a recorded spec-scale defect, not
    # an implementation bug.  See the decisions ledger.
    assert all(abs(a) > abs(b) for a, b in zip(med045, med045[1:])), (
        f"medians/t^0.45 do not decrease at desk scale: {['%.4f' % m for m in med045]} "
        "(structural at t <= 1600: effective drift exponent ~0.52 exceeds 0.45; "
        "confirmed on independent seeds 888/31337)"
    )
    _announce("8", "non-central drift [t^0.45 clause]", f"medians {['%.4f' % m for m in med045]}")


def test_criterion_09_stationarity():
    def attempt(seed):
        return run_stationarity(
            1.0, (5.0, 55.0, 5.0, 55.0), reps=2000, seed=seed, jobs=JOBS, corr_tol=0.07
        )

    report, tries = _with_rerun(attempt, (909, 910), _failed_names)
    assert report.passed, f"failed verdicts: {_failed_names(report)}"
    _announce(
        "9",
        "boundary stationarity",
        f"source mean {report.stats['mean_source_increment']:.2f} (target 50), "
        f"sink mean {report.stats['mean_sink_increment']:.2f} (target 50), "
        f"corr {report.stats['correlation']:.3f}, attempt {tries}",
    )


def test_criterion_10_crossing():
    t0 = time.time()
    report = run_crossing(500, seed=1010, probes_per_config=20)
    elapsed = time.time() - t0
    assert report.stats["retained"] == 500
    assert report.stats["violations"] == 0, f"{report.stats['violations']} violations"
    assert elapsed < 300.0, f"runtime {elapsed:.0f}s exceeds 5 min"
    _announce(
        "10", "crossing inequality",
        f"500 configs, {report.stats['skipped']} skipped (Z=0), 0 violations, {elapsed:.0f}s",
    )


def test_criterion_11_parallelogram_gap():
    def attempt(seed):
        spec = ExperimentSpec(1.0, 1.0, SlopeBand(0.5, 2.0), (200.0, 400.0, 800.0), 100, seed)
        return run_parallelogram_gap(spec, jobs=JOBS)

    report, tries = _with_rerun(attempt, (1111, 1112), _failed_names)
    assert (report.column("gap") >= 0).all(), "rectangle chain exceeded parallelogram chain"
    _announce("11", "parallelogram gap [nonnegativity]", "gap >= 0 in every replicate")

    meds = [entry["median_gap_scaled"] for entry in report.per_t]
    means = [entry["mean_gap_scaled"] for entry in report.per_t]
    # Monotonicity clause as stated: median gap/t^(1/3) nonincreasing.  The
    # gap is a small integer at these t, and its population median steps from
    # 2 to 3 inside the pinned grid, so the scaled-median sequence sawtooths
    # for most seeds (7/7 pilot seeds failed) even though the scaled mean
    # decays cleanly.  Asserted faithfully; an honest failure here is a
    # recorded defect of the prescribed statistic at desk scale.  See the
    # decisions ledger.
    assert all(a >= b for a, b in zip(meds, meds[1:])), (
        f"median gap/t^(1/3) not nonincreasing: {['%.3f' % m for m in meds]} "
        f"(integer-median step artifact; the scaled MEAN decays: {['%.3f' % m for m in means]})"
    )
    _announce("11", "parallelogram gap [monotone]", f"medians {['%.3f' % m for m in meds]}, attempt {tries}")


def test_criterion_12_engineering_throughput():
    side = math.sqrt(1e7)
    cloud = sample_poisson_rect(Rect(0.0, side, 0.0, side), 1.0, 1212)
    assert len(cloud) > 9_500_000
    t0 = time.perf_counter()
    result = longest_chain_standard(cloud)
    elapsed = time.perf_counter() - t0
    assert elapsed <= 10.0, f"chain on {len(cloud)} points took {elapsed:.1f}s (> 10 s)"
    assert result.length == len(result.path)
    _announce(
        "12", "engineering throughput",
        f"{len(cloud):,} points in {elapsed:.2f}s on the {kernels.backend()} backend",
    )
