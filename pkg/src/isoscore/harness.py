"""Essential-property experiments run against all five metrics.

Each experiment sweeps one parameter of a synthetic distribution, scores
every metric at every sweep point, and applies a pass/fail predicate to
each metric's series.  The predicates and their thresholds are module
constants and are copied into every report.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .baselines import (
    CosSimConfig,
    IdConfig,
    avg_random_cos_sim,
    default_varex_k,
    id_score,
    partition_score,
    varex_from_spectrum,
)
from .core import (
    METRICS,
    IsoScoreError,
    MissingOutcomeError,
    SyntheticSpec,
    TestOutcome,
    validate_point_cloud,
)
from .linalg import covariance, pca_reorient, rotate2d_embedded, sym_eigen
from .score import isoscore
from .synthgen import generate, ink_diagonal, sample_correlated_2d, skewered_meatball

# -- thresholds ------------------------------------------------------------------

SPREAD_TOL = 0.05  # mean and scalar invariance
SCALAR_FLOOR = 0.95
MONOTONE_STEP_TOL = 0.01  # max-variance test, per step
FINAL_RATIO_MAX = 0.2
ROTATION_SPREAD_TOL = 0.02
FRACTION_TOL = 0.05
HIGHDIM_BAND = (0.9, 1.0)
GLOBAL_STEP_TOL = 0.02
GLOBAL_START_MAX = 0.4
GLOBAL_END_MIN = 0.9
CROSSING_WINDOW = 0.25  # relative to line_count

THRESHOLDS = {
    "spread_tol": SPREAD_TOL,
    "scalar_floor": SCALAR_FLOOR,
    "monotone_step_tol": MONOTONE_STEP_TOL,
    "final_ratio_max": FINAL_RATIO_MAX,
    "rotation_spread_tol": ROTATION_SPREAD_TOL,
    "fraction_tol": FRACTION_TOL,
    "highdim_band": list(HIGHDIM_BAND),
    "global_step_tol": GLOBAL_STEP_TOL,
    "global_start_max": GLOBAL_START_MAX,
    "global_end_min": GLOBAL_END_MIN,
    "crossing_window": CROSSING_WINDOW,
}

TEST_IDS = ("1", "2", "3", "4", "5a", "5b", "6")
MATRIX_ROWS = ("1", "2", "3", "4", "5", "6")
ROW_PARTS = {"1": ("1",), "2": ("2",), "3": ("3",), "4": ("4",), "5": ("5a", "5b"), "6": ("6",)}

# Expected pass/fail pattern, rows 1-6 by metric.
REFERENCE_MATRIX = {
    "1": {"isoscore": True, "avg_cos_sim": False, "partition": False, "id_score": True, "varex": True},
    "2": {"isoscore": True, "avg_cos_sim": False, "partition": False, "id_score": True, "varex": True},
    "3": {"isoscore": True, "avg_cos_sim": False, "partition": True, "id_score": False, "varex": False},
    "4": {"isoscore": True, "avg_cos_sim": True, "partition": False, "id_score": True, "varex": True},
    "5": {"isoscore": True, "avg_cos_sim": False, "partition": False, "id_score": False, "varex": False},
    "6": {"isoscore": True, "avg_cos_sim": False, "partition": True, "id_score": True, "varex": False},
}

NOTES = [
    "Row 4 avg_cos_sim follows the reference matrix (pass); the verdict is spread based only.",
    "Row 4 varex is judged on spread only; its level depends on the k convention.",
    "Row 5 passes only if both the fraction sweep (5a) and the dimension sweep (5b) pass.",
]

ROTATION_VARIANTS = ("X", "X^120", "X^240", "X^PCA")


# -- configuration ----------------------------------------------------------------


def _inclusive(start: int, stop: int, step: int) -> list[int]:
    """``start, start+step, ...`` always ending exactly at ``stop``."""
    vals = list(range(start, stop + 1, step))
    if vals[-1] != stop:
        vals.append(stop)
    return vals


DESK_GRIDS = {
    "1": _inclusive(0, 20, 2),
    "2": _inclusive(1, 25, 3),
    "3": _inclusive(1, 75, 5),
    "5a": _inclusive(1, 25, 2),
    "5b": _inclusive(2, 100, 5),
    "6": [0, 250, 500, 750, 1000, 1250, 1500, 2000, 3000, 5000, 10000, 20000, 50000, 100000, 150000],
}

PAPER_GRIDS = {
    "1": _inclusive(0, 20, 1),
    "2": _inclusive(1, 25, 1),
    "3": _inclusive(1, 75, 1),
    "5a": _inclusive(1, 25, 1),
    "5b": _inclusive(2, 100, 1),
    "6": sorted(set(_inclusive(0, 150_000, 1000)) | {250, 500, 750, 1250, 1500}),
}


@dataclass(frozen=True)
class HarnessConfig:
    """Sample sizes, seeds and metric options for one harness run."""

    scale: str = "desk"
    count: int = 20_000
    seed: int = 0
    pairs: int = 100_000
    partition_basis: str = "rows"
    id_k_min: int = 5
    id_k_max: int = 20
    id_max_queries: int = 5000
    line_count: int = 1000
    workers: int = 1
    grids: dict = field(default_factory=lambda: {k: list(v) for k, v in DESK_GRIDS.items()})

    @classmethod
    def for_scale(cls, scale: str, **overrides) -> "HarnessConfig":
        if scale == "desk":
            cfg = cls()
        elif scale == "paper":
            cfg = cls(scale="paper", count=100_000, grids={k: list(v) for k, v in PAPER_GRIDS.items()})
        else:
            raise ValueError(f"scale must be 'desk' or 'paper', got {scale!r}")
        return replace(cfg, **overrides)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")  # does not affect results
        return d


def derive_seed(base: int, *keys: int) -> int:
    return int(np.random.SeedSequence([base, *keys]).generate_state(1, np.uint64)[0])


# -- scoring ------------------------------------------------------------------------


def score_all(X, cfg: HarnessConfig, seed: int) -> dict[str, float]:
    """All five metrics on one cloud; a metric that raises scores NaN."""
    X = validate_point_cloud(X)
    out = {}
    calls = {
        "isoscore": lambda: isoscore(X).score,
        "avg_cos_sim": lambda: avg_random_cos_sim(X, CosSimConfig(seed=seed, pairs=cfg.pairs)),
        "partition": lambda: partition_score(X, basis=cfg.partition_basis),
        "id_score": lambda: id_score(
            X, IdConfig(cfg.id_k_min, cfg.id_k_max, cfg.id_max_queries, seed=seed)
        ),
        "varex": lambda: varex_from_spectrum(
            sym_eigen(covariance(X)).eigenvalues, default_varex_k(X.n)
        ),
    }
    for m in METRICS:
        try:
            out[m] = float(calls[m]())
        except IsoScoreError:
            out[m] = math.nan
    return out


_TEST_NO = {"1": 1, "2": 2, "3": 3, "4": 4, "5a": 5, "5b": 6, "6": 7}


def _cloud(test_id: str, value, cfg: HarnessConfig):
    t = _TEST_NO[test_id]
    if test_id == "4":
        X = sample_correlated_2d(0.8, cfg.count, derive_seed(cfg.seed, t, 0))
        if value == "X^PCA":
            return pca_reorient(X)
        if value != "X":
            return rotate2d_embedded(X, float(value[2:]))
        return X
    seed = derive_seed(cfg.seed, t, int(value))
    if test_id == "1":
        return generate(SyntheticSpec("gaussian_diag", 10, cfg.count, seed, mean=float(value)))
    if test_id == "2":
        return generate(SyntheticSpec("gaussian_diag", 5, cfg.count, seed, mean=3.0, cov_diag=float(value)))
    if test_id == "3":
        diag = np.ones(10)
        diag[0] = value
        return generate(SyntheticSpec("gaussian_diag", 10, cfg.count, seed, cov_diag=tuple(diag)))
    if test_id == "5a":
        return generate(SyntheticSpec("ink", 25, cfg.count, seed, cov_diag=tuple(ink_diagonal(25, value)), k=value))
    if test_id == "5b":
        return generate(SyntheticSpec("gaussian_diag", int(value), cfg.count, seed))
    if test_id == "6":
        return skewered_meatball(cfg.line_count, int(value), seed)
    raise ValueError(f"unknown test {test_id!r}")


def _metric_seed(test_id: str, value, cfg: HarnessConfig) -> int:
    # rotation variants share one metric seed so only the geometry changes
    key = 0 if test_id == "4" else int(value)
    return derive_seed(cfg.seed, _TEST_NO[test_id], key, 1)


def _evaluate(job) -> dict[str, float]:
    test_id, value, cfg = job
    return score_all(_cloud(test_id, value, cfg), cfg, _metric_seed(test_id, value, cfg))


def _sweep(test_id: str, values: list, cfg: HarnessConfig, pool=None) -> dict[str, list[float]]:
    jobs = [(test_id, v, cfg) for v in values]
    results = list(pool.map(_evaluate, jobs)) if pool is not None else [_evaluate(j) for j in jobs]
    return {m: [r[m] for r in results] for m in METRICS}


# -- predicates ---------------------------------------------------------------------


def _finite(s) -> bool:
    return all(math.isfinite(x) for x in s)


def spread(s) -> float:
    return max(s) - min(s)


def verdict_spread(s, tol: float, floor: float | None = None):
    if not _finite(s):
        return False, "metric failed on some cloud"
    if spread(s) > tol:
        return False, f"spread {spread(s):.4f} > {tol}"
    if floor is not None and min(s) < floor:
        return False, f"min {min(s):.4f} < {floor}"
    return True, None


def verdict_decreasing(s):
    if not _finite(s):
        return False, "metric failed on some cloud"
    rises = np.diff(s)
    if np.max(rises) > MONOTONE_STEP_TOL:
        return False, f"increase of {np.max(rises):.4f} between steps"
    if s[-1] > FINAL_RATIO_MAX * s[0]:
        return False, f"final {s[-1]:.4f} > {FINAL_RATIO_MAX} * initial {s[0]:.4f}"
    return True, None


def verdict_tracks(s, target):
    if not _finite(s):
        return False, "metric failed on some cloud"
    err = np.abs(np.asarray(s) - np.asarray(target))
    if err.max() > FRACTION_TOL:
        i = int(err.argmax())
        return False, f"off target by {err[i]:.4f} at sweep index {i}"
    return True, None


def verdict_band(s, lo: float, hi: float):
    if not _finite(s):
        return False, "metric failed on some cloud"
    if min(s) < lo or max(s) > hi:
        return False, f"range [{min(s):.4f}, {max(s):.4f}] leaves [{lo}, {hi}]"
    return True, None


def crossing_point(xs, s, level: float = 0.5) -> float | None:
    """First sweep value where ``s`` rises through ``level`` (linear interpolation)."""
    for i in range(1, len(s)):
        if s[i - 1] < level <= s[i]:
            x0, x1, y0, y1 = xs[i - 1], xs[i], s[i - 1], s[i]
            return float(x0 + (level - y0) * (x1 - x0) / (y1 - y0))
    if s and s[0] >= level:
        return float(xs[0])
    return None


def verdict_global(xs, s, line_count: int):
    if not _finite(s):
        return False, "metric failed on some cloud"
    drops = -np.diff(s)
    if np.max(drops) > GLOBAL_STEP_TOL:
        return False, f"decrease of {np.max(drops):.4f} between steps"
    if s[0] > GLOBAL_START_MAX:
        return False, f"start {s[0]:.4f} > {GLOBAL_START_MAX}"
    if s[-1] < GLOBAL_END_MIN:
        return False, f"end {s[-1]:.4f} < {GLOBAL_END_MIN}"
    x = crossing_point(xs, list(s))
    lo, hi = (1 - CROSSING_WINDOW) * line_count, (1 + CROSSING_WINDOW) * line_count
    if x is None or not lo <= x <= hi:
        return False, f"0.5 crossing at {x} outside [{lo:g}, {hi:g}]"
    return True, None


# -- the experiments -------------------------------------------------------------------


def _outcome(test_id, name, values, scores, judge, details=None) -> TestOutcome:
    verdicts = {m: judge(scores[m]) for m in METRICS}
    return TestOutcome(test_id, name, list(values), scores, verdicts, details or {})


def test_mean_invariance(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    """10-D standard Gaussian shifted to mean ``mu * 1``; scores should not move."""
    xs = cfg.grids["1"]
    return _outcome("1", "mu", xs, _sweep("1", xs, cfg, pool), lambda s: verdict_spread(s, SPREAD_TOL))


def test_scalar_invariance(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    """Covariance ``lambda * I_5`` with mean ``3 * 1``: constant and near 1."""
    xs = cfg.grids["2"]
    return _outcome(
        "2", "lambda", xs, _sweep("2", xs, cfg, pool), lambda s: verdict_spread(s, SPREAD_TOL, SCALAR_FLOOR)
    )


def test_max_variance(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    """10-D Gaussian with one variance ``x`` and the rest 1; scores should fall toward 0."""
    xs = cfg.grids["3"]
    return _outcome("3", "x", xs, _sweep("3", xs, cfg, pool), verdict_decreasing)


def test_rotation_invariance(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    """Correlated 2-D Gaussian (rho = 0.8), rotated by 120 and 240 degrees and PCA-reoriented."""
    xs = list(ROTATION_VARIANTS)
    return _outcome(
        "4", "variant", xs, _sweep("4", xs, cfg, pool), lambda s: verdict_spread(s, ROTATION_SPREAD_TOL)
    )


def test_dims_used_fraction(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    n = 25
    xs = cfg.grids["5a"]
    target = [(k - 1) / (n - 1) for k in xs]
    return _outcome(
        "5a", "k", xs, _sweep("5a", xs, cfg, pool), lambda s: verdict_tracks(s, target), {"n": n, "target": target}
    )


def test_dims_used_highdim(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    xs = cfg.grids["5b"]
    return _outcome("5b", "n", xs, _sweep("5b", xs, cfg, pool), lambda s: verdict_band(s, *HIGHDIM_BAND))


def test_global_stability(cfg: HarnessConfig = HarnessConfig(), pool=None) -> TestOutcome:
    """Skewered meatball: a fixed line plus a growing isotropic ball.

    A global estimator starts near 0 (just the line), ends near 1 (the
    ball dominates) and reaches 0.5 when both parts hold about as many points.
    """
    xs = cfg.grids["6"]
    scores = _sweep("6", xs, cfg, pool)
    details = {
        "line_count": cfg.line_count,
        "crossing": {m: crossing_point(xs, scores[m]) if _finite(scores[m]) else None for m in METRICS},
    }
    return _outcome("6", "ball_count", xs, scores, lambda s: verdict_global(xs, s, cfg.line_count), details)


TESTS = {
    "1": test_mean_invariance,
    "2": test_scalar_invariance,
    "3": test_max_variance,
    "4": test_rotation_invariance,
    "5a": test_dims_used_fraction,
    "5b": test_dims_used_highdim,
    "6": test_global_stability,
}


def expand_tests(selection) -> list[str]:
    """Map row numbers (``"5"`` means both sweeps) to experiment ids."""
    out = []
    for t in selection:
        t = str(t).strip()
        parts = ROW_PARTS.get(t, (t,) if t in TESTS else None)
        if parts is None:
            raise ValueError(f"unknown test {t!r}; choose from 1-6")
        out.extend(p for p in parts if p not in out)
    return [t for t in TEST_IDS if t in out]


def run_tests(selection=MATRIX_ROWS, cfg: HarnessConfig = HarnessConfig()) -> list[TestOutcome]:
    ids = expand_tests(selection)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            return [TESTS[t](cfg, pool) for t in ids]
    return [TESTS[t](cfg) for t in ids]


# -- report -------------------------------------------------------------------------


def build_score_matrix(outcomes: list[TestOutcome], rows=MATRIX_ROWS) -> dict[str, dict[str, bool]]:
    """Pass/fail per row and metric; row 5 needs both of its sweeps to pass."""
    by_id = {o.test_id: o for o in outcomes}
    matrix = {}
    for r in rows:
        missing = [p for p in ROW_PARTS[r] if p not in by_id]
        if missing:
            raise MissingOutcomeError(f"row {r} needs outcome(s) {missing}")
        matrix[r] = {m: all(by_id[p].verdicts[m][0] for p in ROW_PARTS[r]) for m in METRICS}
    return matrix


def rows_covered(outcomes: list[TestOutcome]) -> list[str]:
    ids = {o.test_id for o in outcomes}
    return [r for r in MATRIX_ROWS if all(p in ids for p in ROW_PARTS[r])]


def isoscore_column_ok(outcomes: list[TestOutcome]) -> bool:
    return all(o.verdicts["isoscore"][0] for o in outcomes)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def build_report(outcomes: list[TestOutcome], cfg: HarnessConfig) -> dict:
    rows = rows_covered(outcomes)
    matrix = build_score_matrix(outcomes, rows)
    agreement = {r: {m: matrix[r][m] == REFERENCE_MATRIX[r][m] for m in METRICS} for r in rows}
    return _json_safe(
        {
            "config": cfg.to_dict(),
            "thresholds": THRESHOLDS,
            "outcomes": [o.to_dict() for o in outcomes],
            "matrix": matrix,
            "reference_matrix": {r: REFERENCE_MATRIX[r] for r in rows},
            "agreement": agreement,
            "cells_matching": sum(v for row in agreement.values() for v in row.values()),
            "cells_total": len(rows) * len(METRICS),
            "isoscore_column_pass": isoscore_column_ok(outcomes),
            "notes": NOTES,
        }
    )


def write_report(outcomes: list[TestOutcome], cfg: HarnessConfig, out_dir) -> dict:
    """Write ``report.json`` and ``curves.csv`` into ``out_dir``; returns the report."""
    os.makedirs(out_dir, exist_ok=True)
    report = build_report(outcomes, cfg)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "curves.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["test_id", "metric", "sweep_value", "score"])
        for o in outcomes:
            for m in METRICS:
                for x, s in zip(o.sweep_values, o.scores[m]):
                    w.writerow([o.test_id, m, x, repr(s) if math.isfinite(s) else ""])
    return report


def format_matrix(matrix: dict, reference: dict | None = None) -> str:
    """Plain-text table; a trailing ``*`` marks disagreement with the reference."""
    head = f"{'test':<6}" + "".join(f"{m:>13}" for m in METRICS)
    lines = [head]
    for r, row in matrix.items():
        cells = []
        for m in METRICS:
            mark = "pass" if row[m] else "fail"
            if reference is not None and reference[r][m] != row[m]:
                mark += "*"
            cells.append(f"{mark:>13}")
        lines.append(f"{r:<6}" + "".join(cells))
    return "\n".join(lines)
