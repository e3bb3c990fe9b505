"""Domain types shared across the package.

Every metric takes a :class:`PointCloud`: an ``N x n`` float64 matrix with one
point per row.  Validation is purely structural; degeneracy of the second
moments is detected by the metric that divides by them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

METRICS = ("isoscore", "avg_cos_sim", "partition", "id_score", "varex")

FAMILIES = (
    "gaussian_diag",
    "gaussian_corr2d",
    "ink",
    "skewered_meatball",
    "uniform",
    "poisson",
    "student_t",
    "chi_square",
)


class IsoScoreError(ValueError):
    """Base class for every error raised by this package."""


class NonFiniteError(IsoScoreError):
    pass


class TooFewPointsError(IsoScoreError):
    pass


class DimensionTooSmallError(IsoScoreError):
    pass


class DegenerateCovarianceError(IsoScoreError):
    pass


class NotSymmetricError(IsoScoreError):
    pass


class BadPlaneError(IsoScoreError):
    pass


class BadKError(IsoScoreError):
    pass


class BadCorrelationError(IsoScoreError):
    pass


class BadFamilyError(IsoScoreError):
    pass


class EmptyError(IsoScoreError):
    pass


class AllZeroVectorsError(IsoScoreError):
    pass


class DuplicatePointsError(IsoScoreError):
    pass


class MissingOutcomeError(IsoScoreError):
    pass


class ParseError(IsoScoreError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BadMagicError(IsoScoreError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    """A validated, read-only ``N x n`` point cloud."""

    data: np.ndarray

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def count(self) -> int:
        return self.data.shape[0]

    N = count

    def __len__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return f"PointCloud(n={self.n}, N={self.count})"


def validate_point_cloud(data: Any) -> PointCloud:
    """Check the admissibility rules and wrap ``data`` in a :class:`PointCloud`.

    Raises NonFiniteError, TooFewPointsError or DimensionTooSmallError.
    A cloud whose points all coincide is accepted here; metrics reject it.
    """
    if isinstance(data, PointCloud):
        return data
    a = np.asarray(data, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionTooSmallError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("point cloud contains NaN or Inf entries")
    if a.shape[0] < 2:
        raise TooFewPointsError(f"need at least 2 points, got {a.shape[0]}")
    if a.shape[1] < 2:
        raise DimensionTooSmallError(f"need dimension n >= 2, got {a.shape[1]}")
    return PointCloud(_frozen(a))


@dataclass(frozen=True, eq=False)
class IsotropyResult:
    """Every intermediate quantity of the IsoScore computation."""

    variance_vector: np.ndarray
    normalized_variance_vector: np.ndarray
    defect: float
    dims_utilized: float
    fraction_utilized: float
    score: float

    @property
    def n(self) -> int:
        return len(self.variance_vector)

    def to_dict(self) -> dict:
        return {
            "variance_vector": self.variance_vector.tolist(),
            "normalized_variance_vector": self.normalized_variance_vector.tolist(),
            "defect": self.defect,
            "dims_utilized": self.dims_utilized,
            "fraction_utilized": self.fraction_utilized,
            "score": self.score,
        }


@dataclass(frozen=True)
class MetricReport:
    metric: str
    value: float
    config: Mapping[str, Any] = field(default_factory=dict)
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if not np.isfinite(self.value):
            raise ValueError(f"{self.metric} value is not finite: {self.value}")

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "value": float(self.value),
            "config": dict(self.config),
            "diagnostics": dict(self.diagnostics),
        }


@dataclass(frozen=True)
class SyntheticSpec:
    """Declarative recipe for a generated point cloud.

    ``count`` is a single int, or ``(line_count, ball_count)`` for the
    skewered meatball.  ``cov_diag`` may be a scalar (``lambda * I_n``) or a
    length-n sequence.  ``seed`` is mandatory.
    """

    family: str
    n: int
    count: int | tuple[int, int]
    seed: int
    mean: float | Sequence[float] = 0.0
    cov_diag: float | Sequence[float] = 1.0
    corr: float = 0.0
    k: int | None = None
    rotation_deg: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadFamilyError(f"unknown family {self.family!r}")
        if self.seed is None:
            raise ValueError("seed is mandatory")
        if self.family == "ink":
            if self.k is None or not 1 <= self.k <= self.n:
                raise BadKError(f"k must be in 1..{self.n}, got {self.k}")
        cov = np.asarray(self.cov_diag, dtype=np.float64)
        if np.any(cov < 0):
            raise ValueError("cov_diag entries must be nonnegative")

    def mean_vector(self) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.mean, dtype=np.float64), (self.n,)).copy()

    def cov_vector(self) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.cov_diag, dtype=np.float64), (self.n,)).copy()

    def to_dict(self) -> dict:
        def plain(v):
            if isinstance(v, (tuple, list, np.ndarray)):
                return [plain(x) for x in v]
            if isinstance(v, np.generic):
                return v.item()
            return v

        return {k: plain(v) for k, v in self.__dict__.items()}


@dataclass
class TestOutcome:
    """Score series of one essential-property experiment plus per-metric verdicts.

    ``verdicts`` maps metric name to ``(passed, violated_predicate_or_None)``.
    """

    __test__ = False  # not a pytest class

    test_id: str
    sweep_name: str
    sweep_values: list
    scores: dict[str, list[float]]
    verdicts: dict[str, tuple[bool, str | None]]
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.scores.values()}
        if lengths and lengths != {len(self.sweep_values)}:
            raise ValueError("score series must align with the sweep")

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "sweep_parameter": {"name": self.sweep_name, "values": list(self.sweep_values)},
            "scores": {m: [float(x) for x in s] for m, s in self.scores.items()},
            "verdicts": {
                m: {"pass": bool(ok), "violated": why} for m, (ok, why) in self.verdicts.items()
            },
            "details": self.details,
        }
