"""Isotropy metrics for point clouds: IsoScore and four baselines."""

from .baselines import (
    CosSimConfig,
    IdConfig,
    avg_random_cos_sim,
    id_score,
    metric_report,
    mle_intrinsic_dim,
    partition_score,
    varex_score,
)
from .core import (
    IsoScoreError,
    IsotropyResult,
    MetricReport,
    PointCloud,
    SyntheticSpec,
    TestOutcome,
    validate_point_cloud,
)
from .linalg import covariance, pca, pca_reorient, rotate2d_embedded, sym_eigen
from .score import dims_utilized, isoscore, isoscore_from_covariance, isotropy_defect
from .synthgen import generate

__version__ = "0.1.0"

__all__ = [
    "CosSimConfig",
    "IdConfig",
    "IsoScoreError",
    "IsotropyResult",
    "MetricReport",
    "PointCloud",
    "SyntheticSpec",
    "TestOutcome",
    "avg_random_cos_sim",
    "covariance",
    "dims_utilized",
    "generate",
    "id_score",
    "isoscore",
    "isoscore_from_covariance",
    "isotropy_defect",
    "metric_report",
    "mle_intrinsic_dim",
    "partition_score",
    "pca",
    "pca_reorient",
    "rotate2d_embedded",
    "sym_eigen",
    "validate_point_cloud",
    "varex_score",
]
