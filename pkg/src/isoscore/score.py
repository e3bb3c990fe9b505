"""IsoScore: how uniformly a point cloud spreads its variance over ambient dimensions.

The pipeline is PCA reorientation, the variance vector of the reoriented
cloud, length normalization to ``sqrt(n)``, the isotropy defect (distance
to the all-ones vector, rescaled into [0, 1]), the number of dimensions
that defect corresponds to, and finally an affine rescale of that fraction
onto [0, 1].
"""

from __future__ import annotations

import numpy as np

from .core import DegenerateCovarianceError, IsotropyResult, PointCloud, validate_point_cloud
from .linalg import covariance, pca

NORM_FLOOR = 1e-300
DECORRELATION_REL = 1e-8


def variance_vector(X_pca: PointCloud) -> np.ndarray:
    """Diagonal of the covariance of an already PCA-reoriented cloud."""
    cov = covariance(X_pca)
    diag = np.diag(cov).copy()
    off = cov - np.diag(diag)
    assert np.max(np.abs(off)) <= DECORRELATION_REL * max(diag.max(), 0.0) + 1e-300, (
        "variance_vector expects a PCA-reoriented cloud"
    )
    if not np.any(diag > 0):
        raise DegenerateCovarianceError("all variances are zero")
    return diag


def normalize_variance_vector(sigma_d: np.ndarray) -> np.ndarray:
    """Rescale to Euclidean length ``sqrt(n)``."""
    sigma_d = np.asarray(sigma_d, dtype=np.float64)
    if np.any(sigma_d < 0):
        raise ValueError("variance vector must be nonnegative")
    norm = np.linalg.norm(sigma_d)
    if not norm >= NORM_FLOOR:
        raise DegenerateCovarianceError(f"variance vector norm {norm:g} is degenerate")
    return np.sqrt(len(sigma_d)) * sigma_d / norm


def isotropy_defect(sigma_hat: np.ndarray) -> float:
    """``||sigma_hat - 1|| / sqrt(2 (n - sqrt n))``, clamped to [0, 1].

    0 is a perfectly isotropic variance vector; 1 is all variance on one axis.
    """
    sigma_hat = np.asarray(sigma_hat, dtype=np.float64)
    n = len(sigma_hat)
    if n < 2:
        raise ValueError("need n >= 2")
    if abs(np.linalg.norm(sigma_hat) - np.sqrt(n)) > 1e-9 * np.sqrt(n):
        raise ValueError("sigma_hat must have norm sqrt(n)")
    delta = np.linalg.norm(sigma_hat - 1.0) / np.sqrt(2.0 * (n - np.sqrt(n)))
    return float(min(max(delta, 0.0), 1.0))


def dims_utilized(defect: float, n: int) -> float:
    """Approximate count of uniformly used dimensions, in [1, n]."""
    if not 0.0 <= defect <= 1.0:
        raise ValueError(f"defect must lie in [0, 1], got {defect}")
    k = (n - defect**2 * (n - np.sqrt(n))) ** 2 / n
    return float(min(max(k, 1.0), n))


def dims_from_score(iota: float, n: int) -> float:
    """Invert the final rescale: a score of ``iota`` means about ``iota*n + 1 - iota`` dimensions."""
    if not 0.0 <= iota <= 1.0:
        raise ValueError(f"score must lie in [0, 1], got {iota}")
    return iota * n + 1.0 - iota


def _from_variances(sigma_d: np.ndarray) -> IsotropyResult:
    n = len(sigma_d)
    if n < 2:
        raise ValueError("need n >= 2")
    sigma_hat = normalize_variance_vector(sigma_d)
    delta = isotropy_defect(sigma_hat)
    k = dims_utilized(delta, n)
    phi = k / n
    iota = (n * phi - 1.0) / (n - 1.0)
    return IsotropyResult(
        variance_vector=sigma_d,
        normalized_variance_vector=sigma_hat,
        defect=delta,
        dims_utilized=k,
        fraction_utilized=phi,
        score=float(iota),
    )


def isoscore(X: PointCloud) -> IsotropyResult:
    """Full IsoScore computation on a point cloud (deterministic, no sampling)."""
    X = validate_point_cloud(X)
    X_pca, _ = pca(X)
    return _from_variances(variance_vector(X_pca))


def isoscore_from_covariance(cov_diag, n: int | None = None) -> IsotropyResult:
    """IsoScore of an already-diagonal covariance spectrum.

    This is the exact, population-level path: it skips sampling and PCA and
    starts from the variance vector itself.  Order of entries is irrelevant.
    """
    sigma_d = np.array(cov_diag, dtype=np.float64).ravel()
    if n is not None and n != len(sigma_d):
        raise ValueError(f"cov_diag has {len(sigma_d)} entries but n={n}")
    if np.any(sigma_d < 0):
        raise ValueError("cov_diag must be nonnegative")
    return _from_variances(sigma_d)

