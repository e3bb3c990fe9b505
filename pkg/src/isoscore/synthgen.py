"""Seeded synthetic point clouds for the validation experiments.

All randomness comes from numpy's Philox4x64-10 counter-based generator
keyed by ``SeedSequence(seed)``.  Gaussian coordinates use Box-Muller on
the generator's uniform doubles, filled row-major, so a given seed fixes
the cloud bit for bit.
"""

from __future__ import annotations

import numpy as np

from .core import (
    BadCorrelationError,
    BadFamilyError,
    BadKError,
    EmptyError,
    PointCloud,
    SyntheticSpec,
    validate_point_cloud,
)
from .linalg import rotate2d_embedded

NONGAUSSIAN = ("uniform", "poisson", "student_t", "chi_square")
POISSON_LAM = 4.0
STUDENT_T_DF = 5.0
CHI_SQUARE_DF = 3.0

# skewered meatball: line points t * (1, 1, 1), t ~ U(-sqrt 3, sqrt 3)
LINE_DIRECTION = np.ones(3)
LINE_HALF_WIDTH = np.sqrt(3.0)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def box_muller(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Standard normals, two per pair of uniforms."""
    m = int(np.prod(shape))
    h = (m + 1) // 2
    u1 = rng.random(h)
    u2 = rng.random(h)
    r = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 lies in (0, 1]
    theta = 2.0 * np.pi * u2
    z = np.empty(2 * h)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:m].reshape(shape)


def _cloud(a: np.ndarray) -> PointCloud:
    return validate_point_cloud(a)


def sample_gaussian_diag(spec: SyntheticSpec) -> PointCloud:
    """``N(mean, diag(cov_diag))``; zero-variance coordinates equal the mean exactly."""
    if spec.family not in ("gaussian_diag", "ink"):
        raise BadFamilyError(f"sample_gaussian_diag cannot draw family {spec.family!r}")
    z = box_muller(make_rng(spec.seed), (int(spec.count), spec.n))
    X = _cloud(spec.mean_vector() + z * np.sqrt(spec.cov_vector()))
    if spec.rotation_deg is not None:
        X = rotate2d_embedded(X, spec.rotation_deg)
    return X


def ink_diagonal(n: int, k: int) -> np.ndarray:
    """Diagonal of I_n^(k): k leading ones, then zeros."""
    if not 1 <= k <= n:
        raise BadKError(f"k must be in 1..{n}, got {k}")
    d = np.zeros(n)
    d[:k] = 1.0
    return d


def sample_ink(n: int, k: int, N: int, seed: int) -> PointCloud:
    """Zero-mean Gaussian with covariance I_n^(k): uniformly uses k of n axes."""
    spec = SyntheticSpec("ink", n=n, count=N, seed=seed, cov_diag=tuple(ink_diagonal(n, k)), k=k)
    return sample_gaussian_diag(spec)


def sample_correlated_2d(corr: float, N: int, seed: int, embed_n: int | None = None) -> PointCloud:
    """Zero-mean 2-D Gaussian with unit variances and correlation ``corr``."""
    if not abs(corr) < 1:
        raise BadCorrelationError(f"|corr| must be < 1, got {corr}")
    L = np.array([[1.0, 0.0], [corr, np.sqrt(1.0 - corr * corr)]])
    xy = box_muller(make_rng(seed), (N, 2)) @ L.T
    if embed_n is None or embed_n == 2:
        return _cloud(xy)
    if embed_n < 2:
        raise ValueError("embed_n must be >= 2")
    out = np.zeros((N, embed_n))
    out[:, :2] = xy
    return _cloud(out)


def skewered_meatball(line_count: int, ball_count: int, seed: int) -> PointCloud:
    """A line through the origin of R^3 plus an isotropic unit Gaussian ball.

    Line points are ``t * (1, 1, 1)`` with ``t`` uniform on ``[-sqrt 3, sqrt 3]``,
    so each coordinate of the line has unit variance, the same as the ball.
    """
    if line_count < 0 or ball_count < 0:
        raise ValueError("counts must be nonnegative")
    if line_count + ball_count < 2:
        raise EmptyError("need at least two points in total")
    rng = make_rng(seed)
    t = rng.uniform(-LINE_HALF_WIDTH, LINE_HALF_WIDTH, size=line_count)
    line = t[:, None] * LINE_DIRECTION
    ball = box_muller(rng, (ball_count, 3))
    return _cloud(np.vstack([line, ball]))


def sample_isotropic_nongaussian(family: str, n: int, N: int, seed: int) -> PointCloud:
    """i.i.d. coordinates, so the population covariance is a multiple of I_n.

    uniform on [-1, 1], Poisson(4), Student-t(5), chi-square(3).
    """
    rng = make_rng(seed)
    if family == "uniform":
        a = rng.uniform(-1.0, 1.0, size=(N, n))
    elif family == "poisson":
        a = rng.poisson(POISSON_LAM, size=(N, n)).astype(np.float64)
    elif family == "student_t":
        a = rng.standard_t(STUDENT_T_DF, size=(N, n))
    elif family == "chi_square":
        a = rng.chisquare(CHI_SQUARE_DF, size=(N, n))
    else:
        raise BadFamilyError(f"not an isotropic non-Gaussian family: {family!r}")
    return _cloud(a)


def generate(spec: SyntheticSpec) -> PointCloud:
    """Draw the cloud described by ``spec``."""
    f = spec.family
    if f == "gaussian_diag":
        X = sample_gaussian_diag(spec)
        return X
    if f == "ink":
        X = sample_ink(spec.n, spec.k, int(spec.count), spec.seed)
    elif f == "gaussian_corr2d":
        X = sample_correlated_2d(spec.corr, int(spec.count), spec.seed, embed_n=spec.n)
    elif f == "skewered_meatball":
        line_count, ball_count = spec.count
        X = skewered_meatball(line_count, ball_count, spec.seed)
    elif f in NONGAUSSIAN:
        X = sample_isotropic_nongaussian(f, spec.n, int(spec.count), spec.seed)
    else:
        raise BadFamilyError(f"unknown family {f!r}")
    if spec.rotation_deg is not None:
        X = rotate2d_embedded(X, spec.rotation_deg)
    return X
