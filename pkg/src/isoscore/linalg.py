"""Covariance, symmetric eigendecomposition, PCA reorientation, rotations."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .core import (
    BadPlaneError,
    DegenerateCovarianceError,
    NotSymmetricError,
    PointCloud,
    validate_point_cloud,
)

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
CLAMP_REL = 1e-9
SYMMETRY_REL = 1e-10
EPS = np.finfo(np.float64).eps


@dataclass(frozen=True, eq=False)
class EigenSpectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # column i pairs with eigenvalue i
    sweeps: int = 0


def mean_vector(X: PointCloud) -> np.ndarray:
    return validate_point_cloud(X).data.mean(axis=0)


def covariance(X: PointCloud, ddof: int = 1) -> np.ndarray:
    """Sample covariance centered at the sample mean, denominator ``N - ddof``."""
    a = validate_point_cloud(X).data
    centered = a - a.mean(axis=0)
    cov = centered.T @ centered / (a.shape[0] - ddof)
    cov = 0.5 * (cov + cov.T)
    if not np.any(cov):
        raise DegenerateCovarianceError("covariance matrix is exactly zero")
    return cov


def _round_robin(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Circle-method pairing of 0..m-1 (m even): m-1 rounds of m/2 disjoint pairs."""
    players = list(range(m))
    P, Q = [], []
    for _ in range(m - 1):
        p = np.array(players[: m // 2])
        q = np.array(players[m // 2 :][::-1])
        P.append(np.minimum(p, q))
        Q.append(np.maximum(p, q))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return np.array(P, dtype=np.int64), np.array(Q, dtype=np.int64)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


@numba.njit(cache=True)
def _jacobi_sweep(A, Vt, P, Q, eps):
    """One cyclic sweep, in place.  Rounds of disjoint pairs (P[r], Q[r])."""
    n = A.shape[0]
    for r in range(P.shape[0]):
        for i in range(P.shape[1]):
            p = P[r, i]
            q = Q[r, i]
            if q >= n:
                continue
            apq = A[p, q]
            if apq == 0.0:
                continue
            app = A[p, p]
            aqq = A[q, q]
            # below roundoff of the diagonal pair: annihilate without rotating
            if abs(apq) <= eps * np.sqrt(abs(app * aqq)):
                A[p, q] = 0.0
                A[q, p] = 0.0
                continue
            theta = (aqq - app) / (2.0 * apq)
            if theta == 0.0:
                t = 1.0
            elif abs(theta) > 1e150:
                t = 0.5 / theta
            else:
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- P^T A P with P_pp = P_qq = c, P_pq = s, P_qp = -s
            for k in range(n):
                akp = A[p, k]
                akq = A[q, k]
                A[p, k] = c * akp - s * akq
                A[q, k] = s * akp + c * akq
            for k in range(n):
                akp = A[k, p]
                akq = A[k, q]
                A[k, p] = c * akp - s * akq
                A[k, q] = s * akp + c * akq
            A[p, q] = 0.0
            A[q, p] = 0.0
            for k in range(n):
                vp = Vt[p, k]
                vq = Vt[q, k]
                Vt[p, k] = c * vp - s * vq
                Vt[q, k] = s * vp + c * vq


def sym_eigen(M: np.ndarray) -> EigenSpectrum:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Sweeps visit every index pair in a fixed round-robin order.  Iterates
    until the off-diagonal Frobenius norm drops below ``1e-12 * ||M||_F``
    (at most 100 sweeps).  Eigenvalues come back descending, tiny negative
    roundoff is clamped to zero, and each eigenvector is signed so that its
    largest-magnitude entry is positive.
    """
    M = np.array(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {M.shape}")
    scale = np.max(np.abs(M)) if M.size else 0.0
    if np.max(np.abs(M - M.T), initial=0.0) > SYMMETRY_REL * scale:
        raise NotSymmetricError("matrix is not symmetric")
    n = M.shape[0]
    A = 0.5 * (M + M.T)
    Vt = np.eye(n)
    fro = np.linalg.norm(A)
    sweeps = 0
    if n > 1 and fro > 0:
        P, Q = _round_robin(n + (n % 2))
        target = JACOBI_TOL * fro
        while _off_norm(A) > target and sweeps < JACOBI_MAX_SWEEPS:
            _jacobi_sweep(A, Vt, P, Q, EPS)
            sweeps += 1

    V = Vt.T
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="stable")
    vals, V = vals[order], V[:, order]
    if n and vals[0] > 0:
        vals[(vals < 0) & (vals >= -CLAMP_REL * vals[0])] = 0.0
    # sign convention: largest-magnitude entry of each eigenvector is positive
    lead = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[lead, np.arange(n)])
    signs[signs == 0] = 1.0
    V = V * signs
    return EigenSpectrum(vals, V, sweeps)


def pca(X: PointCloud) -> tuple[PointCloud, EigenSpectrum]:
    """PCA reorientation plus the covariance spectrum it came from."""
    X = validate_point_cloud(X)
    spec = sym_eigen(covariance(X))
    a = X.data
    return PointCloud(_readonly((a - a.mean(axis=0)) @ spec.eigenvectors)), spec


def pca_reorient(X: PointCloud) -> PointCloud:
    """Center and rotate onto principal axes, keeping all n coordinates."""
    return pca(X)[0]


def rotation_matrix(n: int, theta_deg: float, plane: tuple[int, int] = (0, 1)) -> np.ndarray:
    i, j = plane
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise BadPlaneError(f"invalid rotation plane {plane} for n={n}")
    th = np.deg2rad(theta_deg)
    R = np.eye(n)
    c, s = np.cos(th), np.sin(th)
    R[i, i], R[i, j], R[j, i], R[j, j] = c, -s, s, c
    return R


def rotate2d_embedded(X: PointCloud, theta_deg: float, plane: tuple[int, int] = (0, 1)) -> PointCloud:
    """Rotate every point by ``theta_deg`` within coordinate plane ``(i, j)``."""
    X = validate_point_cloud(X)
    R = rotation_matrix(X.n, theta_deg, plane)
    i, j = plane
    out = X.data.copy()
    out[:, [i, j]] = X.data[:, [i, j]] @ R[np.ix_([i, j], [i, j])].T
    return PointCloud(_readonly(out))


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a
