"""Shared constructions for the test suite."""

import numpy as np


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def cloud_with_covariance(eigenvalues, Q=None):
    """2n points whose sample covariance is exactly ``Q diag(eigenvalues) Q^T``."""
    lam = np.asarray(eigenvalues, dtype=float)
    n = len(lam)
    N = 2 * n
    half = np.diag(np.sqrt(lam * (N - 1) / 2.0))
    X = np.vstack([half, -half])
    return X if Q is None else X @ Q.T
