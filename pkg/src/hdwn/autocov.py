"""Circular lag autocovariances and the scalar test statistics built on them.

Data matrices are p x n: each column is one observation x_t of a
p-dimensional series.  Time indices wrap circularly (x_t = x_{n+t} for
t <= 0), matching the shift-matrix form of the statistics.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "demean",
    "lag_autocov",
    "symmetrize",
    "lag_stat",
    "multi_lag_stat",
    "phi_stat",
]


def _as_sample(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("sample must be a p x n matrix (columns = observations)")
    p, n = x.shape
    if p < 1 or n < 2:
        raise ValueError("need p >= 1 and n >= 2")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite entries")
    return x


def demean(x):
    """Subtract the per-coordinate sample mean (optional preprocessing).

    The statistics themselves assume a centred series; this helper is
    outside the distributional guarantees of the tests.
    """
    x = _as_sample(x)
    return x - x.mean(axis=1, keepdims=True)


def lag_autocov(x, tau):
    """Circular lag-tau sample autocovariance (1/n) sum_t x_t x_{t-tau}^T.

    Indices wrap: x_t = x_{n+t} for t <= 0.  Requires 1 <= tau < n.
    """
    x = _as_sample(x)
    n = x.shape[1]
    if not 1 <= tau < n:
        raise ValueError(f"lag must satisfy 1 <= tau < n, got tau={tau}, n={n}")
    # np.roll(x, tau) places x_{t-tau} in column t (circular wrap)
    return x @ np.roll(x, tau, axis=1).T / n


def symmetrize(s):
    """Symmetrised matrix (s + s^T)/2."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("expected a square matrix")
    return 0.5 * (s + s.T)


def lag_stat(x, tau, method="frobenius"):
    """Single-lag statistic: squared Frobenius norm of the symmetrised
    lag-tau autocovariance.

    ``method="eigen"`` recomputes it as the sum of squared eigenvalues
    (spectral diagnostic path); the two agree to rounding.
    """
    m = symmetrize(lag_autocov(x, tau))
    if method == "frobenius":
        return float(np.sum(m * m))
    if method == "eigen":
        return float(np.sum(np.linalg.eigvalsh(m) ** 2))
    raise ValueError(f"unknown method {method!r}")


def multi_lag_stat(x, q):
    """Sum of the single-lag statistics over lags 1..q."""
    x = _as_sample(x)
    if not 1 <= q < x.shape[1]:
        raise ValueError(f"need 1 <= q < n, got q={q}, n={x.shape[1]}")
    return float(sum(lag_stat(x, tau) for tau in range(1, q + 1)))


def phi_stat(x, q):
    """Scaled multi-lag statistic (n/p) * sum_tau<=q L_tau - q*p/2."""
    x = _as_sample(x)
    p, n = x.shape
    return (n / p) * multi_lag_stat(x, q) - q * p / 2
