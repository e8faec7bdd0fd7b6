"""Decision procedures for testing high-dimensional white noise.

Three tests share the p x n data layout of :mod:`hdwn.autocov`:

* the multi-lag test on the scaled autocovariance statistic, standardised
  by its asymptotic null law;
* John's sphericity test applied to stacked blocks of q+1 consecutive
  observations, combined over cyclic rotations by Simes' rule;
* a permutation baseline that recomputes the scaled statistic under random
  reorderings of the observations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .autocov import _as_sample, demean, multi_lag_stat, phi_stat
from .clt import s_variance

__all__ = [
    "TestReport",
    "SimesReport",
    "REPORT_CSV_HEADER",
    "estimate_nu4",
    "multi_lag_test",
    "stack",
    "john_statistic",
    "john_pvalue",
    "simes_reject",
    "john_simes_test",
    "permutation_test",
]

REPORT_CSV_HEADER = "method,p,n,q,c_n,alpha,nu4,statistic,z_score,p_value,reject"


def _csv_cell(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass(frozen=True)
class TestReport:
    """Outcome of a scalar white-noise test.

    ``z_score`` is NaN for the permutation method, whose reference law is
    the empirical permutation distribution rather than a normal tail.
    For normal-theory methods reject <=> p_value < alpha.
    """

    __test__ = False  # not a pytest class despite the name

    statistic: float
    z_score: float
    p_value: float
    reject: bool
    params: dict = field(default_factory=dict)

    def to_text(self):
        lines = [
            f"method={self.params.get('method', '?')}",
            f"statistic={self.statistic!r}",
            f"z_score={self.z_score!r}",
            f"p_value={self.p_value!r}",
            f"reject={int(self.reject)}",
        ]
        for key in sorted(self.params):
            if key != "method":
                lines.append(f"{key}={_csv_cell(self.params[key])}")
        return "\n".join(lines)

    def to_csv_row(self):
        g = self.params.get
        cells = [
            g("method", "?"), g("p", ""), g("n", ""), g("q", ""),
            g("c_n", ""), g("alpha", ""), g("nu4", ""),
            self.statistic, self.z_score, self.p_value, self.reject,
        ]
        return ",".join(_csv_cell(v) for v in cells)


@dataclass(frozen=True)
class SimesReport:
    """Outcome of the rotated John's tests combined by Simes' rule.

    ``p_values`` holds the per-rotation tail probabilities P_0..P_q;
    rejection occurs when some k-th smallest falls below k*alpha/(q+1).
    """

    p_values: tuple
    sorted_p: tuple
    reject: bool
    alpha: float
    params: dict = field(default_factory=dict)

    @property
    def combined_pvalue(self):
        """Simes combination min_k (q+1) P_(k) / k; reject <=> it is <= alpha."""
        m = len(self.sorted_p)
        return float(min(m * pk / k for k, pk in enumerate(self.sorted_p, start=1)))

    def to_text(self):
        lines = [
            "method=john_simes",
            "p_values=" + " ".join(repr(v) for v in self.p_values),
            f"combined_pvalue={self.combined_pvalue!r}",
            f"alpha={self.alpha!r}",
            f"reject={int(self.reject)}",
        ]
        for key in sorted(self.params):
            if key != "method":
                lines.append(f"{key}={_csv_cell(self.params[key])}")
        return "\n".join(lines)

    def to_csv_row(self):
        g = self.params.get
        cells = [
            "john_simes", g("p", ""), g("n", ""), g("q", ""),
            g("c_n", ""), self.alpha, g("nu4", ""),
            min(self.p_values), float("nan"), self.combined_pvalue, self.reject,
        ]
        return ",".join(_csv_cell(v) for v in cells)


# ---------------------------------------------------------------------------
# moment estimation
# ---------------------------------------------------------------------------


def estimate_nu4(x):
    """Pooled fourth-moment estimate of the standardized entries.

    Standardises every coordinate by its own sample mean and (population)
    standard deviation, then averages the fourth powers over the whole
    matrix.  Raises on any zero-variance coordinate.
    """
    x = _as_sample(x)
    mu = x.mean(axis=1, keepdims=True)
    sd = x.std(axis=1, keepdims=True)
    if np.any(sd == 0):
        raise ValueError("zero-variance coordinate; cannot estimate nu4")
    return float(np.mean(((x - mu) / sd) ** 4))


def _resolve_nu4(x, nu4):
    if isinstance(nu4, str):
        if nu4 != "auto":
            raise ValueError(f"nu4 must be a number or 'auto', got {nu4!r}")
        return estimate_nu4(x), "auto"
    return float(nu4), "given"


# ---------------------------------------------------------------------------
# multi-lag test
# ---------------------------------------------------------------------------


def multi_lag_test(x, q, alpha=0.05, nu4="auto", center=False):
    """One-sided test of zero autocorrelation at lags 1..q.

    Standardises the scaled multi-lag statistic by its null law
    N(q/2, s(c_n)) and rejects for large values.

    Parameters
    ----------
    x : array, p x n
    q : int
        Number of lags accumulated.
    alpha : float
        Nominal level in (0, 1).
    nu4 : float or "auto"
        Fourth moment of the entries; "auto" uses the pooled estimate.
    center : bool
        Subtract per-coordinate sample means first (outside the null
        theory's guarantees).

    Returns
    -------
    TestReport
    """
    x = _as_sample(x)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if center:
        x = demean(x)
    p, n = x.shape
    nu4_val, nu4_src = _resolve_nu4(x, nu4)
    c_n = p / n
    stat = phi_stat(x, q)
    z = (stat - q / 2) / np.sqrt(s_variance(q, c_n, nu4_val))
    p_value = float(norm.sf(z))
    return TestReport(
        statistic=float(stat),
        z_score=float(z),
        p_value=p_value,
        reject=bool(p_value < alpha),
        params={
            "method": "phi", "p": p, "n": n, "q": q, "c_n": c_n,
            "nu4": nu4_val, "nu4_source": nu4_src, "alpha": alpha,
        },
    )


# ---------------------------------------------------------------------------
# stacked John's test with Simes combination
# ---------------------------------------------------------------------------


def stack(x, q, k=0):
    """Stack blocks of q+1 consecutive observations after a cyclic rotation.

    Rotates the sample left by k positions, keeps the first N*(q+1)
    observations (N = n // (q+1), leftovers dropped) and stacks each block
    of q+1 columns into one column of height p*(q+1).
    """
    x = _as_sample(x)
    p, n = x.shape
    if q < 0:
        raise ValueError("q must be nonnegative")
    if not 0 <= k <= q:
        raise ValueError("rotation index must lie in [0, q]")
    if n < q + 1:
        raise ValueError(f"need n >= q+1 observations, got n={n}, q={q}")
    if q == 0:
        return x.copy()
    N = n // (q + 1)
    xr = np.roll(x, -k, axis=1)[:, : N * (q + 1)]
    # column j of the result is (x_{j(q+1)-q}; ...; x_{j(q+1)}) of the rotated sample
    return xr.reshape(p, N, q + 1).transpose(2, 0, 1).reshape((q + 1) * p, N)


def john_statistic(y):
    """Eigenvalue-dispersion sphericity statistic of the stacked sample.

    For S = (1/N) sum_j y_j y_j^T with eigenvalues l_i, returns
    mean((l - lbar)^2) / lbar^2.  Scale free; computed from traces via the
    Gram matrix when N < dim.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 2 or y.shape[1] < 2:
        raise ValueError("stacked sample must be d x N with N >= 2")
    d, N = y.shape
    if N < d:
        g = y.T @ y / N
    else:
        g = y @ y.T / N
    tr_s = float(np.trace(g))
    if tr_s == 0.0:
        raise ValueError("degenerate stacked sample: S has zero trace")
    tr_s2 = float(np.sum(g * g))
    return d * tr_s2 / tr_s**2 - 1.0


def john_pvalue(u, N, p, q, nu4):
    """Asymptotic upper-tail probability of John's statistic.

    1 - Phi((N*u - p(q+1) - nu4 + 2)/2).
    """
    return float(norm.sf((N * u - p * (q + 1) - nu4 + 2) / 2))


def simes_reject(pvalues, alpha):
    """Simes rule: reject when the k-th smallest of m p-values is <= k*alpha/m.

    Ties are broken by a stable ascending sort.  Returns (reject, sorted).
    """
    sorted_p = np.sort(np.asarray(pvalues, dtype=float), kind="stable")
    m = sorted_p.size
    thresholds = np.arange(1, m + 1) * alpha / m
    return bool(np.any(sorted_p <= thresholds)), sorted_p


def john_simes_test(x, q, alpha=0.05, nu4="auto", center=False):
    """John's sphericity test over the q+1 rotated stackings, Simes-combined.

    Returns a :class:`SimesReport`; rejection when the k-th smallest of the
    q+1 tail probabilities falls below k*alpha/(q+1) for some k (ties broken
    by a stable ascending sort).
    """
    x = _as_sample(x)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if center:
        x = demean(x)
    p, n = x.shape
    nu4_val, nu4_src = _resolve_nu4(x, nu4)
    N = n // (q + 1)
    pvals = []
    for k in range(q + 1):
        u = john_statistic(stack(x, q, k))
        pvals.append(john_pvalue(u, N, p, q, nu4_val))
    reject, sorted_p = simes_reject(pvals, alpha)
    return SimesReport(
        p_values=tuple(pvals),
        sorted_p=tuple(sorted_p),
        reject=reject,
        alpha=alpha,
        params={
            "method": "john_simes", "p": p, "n": n, "q": q, "c_n": p / n,
            "nu4": nu4_val, "nu4_source": nu4_src, "N": N,
        },
    )


# ---------------------------------------------------------------------------
# permutation baseline
# ---------------------------------------------------------------------------


def permutation_test(x, q, alpha=0.05, B=500, seed=0, center=False):
    """Permutation test on the scaled multi-lag statistic.

    Permutes the n observations B times, rejects when the observed statistic
    exceeds the empirical upper-alpha quantile of the permuted values, and
    reports the add-one p-value (1 + #{permuted >= observed}) / (B + 1).
    Permutation b draws from its own substream of ``seed``, so the result
    does not depend on evaluation order.
    """
    x = _as_sample(x)
    if B < 20:
        raise ValueError("need at least B = 20 permutations")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if center:
        x = demean(x)
    p, n = x.shape
    observed = phi_stat(x, q)
    stats = np.empty(B)
    for b in range(B):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))
        stats[b] = phi_stat(x[:, rng.permutation(n)], q)
    order = np.sort(stats)
    threshold = order[int(np.ceil((1 - alpha) * B)) - 1]
    p_value = (1 + int(np.sum(stats >= observed))) / (B + 1)
    return TestReport(
        statistic=float(observed),
        z_score=float("nan"),
        p_value=float(p_value),
        reject=bool(observed > threshold),
        params={
            "method": "permutation", "p": p, "n": n, "q": q, "c_n": p / n,
            "nu4": float("nan"), "alpha": alpha, "B": B, "seed": seed,
            "threshold": float(threshold),
        },
    )
