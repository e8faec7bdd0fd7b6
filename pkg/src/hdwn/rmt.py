"""Spectral primitives for large sample covariance matrices.

Circular-shift and banded Toeplitz matrices with their exact spectra,
Chebyshev polynomials, Gauss-Chebyshev quadrature against the arcsine law,
and numerical solvers for the Marchenko-Pastur / Silverstein fixed-point
equations that characterise limiting spectral distributions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SolverError",
    "SpectralDistribution",
    "JointSpectralDistribution",
    "StieltjesPoint",
    "SolverConfig",
    "chebyshev_eval",
    "shift_matrix",
    "toeplitz_band",
    "symmetrized_shift_spectrum",
    "arcsine_integral",
    "arcsine_nodes",
    "szego_moment",
    "solve_silverstein",
    "lsd_density",
    "mp_stieltjes",
    "mp_density",
]

ARCSINE_NODES = 256  # Gauss-Chebyshev rule size; exact for polynomial degree < 2*256


class SolverError(RuntimeError):
    """Fixed-point solver failed to converge; carries the last residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


# ---------------------------------------------------------------------------
# spectral distributions
# ---------------------------------------------------------------------------


def arcsine_nodes(nodes: int = ARCSINE_NODES):
    """Gauss-Chebyshev nodes/weights for the arcsine law on (-1, 1).

    The rule integrates f against the density 1/(pi*sqrt(1-t^2)) as a plain
    weighted sum: nodes cos((2k-1)pi/2K), uniform weights 1/K.
    """
    k = np.arange(1, nodes + 1)
    t = np.cos((2 * k - 1) * np.pi / (2 * nodes))
    w = np.full(nodes, 1.0 / nodes)
    return t, w


@dataclass(frozen=True)
class SpectralDistribution:
    """Population spectral law: a point mass, a finite discrete law, or arcsine.

    Attributes
    ----------
    kind : str
        One of ``"point"``, ``"discrete"``, ``"arcsine"``.
    values, weights : tuple of float
        Atom locations and probabilities (empty for the arcsine kind).
    """

    kind: str
    values: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        if self.kind not in ("point", "discrete", "arcsine"):
            raise ValueError(f"unknown spectral distribution kind {self.kind!r}")
        if self.kind == "arcsine":
            if self.values or self.weights:
                raise ValueError("arcsine law carries no atoms")
            return
        v = np.asarray(self.values, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if v.size == 0 or v.size != w.size:
            raise ValueError("values and weights must be non-empty and aligned")
        if not np.all(np.isfinite(v)):
            raise ValueError("atom values must be finite")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if self.kind == "point" and v.size != 1:
            raise ValueError("point mass has exactly one atom")

    @classmethod
    def point_mass(cls, value):
        return cls("point", (float(value),), (1.0,))

    @classmethod
    def discrete(cls, atoms):
        """Build from an iterable of (value, weight) pairs or a dict."""
        if isinstance(atoms, dict):
            atoms = atoms.items()
        pairs = [(float(v), float(w)) for v, w in atoms]
        return cls("discrete", tuple(v for v, _ in pairs), tuple(w for _, w in pairs))

    @classmethod
    def arcsine(cls):
        return cls("arcsine")

    def atoms(self, nodes: int = ARCSINE_NODES):
        """Return (t, w) arrays usable as a quadrature rule for integrals dH."""
        if self.kind == "arcsine":
            return arcsine_nodes(nodes)
        return np.asarray(self.values, float), np.asarray(self.weights, float)

    def support(self):
        if self.kind == "arcsine":
            return -1.0, 1.0
        return min(self.values), max(self.values)

    def mean(self):
        if self.kind == "arcsine":
            return 0.0
        return float(np.dot(self.values, self.weights))

    # -- text format used by the CLI: "point 1.0" / "discrete v w v w" / "arcsine"
    def to_text(self):
        if self.kind == "point":
            return f"point {self.values[0]!r}"
        if self.kind == "discrete":
            body = " ".join(
                f"{v!r} {w!r}" for v, w in zip(self.values, self.weights)
            )
            return f"discrete {body}"
        return "arcsine"

    @classmethod
    def from_text(cls, text):
        parts = text.split()
        if not parts:
            raise ValueError("empty spectral distribution spec")
        kind, args = parts[0], parts[1:]
        if kind == "point":
            if len(args) != 1:
                raise ValueError("point mass takes one value")
            return cls.point_mass(float(args[0]))
        if kind == "discrete":
            if len(args) < 2 or len(args) % 2:
                raise ValueError("discrete law takes value/weight pairs")
            vals = [float(x) for x in args]
            return cls.discrete(zip(vals[0::2], vals[1::2]))
        if kind == "arcsine":
            if args:
                raise ValueError("arcsine takes no arguments")
            return cls.arcsine()
        raise ValueError(f"unknown spectral distribution kind {kind!r}")


@dataclass(frozen=True)
class JointSpectralDistribution:
    """Joint spectral law of a commuting pair, as paired-eigenvalue atoms.

    Each atom is a triple (t1, t2, weight); marginals are obtained by
    projecting the atoms.  Continuous joint laws (e.g. Chebyshev images of
    the arcsine law) are represented by their Gauss-Chebyshev discretisation,
    which integrates analytic kernels to quadrature precision.
    """

    t1: tuple
    t2: tuple
    weights: tuple

    def __post_init__(self):
        a = np.asarray(self.t1, float)
        b = np.asarray(self.t2, float)
        w = np.asarray(self.weights, float)
        if not (a.size == b.size == w.size) or a.size == 0:
            raise ValueError("atom arrays must be non-empty and aligned")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")

    @classmethod
    def from_atoms(cls, atoms):
        atoms = [(float(a), float(b), float(w)) for a, b, w in atoms]
        return cls(
            tuple(a for a, _, _ in atoms),
            tuple(b for _, b, _ in atoms),
            tuple(w for _, _, w in atoms),
        )

    @classmethod
    def paired_with_point(cls, value, other: SpectralDistribution,
                          nodes: int = ARCSINE_NODES):
        """Joint law of (value*I, T) for T with spectral law ``other``."""
        t, w = other.atoms(nodes)
        return cls(tuple(np.full(t.size, float(value))), tuple(t), tuple(w))

    @classmethod
    def chebyshev_pair(cls, r: int, s: int, nodes: int = ARCSINE_NODES):
        """Joint law of (T_r(U), T_s(U)) with U arcsine distributed.

        This is the paired-eigenvalue law of the commuting symmetrised
        circular shifts at lags r and s.
        """
        u, w = arcsine_nodes(nodes)
        return cls(
            tuple(chebyshev_eval(r, u)), tuple(chebyshev_eval(s, u)), tuple(w)
        )

    def arrays(self):
        return (
            np.asarray(self.t1, float),
            np.asarray(self.t2, float),
            np.asarray(self.weights, float),
        )

    def marginal(self, which: int):
        """Marginal law of the first (0) or second (1) coordinate, as atoms."""
        t = self.t1 if which == 0 else self.t2
        return np.asarray(t, float), np.asarray(self.weights, float)

    def swapped(self):
        return JointSpectralDistribution(self.t2, self.t1, self.weights)


@dataclass(frozen=True)
class StieltjesPoint:
    """A solved point of the Marchenko-Pastur / Silverstein system.

    ``m`` is the Stieltjes transform of the LSD, ``m_bar`` the companion
    transform; they satisfy m_bar = -(1-c)/z + c*m.
    """

    z: complex
    m: complex
    m_bar: complex
    residual: float = 0.0


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 10000
    damping: float = 0.5

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")


DEFAULT_SOLVER = SolverConfig()


# ---------------------------------------------------------------------------
# deterministic spectra
# ---------------------------------------------------------------------------


def chebyshev_eval(order, t):
    """Chebyshev polynomial T_order(t) by the three-term recurrence.

    Satisfies T_order(cos x) = cos(order*x).  Accepts scalar or array ``t``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if order == 0:
        return prev if prev.ndim else float(prev)
    cur = t.copy()
    for _ in range(order - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur if cur.ndim else float(cur)


def _check_lag(n, tau):
    if not 1 <= tau < n:
        raise ValueError(f"lag must satisfy 1 <= tau < n, got tau={tau}, n={n}")


def shift_matrix(n, tau):
    """Circular shift permutation matrix with blocks (0, I_{n-tau}; I_tau, 0).

    Equals the tau-th power of the one-step shift; orthogonal, so
    D @ D.T == I.
    """
    _check_lag(n, tau)
    D = np.zeros((n, n))
    idx = np.arange(n)
    D[idx, (idx + tau) % n] = 1.0
    return D


def toeplitz_band(n, tau):
    """Symmetric banded Toeplitz matrix: 1/2 on the +-tau diagonals, no wrap."""
    _check_lag(n, tau)
    C = np.zeros((n, n))
    idx = np.arange(n - tau)
    C[idx, idx + tau] = 0.5
    C[idx + tau, idx] = 0.5
    return C


def symmetrized_shift_spectrum(n, tau):
    """Exact eigenvalues of (D_tau + D_tau^T)/2: cos(2 pi tau t / n), sorted."""
    _check_lag(n, tau)
    t = np.arange(1, n + 1)
    return np.sort(np.cos(2 * np.pi * tau * t / n))


def arcsine_integral(f, nodes: int = ARCSINE_NODES):
    """Integrate a function on [-1, 1] against the arcsine law.

    Gauss-Chebyshev quadrature; exact for polynomial integrands of degree
    below 2*nodes.
    """
    t, w = arcsine_nodes(nodes)
    return float(np.dot(w, f(t)))


def szego_moment(n, tau, s):
    """Normalised s-th spectral moment of the banded Toeplitz matrix.

    Computed from a dense symmetric eigensolve; converges as n grows to the
    arcsine moment (1/2pi) * int_0^2pi cos(tau x)^s dx.
    """
    _check_lag(n, tau)
    if s < 1:
        raise ValueError("moment order must be a positive integer")
    eig = np.linalg.eigvalsh(toeplitz_band(n, tau))
    return float(np.mean(eig**s))


# ---------------------------------------------------------------------------
# Stieltjes-transform solvers
# ---------------------------------------------------------------------------


def mp_stieltjes(z, c):
    """Closed-form Marchenko-Pastur Stieltjes transform for H = delta_1.

    Root of c*z*m^2 - (1-c-z)*m + 1 = 0 with Im m matching the sign of Im z.
    """
    z = complex(z)
    disc = np.sqrt((1 - c - z) ** 2 - 4 * c * z + 0j)
    roots = [((1 - c - z) + disc) / (2 * c * z), ((1 - c - z) - disc) / (2 * c * z)]
    sign = 1.0 if z.imag >= 0 else -1.0
    return max(roots, key=lambda m: sign * m.imag)


def mp_density(x, c):
    """Closed-form Marchenko-Pastur density for H = delta_1 (continuous part)."""
    a, b = (1 - np.sqrt(c)) ** 2, (1 + np.sqrt(c)) ** 2
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > a) & (x < b)
    xi = x[inside]
    out[inside] = np.sqrt((b - xi) * (xi - a)) / (2 * np.pi * c * xi)
    return out if out.ndim else float(out)


def _solve_mbar_atoms(z, c, t, w, cfg: SolverConfig, init=None):
    """Solve z = -1/m + c * sum w*t/(1+t*m) for the companion transform m.

    Works in the upper half plane (callers conjugate for Im z < 0).  Damped
    fixed-point iteration followed by a Newton polish; the upper-half-plane
    branch is enforced by reflecting stray iterates to their conjugates.
    """
    m = complex(init) if init is not None else 1j
    if m.imag <= 0:
        m = 1j

    def residual(m):
        return z + 1.0 / m - c * np.sum(w * t / (1.0 + t * m))

    damp = cfg.damping
    for _ in range(cfg.max_iter):
        integral = np.sum(w * t / (1.0 + t * m))
        m_new = 1.0 / (-z + c * integral)
        if m_new.imag <= 0:
            m_new = np.conj(m_new)
        m_next = damp * m_new + (1 - damp) * m
        if m_next.imag <= 0:
            m_next = np.conj(m_next)
        done = abs(m_next - m) < 1e-8 * (1.0 + abs(m_next))
        m = m_next
        if done:
            break

    # Newton refinement pushes the residual to cfg.tol; the fixed point alone
    # stalls near the real axis where the map loses contraction.
    for _ in range(64):
        res = residual(m)
        if abs(res) < cfg.tol:
            break
        q = 1.0 / (1.0 + t * m)
        deriv = -1.0 / (m * m) + c * np.sum(w * t * t * q * q)
        step = res / deriv
        m_new = m - step
        if m_new.imag <= 0:
            m_new = m - 0.5 * step
            if m_new.imag <= 0:
                m_new = np.conj(m_new)
        m = m_new

    res = abs(residual(m))
    if res > cfg.tol:
        raise SolverError(
            f"Silverstein fixed point did not converge at z={z}: residual {res:.3e}",
            residual=res,
        )
    return m, res


def solve_silverstein(z, c, H: SpectralDistribution,
                      cfg: SolverConfig = DEFAULT_SOLVER, init=None):
    """Solve the Silverstein equation at one spectral argument.

    Parameters
    ----------
    z : complex
        Spectral argument, off the real axis.
    c : float
        Dimension-to-sample aspect ratio, > 0.
    H : SpectralDistribution
        Population spectral law.
    cfg : SolverConfig
        Tolerance / iteration / damping settings.
    init : complex, optional
        Warm start for the companion transform (continuation along contours).

    Returns
    -------
    StieltjesPoint
        With ``m_bar`` solving z = -1/m_bar + c*int t/(1+t*m_bar) dH(t) and
        ``m`` recovered from the companion relation.
    """
    z = complex(z)
    if z.imag == 0:
        raise ValueError("spectral argument must lie off the real axis")
    if c <= 0:
        raise ValueError("aspect ratio c must be positive")
    t, w = H.atoms()
    conjugate = z.imag < 0
    zz = np.conj(z) if conjugate else z
    if init is not None and complex(init).imag < 0:
        init = np.conj(complex(init))
    m_bar, res = _solve_mbar_atoms(zz, c, t, w, cfg, init=init)
    if conjugate:
        m_bar = np.conj(m_bar)
    m_bar = complex(m_bar)
    m = (m_bar + (1 - c) / z) / c
    return StieltjesPoint(z=z, m=complex(m), m_bar=m_bar, residual=float(res))


def lsd_density(x, c, H: SpectralDistribution,
                cfg: SolverConfig = DEFAULT_SOLVER, eps: float = 1e-4):
    """Density of the limiting spectral law at ``x`` by Stieltjes inversion.

    Evaluates (1/pi) * Im m(x + i*eps); the smoothing eps trades bias against
    solver conditioning near the support edge.
    """
    point = solve_silverstein(x + 1j * eps, c, H, cfg)
    return float(point.m.imag / np.pi)
