"""Gaussian fluctuation parameters for linear spectral statistics.

Numerical evaluation of the mean and covariance functionals of the joint
CLT for linear spectral statistics of dependent sample covariance matrices,
via contour integration of solver-defined Stieltjes transforms; plus the
closed forms for the lag-statistic covariances and the multi-lag variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .rmt import (
    DEFAULT_SOLVER,
    JointSpectralDistribution,
    SolverConfig,
    SpectralDistribution,
    _solve_mbar_atoms,
)

__all__ = [
    "MomentProfile",
    "ContourSingularity",
    "MAX_POLY_DEGREE",
    "eval_a",
    "clt_mean",
    "clt_cov",
    "lss_expectation",
    "lag_cov_closed_form",
    "joint_lag_cov_matrix",
    "s_variance",
]

MAX_POLY_DEGREE = 8
NODES_PER_EDGE = 200     # Gauss-Legendre points per rectangle edge
CONTOUR_SEPARATION = 1.15


class ContourSingularity(ValueError):
    """The covariance kernel approached its singularity on the contour grid."""


@dataclass(frozen=True)
class MomentProfile:
    """Entry moments governing the CLT parameters.

    nu4 is the fourth absolute moment E|x|^4, alpha_x = |E x^2|^2, and
    beta_x = E|x|^4 - |E x^2|^2 - 2.  For real standardized entries
    alpha_x = 1 and beta_x = nu4 - 3.
    """

    nu4: float
    alpha_x: float
    beta_x: float

    def __post_init__(self):
        if self.nu4 < 1:
            raise ValueError("nu4 must be >= 1")
        if not 0 <= self.alpha_x <= 1:
            raise ValueError("alpha_x must lie in [0, 1]")
        if self.beta_x < -2:
            raise ValueError("beta_x must be >= -2")

    @classmethod
    def real_entries(cls, nu4):
        return cls(nu4=float(nu4), alpha_x=1.0, beta_x=float(nu4) - 3.0)

    @classmethod
    def gaussian(cls):
        return cls.real_entries(3.0)


# ---------------------------------------------------------------------------
# contours
# ---------------------------------------------------------------------------


def _support_box(c, t_values, v0=1.0):
    """Rectangle enclosing the LSD support with margin.

    Right edge 1.2*(1+sqrt(c))^2 * max eigenvalue; left edge -0.5 when the
    population spectrum is nonnegative, otherwise the mirrored bound (the
    symmetrised shift spectra are signed).
    """
    lo = float(np.min(t_values))
    hi = float(np.max(t_values))
    bound = (1 + np.sqrt(c)) ** 2
    x_r = 1.2 * bound * max(hi, 0.0)
    if x_r <= 0:
        raise ValueError("population spectrum must have positive part")
    x_l = -0.5 if lo >= 0 else 1.2 * bound * lo
    return x_l, x_r, v0


def _rect_quadrature(x_l, x_r, v0, nodes_per_edge=NODES_PER_EDGE):
    """Gauss-Legendre nodes/weights along a counterclockwise rectangle.

    Returns (z, w) with sum w_i f(z_i) ~ the closed contour integral of f.
    Per-edge Gauss rules keep spectral accuracy despite the corners; an even
    node count keeps the vertical edges off the real axis.
    """
    if nodes_per_edge % 2:
        nodes_per_edge += 1
    gx, gw = np.polynomial.legendre.leggauss(nodes_per_edge)
    corners = [x_l - 1j * v0, x_r - 1j * v0, x_r + 1j * v0, x_l + 1j * v0]
    zs, ws = [], []
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        zs.append(a + (b - a) * (gx + 1) / 2)
        ws.append(gw * (b - a) / 2)
    return np.concatenate(zs), np.concatenate(ws)


def _mbar_along(z_nodes, c, t, w, cfg):
    """Companion transform along a contour, continuation-warm-started."""
    out = np.empty(len(z_nodes), dtype=complex)
    init = None
    for i, z in enumerate(z_nodes):
        m, _ = _solve_mbar_atoms(
            np.conj(z) if z.imag < 0 else z, c, t, w, cfg, init=init
        )
        init = m
        out[i] = np.conj(m) if z.imag < 0 else m
    return out


def _poly_coeffs(f):
    coeffs = np.atleast_1d(np.asarray(f, dtype=float))
    if coeffs.ndim != 1:
        raise ValueError("polynomial must be a 1-d coefficient sequence")
    if coeffs.size - 1 > MAX_POLY_DEGREE:
        raise ValueError(f"polynomial degree capped at {MAX_POLY_DEGREE}")
    return coeffs


# ---------------------------------------------------------------------------
# CLT functionals
# ---------------------------------------------------------------------------


def eval_a(z1, z2, c, Hrs: JointSpectralDistribution,
           cfg: SolverConfig = DEFAULT_SOLVER):
    """Covariance kernel a(z1, z2) of the joint CLT.

    c * integral of t1 t2 mbar_r(z1) mbar_s(z2) /
    ((1 + t1 mbar_r(z1)) (1 + t2 mbar_s(z2))) against the joint law, with
    each companion transform solved against the corresponding marginal.
    """
    if complex(z1).imag == 0 or complex(z2).imag == 0:
        raise ValueError("spectral arguments must lie off the real axis")
    t1, t2, w = Hrs.arrays()
    m1 = _mbar_along(np.array([complex(z1)]), c, t1, w, cfg)[0]
    m2 = _mbar_along(np.array([complex(z2)]), c, t2, w, cfg)[0]
    u = t1 * m1 / (1.0 + t1 * m1)
    v = t2 * m2 / (1.0 + t2 * m2)
    return c * complex(np.sum(w * u * v))


def clt_mean(f, c, H: SpectralDistribution, mp: MomentProfile,
             cfg: SolverConfig = DEFAULT_SOLVER,
             nodes_per_edge=NODES_PER_EDGE):
    """Asymptotic mean of the centred linear spectral statistic for ``f``.

    Parameters
    ----------
    f : sequence of float
        Polynomial coefficients, ascending order, degree <= 8.
    c : float
        Aspect ratio.
    H : SpectralDistribution
        Population spectral law.
    mp : MomentProfile
        Entry moments (alpha_x, beta_x).

    Returns
    -------
    float
        -(1/2 pi i) times the contour integral of
        f(z) g1(z) [alpha/((1-g2)(1-alpha g2)) + beta/(1-g2)];
        the imaginary residue must fall below 1e-8 and is discarded.
    """
    coeffs = _poly_coeffs(f)
    t, w = H.atoms()
    z, wz = _rect_quadrature(*_support_box(c, t), nodes_per_edge)
    mbar = _mbar_along(z, c, t, w, cfg)
    q = 1.0 / (1.0 + t[None, :] * mbar[:, None])
    wt2 = w * t * t
    g1 = c * (wt2[None, :] * mbar[:, None] ** 3 * q**3).sum(axis=1)
    g2 = c * (wt2[None, :] * mbar[:, None] ** 2 * q**2).sum(axis=1)
    bracket = mp.alpha_x / ((1 - g2) * (1 - mp.alpha_x * g2)) + mp.beta_x / (1 - g2)
    integrand = P.polyval(z, coeffs) * g1 * bracket
    value = -np.sum(wz * integrand) / (2j * np.pi)
    if abs(value.imag) > 1e-8:
        raise ContourSingularity(
            f"mean quadrature left imaginary residue {value.imag:.3e}"
        )
    return float(value.real)


def clt_cov(f1, f2, c, Hrs: JointSpectralDistribution, mp: MomentProfile,
            cfg: SolverConfig = DEFAULT_SOLVER, companion_side: bool = False,
            nodes_per_edge=NODES_PER_EDGE, separation=CONTOUR_SEPARATION):
    """Asymptotic covariance of two linear spectral statistics.

    Evaluates (1/4 pi^2) of the double contour integral of
    f1(z1) f2(z2) d^2 g / dz1 dz2 with
    g = log(1-a) + log(1-alpha_x a) - beta_x a.  Both derivatives are moved
    onto the polynomials by integration by parts, so the quadrature only
    ever differentiates f1 and f2 (exactly).

    Parameters
    ----------
    f1, f2 : sequence of float
        Polynomial coefficients, ascending, degree <= 8.
    c : float
        Aspect ratio of the matrices whose statistics are being compared.
    Hrs : JointSpectralDistribution
        Joint population law; marginals drive the two companion transforms.
    mp : MomentProfile
        Entry moments.
    companion_side : bool
        Apply the p <-> n role swap (c replaced by 1/c) used when the
        statistics live on the companion-normalised matrices.
    separation : float
        Scale factor of the outer contour relative to the inner one; the two
        contours must not overlap.

    Returns
    -------
    float
        Real part of the double integral; the imaginary residue must fall
        below 1e-6.
    """
    c1 = _poly_coeffs(f1)
    c2 = _poly_coeffs(f2)
    if separation <= 1.0:
        raise ValueError("outer/inner contour separation must exceed 1")
    c_eff = (1.0 / c) if companion_side else c
    if c_eff <= 0:
        raise ValueError("aspect ratio must be positive")
    t1, t2, w = Hrs.arrays()
    x_l, x_r, v0 = _support_box(c_eff, np.concatenate([t1, t2]))
    z_in, w_in = _rect_quadrature(x_l, x_r, v0, nodes_per_edge)
    z_out, w_out = _rect_quadrature(
        x_l * separation, x_r * separation, v0 * separation, nodes_per_edge
    )
    m_out = _mbar_along(z_out, c_eff, t1, w, cfg)
    m_in = _mbar_along(z_in, c_eff, t2, w, cfg)

    U = t1[None, :] * m_out[:, None]
    U /= 1.0 + U
    V = t2[None, :] * m_in[:, None]
    V /= 1.0 + V
    a = c_eff * (U * w[None, :]) @ V.T
    amax = np.abs(a).max()
    if amax >= 0.999 or abs(mp.alpha_x) * amax >= 0.999:
        raise ContourSingularity(
            f"covariance kernel reached {amax:.4f} on the contour grid; "
            "increase the contour separation"
        )
    g = np.log1p(-a) - mp.beta_x * a
    if mp.alpha_x != 0:
        g = g + np.log1p(-mp.alpha_x * a)

    d1 = P.polyval(z_out, P.polyder(c1))
    d2 = P.polyval(z_in, P.polyder(c2))
    value = (w_out * d1) @ g @ (w_in * d2) / (4 * np.pi**2)
    if abs(value.imag) > 1e-6:
        raise ContourSingularity(
            f"covariance quadrature left imaginary residue {value.imag:.3e}"
        )
    return float(value.real)


def lss_expectation(f, c, H: SpectralDistribution,
                    cfg: SolverConfig = DEFAULT_SOLVER,
                    nodes_per_edge=NODES_PER_EDGE):
    """Expectation of f under the limiting spectral law F^{c,H}.

    Contour form -(1/2 pi i) of the integral of f(z) m(z); any point mass at
    the origin (c > 1) is picked up automatically by the enclosed pole.
    """
    coeffs = _poly_coeffs(f)
    t, w = H.atoms()
    z, wz = _rect_quadrature(*_support_box(c, t), nodes_per_edge)
    mbar = _mbar_along(z, c, t, w, cfg)
    m = (mbar + (1 - c) / z) / c
    value = -np.sum(wz * P.polyval(z, coeffs) * m) / (2j * np.pi)
    if abs(value.imag) > 1e-8:
        raise ContourSingularity(
            f"centering quadrature left imaginary residue {value.imag:.3e}"
        )
    return float(value.real)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def lag_cov_closed_form(r, s, c, beta_x):
    """Closed-form CLT covariance of the squared-spectrum lag statistics.

    (1 + 1.5*c*(beta_x+2))/c^2 on the diagonal (r == s), else (beta_x+2)/c.
    """
    if r < 1 or s < 1:
        raise ValueError("lags must be positive integers")
    if c <= 0:
        raise ValueError("aspect ratio c must be positive")
    if r == s:
        return (1 + 1.5 * c * (beta_x + 2)) / c**2
    return (beta_x + 2) / c


def joint_lag_cov_matrix(q, c, nu4):
    """Limiting covariance of the scaled lag statistics ((n/p) L_tau)_tau<=q.

    Constant diagonal 1 + 3(nu4-1)c/2 and constant off-diagonal c(nu4-1).
    """
    if q < 1:
        raise ValueError("q must be a positive integer")
    if c <= 0:
        raise ValueError("aspect ratio c must be positive")
    if nu4 < 1:
        raise ValueError("nu4 must be >= 1")
    off = c * (nu4 - 1)
    cov = np.full((q, q), off)
    np.fill_diagonal(cov, 1 + 1.5 * c * (nu4 - 1))
    return cov


def s_variance(q, c, nu4):
    """Null variance of the scaled multi-lag statistic: q + c(nu4-1)(q^2+q/2)."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    if c <= 0:
        raise ValueError("aspect ratio c must be positive")
    return q + c * (nu4 - 1) * (q * q + q / 2)
