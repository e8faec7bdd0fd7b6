"""Command-line interface.

Subcommands
-----------
test      run a white-noise test on a delimited data file
simulate  run a size/power experiment described by a TOML file
rmt       query the spectral machinery (density / solve / spectrum)
clt       evaluate CLT variance and covariance parameters

Exit codes: the ``test`` subcommand returns 0 when the null is accepted and
1 when it is rejected; every other success returns 0; any error returns 2.
All randomness flows through explicit ``--seed`` flags and numeric output
uses full round-trip decimal formatting.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .clt import (
    MomentProfile,
    clt_cov,
    clt_mean,
    joint_lag_cov_matrix,
    lag_cov_closed_form,
    s_variance,
)
from .montecarlo import MonteCarloConfig, run_size_power
from .rmt import (
    JointSpectralDistribution,
    SpectralDistribution,
    lsd_density,
    solve_silverstein,
    symmetrized_shift_spectrum,
)
from .whitenoise import (
    REPORT_CSV_HEADER,
    john_simes_test,
    multi_lag_test,
    permutation_test,
)

__all__ = ["main", "load_data_file"]


def load_data_file(path, layout="rows_are_time", delimiter=",", has_header=False):
    """Read a delimited numeric matrix and orient it as p x n.

    ``rows_are_time`` treats each file row as one observation x_t (the
    common convention for multivariate series); ``rows_are_coords`` treats
    rows as coordinates, already p x n.
    """
    if layout not in ("rows_are_time", "rows_are_coords"):
        raise ValueError(f"unknown layout {layout!r}")
    data = np.loadtxt(
        path, delimiter=delimiter, skiprows=1 if has_header else 0, ndmin=2
    )
    if not np.all(np.isfinite(data)):
        raise ValueError("data file contains non-finite entries")
    return data.T if layout == "rows_are_time" else data


def _parse_nu4(text):
    return "auto" if text == "auto" else float(text)


def _poly_from_text(text):
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError as err:
        raise ValueError(f"bad polynomial coefficients {text!r}") from err


def _print(out, text):
    print(text, file=out)


def _r(value):
    """Round-trip decimal formatting of a (possibly numpy) scalar."""
    return repr(float(value))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_test(args, out):
    x = load_data_file(args.file, args.layout, args.delimiter, args.header)
    if x.shape[1] <= args.q:
        raise ValueError(f"need n > q, got n={x.shape[1]}, q={args.q}")
    if args.method == "phi":
        report = multi_lag_test(x, args.q, args.alpha, nu4=args.nu4,
                                center=args.center)
    elif args.method == "john":
        report = john_simes_test(x, args.q, args.alpha, nu4=args.nu4,
                                 center=args.center)
    else:
        report = permutation_test(x, args.q, args.alpha, B=args.B,
                                  seed=args.seed, center=args.center)
    _print(out, report.to_text())
    _print(out, REPORT_CSV_HEADER)
    _print(out, report.to_csv_row())
    return 1 if report.reject else 0


def _cmd_simulate(args, out):
    cfg = MonteCarloConfig.from_toml(args.experiment)
    table = run_size_power(cfg, threads=args.threads)
    text = table.to_csv(timing=args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_rmt(args, out):
    if args.rmt_cmd == "spectrum":
        values = symmetrized_shift_spectrum(args.n, args.tau)
        _print(out, ", ".join(_r(v) for v in values))
        return 0
    H = SpectralDistribution.from_text(args.H)
    if args.rmt_cmd == "solve":
        z = complex(args.z)
        point = solve_silverstein(z, args.c, H)
        _print(out, f"z={point.z!r}")
        _print(out, f"m={point.m!r}")
        _print(out, f"m_bar={point.m_bar!r}")
        _print(out, f"residual={point.residual!r}")
        return 0
    # density
    if args.points < 2 or args.xmax <= args.xmin:
        raise ValueError("need xmax > xmin and at least two grid points")
    grid = np.linspace(args.xmin, args.xmax, args.points)
    _print(out, "x,density")
    for xv in grid:
        _print(out, f"{_r(xv)},{_r(lsd_density(xv, args.c, H))}")
    return 0


def _cmd_clt(args, out):
    if args.clt_cmd == "s-variance":
        _print(out, _r(s_variance(args.q, args.c, args.nu4)))
        return 0
    if args.clt_cmd == "lag-matrix":
        cov = joint_lag_cov_matrix(args.q, args.c, args.nu4)
        for row in cov:
            _print(out, ",".join(_r(v) for v in row))
        return 0
    if args.clt_cmd == "lag-cov":
        if args.numeric:
            pair = JointSpectralDistribution.chebyshev_pair(args.r, args.s)
            mp = MomentProfile(nu4=args.beta_x + 3.0, alpha_x=1.0,
                               beta_x=args.beta_x)
            value = clt_cov([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], args.c, pair, mp,
                            companion_side=True)
        else:
            value = lag_cov_closed_form(args.r, args.s, args.c, args.beta_x)
        _print(out, _r(value))
        return 0
    # mean
    H = SpectralDistribution.from_text(args.H)
    mp = MomentProfile(nu4=args.beta_x + args.alpha_x + 2.0,
                       alpha_x=args.alpha_x, beta_x=args.beta_x)
    value = clt_mean(_poly_from_text(args.f), args.c, H, mp)
    _print(out, _r(value))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hdwn",
        description="High-dimensional white-noise tests and RMT utilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test a data file for white noise")
    t.add_argument("file")
    t.add_argument("--q", type=int, default=1, help="number of lags")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--method", choices=("phi", "john", "perm"), default="phi")
    t.add_argument("--nu4", type=_parse_nu4, default="auto",
                   help="fourth moment, or 'auto' to estimate")
    t.add_argument("--B", type=int, default=500, help="permutation count")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--layout", choices=("rows_are_time", "rows_are_coords"),
                   default="rows_are_time")
    t.add_argument("--delimiter", default=",")
    t.add_argument("--header", action="store_true",
                   help="skip one header line")
    t.add_argument("--center", action="store_true",
                   help="subtract per-coordinate sample means first")

    s = sub.add_parser("simulate", help="run a TOML-described experiment")
    s.add_argument("experiment")
    s.add_argument("--out", default=None, help="write the CSV table here")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--timing", action="store_true",
                   help="include measured wall times (non-deterministic)")

    r = sub.add_parser("rmt", help="spectral machinery queries")
    rsub = r.add_subparsers(dest="rmt_cmd", required=True)
    rd = rsub.add_parser("density", help="limiting spectral density on a grid")
    rd.add_argument("--c", type=float, required=True)
    rd.add_argument("--H", required=True, help='e.g. "point 1.0" or "arcsine"')
    rd.add_argument("--xmin", type=float, required=True)
    rd.add_argument("--xmax", type=float, required=True)
    rd.add_argument("--points", type=int, default=101)
    rs = rsub.add_parser("solve", help="solve the fixed point at one z")
    rs.add_argument("--c", type=float, required=True)
    rs.add_argument("--H", required=True)
    rs.add_argument("--z", required=True, help='complex, e.g. "2j" or "1+0.5j"')
    rp = rsub.add_parser("spectrum", help="symmetrised shift spectrum")
    rp.add_argument("--n", type=int, required=True)
    rp.add_argument("--tau", type=int, required=True)

    c = sub.add_parser("clt", help="CLT variance/covariance parameters")
    csub = c.add_subparsers(dest="clt_cmd", required=True)
    cv = csub.add_parser("s-variance", help="null variance of the multi-lag statistic")
    cv.add_argument("--q", type=int, required=True)
    cv.add_argument("--c", type=float, required=True)
    cv.add_argument("--nu4", type=float, default=3.0)
    cm = csub.add_parser("lag-matrix", help="joint covariance matrix of lag statistics")
    cm.add_argument("--q", type=int, required=True)
    cm.add_argument("--c", type=float, required=True)
    cm.add_argument("--nu4", type=float, default=3.0)
    cc = csub.add_parser("lag-cov", help="lag-statistic covariance entry")
    cc.add_argument("--r", type=int, required=True)
    cc.add_argument("--s", type=int, required=True)
    cc.add_argument("--c", type=float, required=True)
    cc.add_argument("--beta-x", type=float, default=0.0, dest="beta_x")
    cc.add_argument("--numeric", action="store_true",
                    help="contour-integral evaluation instead of the closed form")
    ce = csub.add_parser("mean", help="CLT mean of a polynomial statistic")
    ce.add_argument("--f", required=True,
                    help="ascending polynomial coefficients, e.g. '0,0,1'")
    ce.add_argument("--c", type=float, required=True)
    ce.add_argument("--H", required=True)
    ce.add_argument("--alpha-x", type=float, default=1.0, dest="alpha_x")
    ce.add_argument("--beta-x", type=float, default=0.0, dest="beta_x")
    return parser


_HANDLERS = {
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "rmt": _cmd_rmt,
    "clt": _cmd_clt,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, sys.stdout)
    except BrokenPipeError:
        return 2
    except Exception as err:  # uniform exit-code contract: any failure -> 2
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
