"""Monte Carlo harness: size/power tables and CLT validation experiments.

Replicates derive independent seeds from the experiment's base seed, so
tables are reproducible bit for bit regardless of how many workers run the
replicates; aggregation always reduces in replicate order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .autocov import lag_stat
from .clt import MomentProfile, clt_cov, clt_mean, joint_lag_cov_matrix, lss_expectation
from .datagen import SCENARIOS, ScenarioSpec, derive_seed, generate, scenario_nu4
from .rmt import JointSpectralDistribution, SpectralDistribution
from .whitenoise import john_simes_test, multi_lag_test, permutation_test

__all__ = [
    "METHODS",
    "RESULT_CSV_HEADER",
    "MonteCarloConfig",
    "ResultRow",
    "ResultTable",
    "run_size_power",
    "validate_single_lag_clt",
    "validate_joint_clt",
    "validate_lss_cross_covariance",
]

METHODS = ("phi", "john_simes", "permutation")
RESULT_CSV_HEADER = "p,n,c_n,a,method,q,rejection_rate,se,reps,seconds"

_PERM_STREAM = 1_000_003  # spawn-key tag separating permutation draws from data


@dataclass(frozen=True)
class MonteCarloConfig:
    """Description of one size/power experiment (one scenario, many sizes)."""

    scenario: str
    pairs: tuple            # ((p, n), ...)
    qs: tuple = (1,)
    a: float = 0.0
    alpha: float = 0.05
    reps: int = 500
    methods: tuple = ("phi",)
    B: int = 200
    base_seed: int = 0
    nu4: float | None = None          # None -> known value of the scenario
    unit_variance: bool = True

    def __post_init__(self):
        # normalize sequence fields so list- and tuple-built configs compare equal
        object.__setattr__(self, "pairs",
                           tuple((int(p), int(n)) for p, n in self.pairs))
        object.__setattr__(self, "qs", tuple(int(q) for q in self.qs))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if not self.pairs:
            raise ValueError("need at least one (p, n) pair")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        for q in self.qs:
            if q < 1:
                raise ValueError("q values must be positive")

    @property
    def nu4_value(self):
        return scenario_nu4(self.scenario) if self.nu4 is None else float(self.nu4)

    @classmethod
    def from_toml(cls, path):
        """Load an experiment file (schema = 1, [experiment] table)."""
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        if doc.get("schema") != 1:
            raise ValueError("experiment file must declare schema = 1")
        exp = doc.get("experiment")
        if not isinstance(exp, dict):
            raise ValueError("experiment file must contain an [experiment] table")
        known = {
            "scenario", "pairs", "qs", "a", "alpha", "reps",
            "methods", "B", "base_seed", "nu4", "unit_variance",
        }
        unknown = set(exp) - known
        if unknown:
            raise ValueError(f"unknown experiment keys: {sorted(unknown)}")
        try:
            pairs = tuple((int(p), int(n)) for p, n in exp["pairs"])
        except (KeyError, TypeError, ValueError) as err:
            raise ValueError("pairs must be a list of [p, n] pairs") from err
        kwargs = dict(
            scenario=exp.get("scenario", "gaussian_wn"),
            pairs=pairs,
            qs=tuple(int(q) for q in exp.get("qs", [1])),
            a=float(exp.get("a", 0.0)),
            alpha=float(exp.get("alpha", 0.05)),
            reps=int(exp.get("reps", 500)),
            methods=tuple(exp.get("methods", ["phi"])),
            B=int(exp.get("B", 200)),
            base_seed=int(exp.get("base_seed", 0)),
            unit_variance=bool(exp.get("unit_variance", True)),
        )
        if "nu4" in exp:
            kwargs["nu4"] = float(exp["nu4"])
        return cls(**kwargs)


@dataclass(frozen=True)
class ResultRow:
    p: int
    n: int
    c_n: float
    a: float
    method: str
    q: int
    rejection_rate: float
    se: float
    reps: int
    seconds: float

    @property
    def key(self):
        return (self.p, self.n, self.a, self.method, self.q)

    def to_csv(self):
        return ",".join([
            str(self.p), str(self.n), repr(self.c_n), repr(self.a),
            self.method, str(self.q), repr(self.rejection_rate),
            repr(self.se), str(self.reps), repr(self.seconds),
        ])

    @classmethod
    def from_csv(cls, line):
        cells = line.strip().split(",")
        if len(cells) != 10:
            raise ValueError(f"malformed result row: {line!r}")
        return cls(
            p=int(cells[0]), n=int(cells[1]), c_n=float(cells[2]),
            a=float(cells[3]), method=cells[4], q=int(cells[5]),
            rejection_rate=float(cells[6]), se=float(cells[7]),
            reps=int(cells[8]), seconds=float(cells[9]),
        )


@dataclass
class ResultTable:
    """Rows of a size/power table, keyed uniquely by (p, n, a, method, q).

    Equality compares the statistical content (everything but the wall
    times, which are not reproducible across runs).
    """

    rows: list = field(default_factory=list)

    def __post_init__(self):
        keys = [row.key for row in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (p, n, a, method, q) row keys")

    def __eq__(self, other):
        if not isinstance(other, ResultTable):
            return NotImplemented
        strip = lambda r: (r.p, r.n, r.c_n, r.a, r.method, r.q,
                           r.rejection_rate, r.se, r.reps)
        return [strip(r) for r in self.rows] == [strip(r) for r in other.rows]

    def to_csv(self, timing=True):
        lines = [RESULT_CSV_HEADER]
        for row in self.rows:
            if timing:
                lines.append(row.to_csv())
            else:
                zeroed = ResultRow(**{**row.__dict__, "seconds": 0.0})
                lines.append(zeroed.to_csv())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines or lines[0] != RESULT_CSV_HEADER:
            raise ValueError("missing or malformed result table header")
        return cls([ResultRow.from_csv(ln) for ln in lines[1:]])


# ---------------------------------------------------------------------------
# size/power tables
# ---------------------------------------------------------------------------


def _replicate_decisions(cfg: MonteCarloConfig, pair_index: int, rep: int):
    """Decisions of every (method, q) cell on one replicate's sample.

    Returns ({(method, q): bool}, {(method, q): seconds}).
    """
    p, n = cfg.pairs[pair_index]
    spec = ScenarioSpec(
        scenario=cfg.scenario, p=p, n=n, a=cfg.a,
        seed=derive_seed(cfg.base_seed, pair_index, rep),
        unit_variance=cfg.unit_variance,
    )
    x = generate(spec)
    nu4 = cfg.nu4_value
    decisions, timings = {}, {}
    for method in cfg.methods:
        for q in cfg.qs:
            t0 = time.perf_counter()
            if method == "phi":
                verdict = multi_lag_test(x, q, cfg.alpha, nu4=nu4).reject
            elif method == "john_simes":
                verdict = john_simes_test(x, q, cfg.alpha, nu4=nu4).reject
            else:
                verdict = permutation_test(
                    x, q, cfg.alpha, B=cfg.B,
                    seed=derive_seed(cfg.base_seed, pair_index, rep, _PERM_STREAM),
                ).reject
            decisions[(method, q)] = bool(verdict)
            timings[(method, q)] = time.perf_counter() - t0
    return decisions, timings


def _replicate_worker(args):
    cfg_kwargs, pair_index, rep = args
    return _replicate_decisions(MonteCarloConfig(**cfg_kwargs), pair_index, rep)


def run_size_power(cfg: MonteCarloConfig, threads: int = 1) -> ResultTable:
    """Empirical rejection rates for every (pair, method, q) cell.

    Replicate ``r`` of pair ``i`` generates data from the derived seed
    (base_seed, i, r); all requested methods see the same sample.  Rates are
    identical for any worker count; per-row ``seconds`` sums the decision
    time over replicates (wall time, not reproducible).

    A replicate failure aborts the run, reporting the failing seed.
    """
    rows = []
    for i, (p, n) in enumerate(cfg.pairs):
        counts = {(m, q): 0 for m in cfg.methods for q in cfg.qs}
        times = {(m, q): 0.0 for m in cfg.methods for q in cfg.qs}
        if threads > 1:
            jobs = [(cfg.__dict__.copy(), i, r) for r in range(cfg.reps)]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_replicate_worker, jobs, chunksize=8))
        else:
            results = []
            for r in range(cfg.reps):
                try:
                    results.append(_replicate_decisions(cfg, i, r))
                except Exception as err:
                    raise RuntimeError(
                        f"replicate {r} of pair ({p}, {n}) failed "
                        f"(seed {derive_seed(cfg.base_seed, i, r)}): {err}"
                    ) from err
        for decisions, timings in results:
            for cell, verdict in decisions.items():
                counts[cell] += verdict
                times[cell] += timings[cell]
        for method in cfg.methods:
            for q in cfg.qs:
                rate = counts[(method, q)] / cfg.reps
                rows.append(ResultRow(
                    p=p, n=n, c_n=p / n, a=cfg.a, method=method, q=q,
                    rejection_rate=rate,
                    se=float(np.sqrt(rate * (1 - rate) / cfg.reps)),
                    reps=cfg.reps, seconds=times[(method, q)],
                ))
    return ResultTable(rows)


# ---------------------------------------------------------------------------
# CLT validation experiments
# ---------------------------------------------------------------------------


def _scenario_for(nu4, scenario):
    if scenario is not None:
        return scenario
    if nu4 == 3.0:
        return "gaussian_wn"
    if nu4 == 4.5:
        return "gamma_wn"
    raise ValueError("pass scenario= explicitly for nu4 not in {3, 4.5}")


def validate_single_lag_clt(p, n, reps=5000, nu4=3.0, seed=0, scenario=None):
    """Moments of the centred scaled lag-1 statistic against its null law.

    Simulates (n/p) L_1 - p/2 under the white-noise scenario with fourth
    moment ``nu4`` and returns empirical mean/variance next to the limit
    values (mean 1/2, variance 1 + 3(nu4-1)c/2).
    """
    if reps < 100:
        raise ValueError("need reps >= 100")
    scenario = _scenario_for(nu4, scenario)
    vals = np.empty(reps)
    for r in range(reps):
        spec = ScenarioSpec(scenario, p, n, seed=derive_seed(seed, r))
        x = generate(spec)
        vals[r] = (n / p) * lag_stat(x, 1) - p / 2
    c = p / n
    return {
        "emp_mean": float(vals.mean()),
        "emp_var": float(vals.var(ddof=1)),
        "theory_mean": 0.5,
        "theory_var": 1 + 1.5 * c * (nu4 - 1),
        "se_mean": float(vals.std(ddof=1) / np.sqrt(reps)),
        "reps": reps,
    }


def validate_joint_clt(p, n, q, reps=5000, nu4=3.0, seed=0, scenario=None):
    """Joint covariance of the scaled lag statistics against the CLT matrix.

    Returns the empirical covariance of ((n/p) L_tau)_{tau<=q}, the limit
    matrix, entrywise Monte Carlo standard errors (delta method) and the
    largest deviation in SE units.
    """
    if q < 2:
        raise ValueError("need q >= 2")
    if reps < 1000:
        raise ValueError("need reps >= 1000")
    scenario = _scenario_for(nu4, scenario)
    vals = np.empty((reps, q))
    for r in range(reps):
        spec = ScenarioSpec(scenario, p, n, seed=derive_seed(seed, r))
        x = generate(spec)
        vals[r] = [(n / p) * lag_stat(x, tau) for tau in range(1, q + 1)]
    emp = np.cov(vals.T)
    theory = joint_lag_cov_matrix(q, p / n, nu4)
    centred = vals - vals.mean(axis=0)
    se = np.empty((q, q))
    for i in range(q):
        for j in range(q):
            se[i, j] = (centred[:, i] * centred[:, j]).std(ddof=1) / np.sqrt(reps)
    dev = np.abs(emp - theory)
    return {
        "emp_cov": emp,
        "theory_cov": theory,
        "se": se,
        "max_abs_dev": float(dev.max()),
        "max_dev_in_se": float((dev / se).max()),
        "reps": reps,
    }


def _diagonal_population(H2: SpectralDistribution, p):
    """Diagonal of the mixing matrix realising H2 at dimension p.

    Atom counts by largest remainder, so the realised spectral law is the
    closest integer allocation to the target weights.
    """
    if H2.kind not in ("point", "discrete"):
        raise ValueError("population law must be an atomic distribution")
    values = np.asarray(H2.values, float)
    weights = np.asarray(H2.weights, float)
    if len(values) > 8:
        raise ValueError("population law capped at 8 atoms")
    if np.any(values < 0):
        raise ValueError("population eigenvalues must be nonnegative")
    ideal = weights * p
    counts = np.floor(ideal).astype(int)
    short = p - counts.sum()
    if short:
        order = np.argsort(-(ideal - counts), kind="stable")
        counts[order[:short]] += 1
    diag = np.repeat(np.sqrt(values), counts)
    realised = SpectralDistribution.discrete(
        [(v, cnt / p) for v, cnt in zip(values, counts) if cnt]
    )
    return diag, realised


def validate_lss_cross_covariance(p, n, reps=2000, H2=None, f=(0.0, 1.0), seed=0):
    """Cross-covariance of two dependent linear spectral statistics.

    Simulates the centred statistics sum f(eig) for the pair of sample
    covariance matrices X X^T/n and Q X X^T Q^T/n, with Q diagonal carrying
    the spectral law ``H2`` and X Gaussian.  Centering uses the finite-n
    spectral law (c_n, H_n) computed from the Stieltjes solver.  Returns the
    empirical pair covariance next to the contour-integral prediction.
    """
    if H2 is None:
        H2 = SpectralDistribution.point_mass(1.0)
    coeffs = np.atleast_1d(np.asarray(f, float))
    if coeffs.size - 1 > 4:
        raise ValueError("polynomial degree capped at 4 here")
    diag, H_n = _diagonal_population(H2, p)
    c_n = p / n
    one = SpectralDistribution.point_mass(1.0)
    center_1 = p * lss_expectation(f, c_n, one)
    center_2 = p * lss_expectation(f, c_n, H_n)
    vals = np.empty((reps, 2))
    for r in range(reps):
        rng = np.random.default_rng(derive_seed(seed, r))
        x = rng.standard_normal((p, n))
        s1 = x @ x.T / n
        xq = diag[:, None] * x
        s2 = xq @ xq.T / n
        e1 = np.linalg.eigvalsh(s1)
        e2 = np.linalg.eigvalsh(s2)
        vals[r, 0] = P.polyval(e1, coeffs).sum() - center_1
        vals[r, 1] = P.polyval(e2, coeffs).sum() - center_2
    emp = np.cov(vals.T)
    centred = vals - vals.mean(axis=0)
    se12 = (centred[:, 0] * centred[:, 1]).std(ddof=1) / np.sqrt(reps)
    mp = MomentProfile.gaussian()
    pair = JointSpectralDistribution.paired_with_point(1.0, H2)
    theory_12 = clt_cov(f, f, c_n, pair, mp)
    return {
        "emp_cov_12": float(emp[0, 1]),
        "theory_cov_12": float(theory_12),
        "se_cov_12": float(se12),
        "emp_var_1": float(emp[0, 0]),
        "emp_var_2": float(emp[1, 1]),
        "emp_mean_1": float(vals[:, 0].mean()),
        "emp_mean_2": float(vals[:, 1].mean()),
        "theory_mean_1": float(clt_mean(f, c_n, one, mp)),
        "theory_mean_2": float(clt_mean(f, c_n, H2, mp)),
        "reps": reps,
    }
