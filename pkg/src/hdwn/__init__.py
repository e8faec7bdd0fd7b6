"""High-dimensional white-noise testing and the random-matrix machinery
behind it: exact shift/Toeplitz spectra, Stieltjes-transform solvers,
CLT mean/covariance functionals, three test procedures, scenario data
generators and a reproducible Monte Carlo harness.
"""

from .autocov import demean, lag_autocov, lag_stat, multi_lag_stat, phi_stat, symmetrize
from .clt import (
    MomentProfile,
    clt_cov,
    clt_mean,
    eval_a,
    joint_lag_cov_matrix,
    lag_cov_closed_form,
    lss_expectation,
    s_variance,
)
from .datagen import ScenarioSpec, derive_seed, gen_ar1, gen_white_noise, generate, scenario_nu4
from .montecarlo import (
    MonteCarloConfig,
    ResultRow,
    ResultTable,
    run_size_power,
    validate_joint_clt,
    validate_single_lag_clt,
    validate_lss_cross_covariance,
)
from .rmt import (
    JointSpectralDistribution,
    SolverConfig,
    SolverError,
    SpectralDistribution,
    StieltjesPoint,
    arcsine_integral,
    chebyshev_eval,
    lsd_density,
    mp_density,
    mp_stieltjes,
    shift_matrix,
    solve_silverstein,
    symmetrized_shift_spectrum,
    szego_moment,
    toeplitz_band,
)
from .whitenoise import (
    SimesReport,
    TestReport,
    estimate_nu4,
    john_pvalue,
    john_simes_test,
    john_statistic,
    multi_lag_test,
    permutation_test,
    simes_reject,
    stack,
)

__version__ = "0.1.0"
