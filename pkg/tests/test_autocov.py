"""Tests for circular autocovariances and the scalar statistics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from hdwn.autocov import demean, lag_autocov, lag_stat, multi_lag_stat, phi_stat, symmetrize
from hdwn.rmt import shift_matrix


def brute_force_lag_autocov(x, tau):
    """Naive circular double loop, the independent oracle."""
    p, n = x.shape
    out = np.zeros((p, p))
    for t in range(1, n + 1):
        lagged = t - tau
        while lagged <= 0:
            lagged += n
        out += np.outer(x[:, t - 1], x[:, lagged - 1])
    return out / n


def test_lag_autocov_scalar_hand_case():
    x = np.array([[1.0, 2.0]])
    assert lag_autocov(x, 1) == pytest.approx(np.array([[2.0]]))


def test_lag_autocov_zero_input():
    assert_allclose(lag_autocov(np.zeros((3, 5)), 2), np.zeros((3, 3)),
                    rtol=0, atol=0)


@pytest.mark.parametrize("p,n", [(1, 2), (2, 5), (4, 8), (3, 7)])
def test_lag_autocov_matches_brute_force(p, n):
    rng = np.random.default_rng(p * 100 + n)
    x = rng.standard_normal((p, n))
    for tau in range(1, n):
        assert_allclose(lag_autocov(x, tau), brute_force_lag_autocov(x, tau),
                        rtol=0, atol=1e-13)


@given(
    p=st.integers(1, 4),
    n=st.integers(2, 8),
    tau=st.integers(1, 7),
    seed=st.integers(0, 10_000),
)
@settings(max_examples=80, deadline=None)
def test_lag_autocov_brute_force_property(p, n, tau, seed):
    if tau >= n:
        return
    x = np.random.default_rng(seed).uniform(-2, 2, size=(p, n))
    assert_allclose(lag_autocov(x, tau), brute_force_lag_autocov(x, tau),
                    rtol=0, atol=1e-13)


def test_lag_autocov_complement_transpose():
    rng = np.random.default_rng(11)
    x = rng.standard_normal((3, 5))
    for tau in range(1, 5):
        assert_allclose(lag_autocov(x, tau).T, lag_autocov(x, 5 - tau),
                        rtol=1e-13, atol=1e-13)


def test_lag_autocov_rejects_bad_lag():
    x = np.zeros((2, 4))
    for tau in (0, 4, 5):
        with pytest.raises(ValueError):
            lag_autocov(x, tau)


def test_rejects_non_finite():
    x = np.array([[1.0, np.inf], [0.0, 1.0]])
    with pytest.raises(ValueError):
        lag_autocov(x, 1)


def test_symmetrize_cases():
    s = np.array([[1.0, 2.0], [2.0, 3.0]])
    assert_allclose(symmetrize(s), s, rtol=0, atol=0)
    assert_allclose(symmetrize([[0.0, 1.0], [0.0, 0.0]]),
                    [[0.0, 0.5], [0.5, 0.0]], rtol=0, atol=0)
    with pytest.raises(ValueError):
        symmetrize(np.zeros((2, 3)))


def test_symmetrized_autocov_matrix_form_identity():
    rng = np.random.default_rng(5)
    x = rng.standard_normal((4, 8))
    n = 8
    for tau in range(1, n):
        D = shift_matrix(n, tau)
        direct = x @ (D + D.T) @ x.T / (2 * n)
        assert_allclose(symmetrize(lag_autocov(x, tau)), direct,
                        rtol=0, atol=1e-12)


def test_lag_stat_hand_and_paths():
    x = np.array([[1.0, 2.0]])
    assert lag_stat(x, 1) == pytest.approx(4.0)
    assert lag_stat(np.zeros((2, 4)), 1) == 0.0
    rng = np.random.default_rng(3)
    y = rng.standard_normal((3, 6))
    for tau in range(1, 6):
        assert lag_stat(y, tau, method="frobenius") == pytest.approx(
            lag_stat(y, tau, method="eigen"), abs=1e-10
        )
    with pytest.raises(ValueError):
        lag_stat(y, 1, method="qr")


def test_lag_stat_nonnegative():
    rng = np.random.default_rng(17)
    for _ in range(5):
        x = rng.standard_normal((2, 6))
        assert lag_stat(x, 1) >= 0.0


def test_lag_stat_trace_cyclic_identity():
    # trace of the squared p x p statistic equals the n x n companion trace
    rng = np.random.default_rng(23)
    x = rng.standard_normal((3, 7))
    n = 7
    for tau in range(1, n):
        m_small = symmetrize(lag_autocov(x, tau))
        companion = (shift_matrix(n, tau) + shift_matrix(n, tau).T) @ (x.T @ x) / (2 * n)
        assert np.sum(m_small * m_small) == pytest.approx(
            np.trace(companion @ companion), abs=1e-10
        )


def test_multi_lag_stat_cases():
    x = np.array([[1.0, 0.0, -1.0]])
    assert multi_lag_stat(x, 2) == pytest.approx(2 / 9, abs=1e-15)
    rng = np.random.default_rng(2)
    y = rng.standard_normal((2, 6))
    assert multi_lag_stat(y, 1) == pytest.approx(lag_stat(y, 1))
    assert multi_lag_stat(np.zeros((2, 5)), 3) == 0.0
    with pytest.raises(ValueError):
        multi_lag_stat(y, 6)


def test_phi_stat_cases():
    assert phi_stat(np.zeros((4, 6)), 2) == pytest.approx(-4.0)  # -q*p/2
    assert phi_stat(np.array([[1.0, 2.0]]), 1) == pytest.approx(7.5)


def test_phi_stat_row_permutation_invariance():
    rng = np.random.default_rng(8)
    x = rng.standard_normal((5, 9))
    perm = rng.permutation(5)
    assert phi_stat(x[perm], 3) == pytest.approx(phi_stat(x, 3), abs=1e-12)


def test_demean_removes_row_means():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((3, 10)) + 5.0
    assert_allclose(demean(x).mean(axis=1), np.zeros(3), rtol=0, atol=1e-12)
