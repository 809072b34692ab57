from fractions import Fraction

import numpy as np
import pytest

from markovpert import PrecisionMode, gth_stationary, uniform_chain, validate_stochastic
from markovpert.errors import ReducibleError

import oracles
from reference_data import KEMENY_P, PI_GTHD


def test_kemeny_golden(kemeny):
    assert np.abs(gth_stationary(kemeny) - PI_GTHD).max() <= 5e-15


def test_kemeny_single(kemeny_single):
    pi = gth_stationary(kemeny_single)
    assert pi.dtype == np.float32
    assert np.abs(pi - PI_GTHD).max() <= 1e-6


def test_precision_override(kemeny):
    assert gth_stationary(kemeny, precision="single").dtype == np.float32


@pytest.mark.parametrize("m", [2, 3, 7])
def test_uniform(m):
    assert np.allclose(gth_stationary(uniform_chain(m)), 1 / m, atol=1e-16)


def test_two_state():
    assert np.allclose(gth_stationary([[0.7, 0.3], [0.6, 0.4]]), [2 / 3, 1 / 3], atol=1e-16)


def test_matches_exact_rationals(rng):
    for _ in range(10):
        m = int(rng.integers(2, 6))
        counts = rng.integers(1, 6, size=(m, m))
        exact = [[Fraction(int(c), int(row.sum())) for c in row] for row in counts]
        truth = np.array([float(x) for x in oracles.exact_stationary(exact)])
        P = counts / counts.sum(axis=1, keepdims=True)
        assert oracles.max_rel_error(gth_stationary(P), truth) <= 1e-14


def test_residual_small(rng):
    for m in range(2, 11):
        for sparse in (False, True):
            P = oracles.random_chain(rng, m, sparse)
            pi = gth_stationary(P)
            assert np.abs(pi @ P - pi).max() <= 1e-15 * m
            assert (pi > 0).all()


def test_intermediates_nonnegative(rng):
    for _ in range(20):
        m = int(rng.integers(3, 10))
        scales = 10.0 ** rng.uniform(-8, 0, size=(m, m))
        P = rng.random((m, m)) * scales
        P /= P.sum(axis=1, keepdims=True)
        trace = []
        pi = gth_stationary(P, trace=trace)
        assert len(trace) == m - 1
        assert all((block >= 0).all() for block in trace)
        assert np.abs(pi - oracles.stationary_direct(P)).max() <= 1e-12


def test_reducible_rejected():
    with pytest.raises(ReducibleError):
        gth_stationary(np.eye(3))


def test_corrupted_input_detected():
    # bypasses validation to reach the s_n = 0 guard
    from markovpert.chain import StochasticMatrix

    S = StochasticMatrix(np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0]]),
                         PrecisionMode.DOUBLE)
    with pytest.raises(ReducibleError):
        gth_stationary(S)


def test_validates_raw_input():
    S = validate_stochastic(KEMENY_P)
    assert np.array_equal(gth_stationary(KEMENY_P), gth_stationary(S))
