import numpy as np
import pytest

from markovpert import build_perturbation_row, gth_stationary, make_tu_inverse, replace_row, to_H
from markovpert.chain import PerturbationRow, perturbation_sequence, uniform_chain
from markovpert.errors import NearSingularUpdateError, ValidationError
from markovpert.perturb import (
    UpdateFlavor,
    group_inverse_full_perturb,
    group_inverse_update_row,
    sherman_morrison_apply,
    singular_threshold,
    stationary_full_perturb,
    stationary_update_row,
)

import oracles
from reference_data import A_PUBLISHED, KEMENY_P

A0 = np.eye(5) - 0.2
PI0 = np.full(5, 0.2)


def random_pair(rng):
    m = int(rng.integers(3, 9))
    P = oracles.random_chain(rng, m)
    i = int(rng.integers(m))
    row = rng.dirichlet(np.ones(m))
    Pbar = P.copy()
    Pbar[i] = row
    return P, Pbar, PerturbationRow(i, row - P[i])


class TestShermanMorrison:
    def test_zero_v(self):
        Ainv = np.array([[2.0, 1.0], [1.0, 3.0]])
        assert np.array_equal(sherman_morrison_apply(Ainv, [1.0, 0.0], [0.0, 0.0]), Ainv)

    def test_two_by_two(self):
        out = sherman_morrison_apply(np.eye(2), [1.0, 0.0], [0.0, 0.5])
        assert np.allclose(out, [[1.0, -0.5], [0.0, 1.0]])

    def test_first_kemeny_update(self):
        b1 = build_perturbation_row(KEMENY_P, 0)
        P1 = replace_row(uniform_chain(5), b1).entries
        K1 = sherman_morrison_apply(np.eye(5), np.eye(5)[0], -b1.b)
        assert np.allclose(K1, np.linalg.inv(np.eye(5) - P1 + 0.2), atol=1e-14)

    def test_near_singular(self):
        with pytest.raises(NearSingularUpdateError) as info:
            sherman_morrison_apply(np.eye(3), [1.0, 0, 0], [-1.0, 0, 0])
        assert info.value.denominator == 0.0

    def test_inverse_property(self, rng):
        for _ in range(20):
            m = int(rng.integers(2, 8))
            A = rng.random((m, m)) + m * np.eye(m)
            u, v = rng.random(m), rng.random(m)
            X = sherman_morrison_apply(np.linalg.inv(A), u, v)
            assert np.abs(X @ (A + np.outer(u, v)) - np.eye(m)).max() <= 1e-12

    def test_threshold(self):
        assert singular_threshold(np.eye(2)) == pytest.approx(1e3 * 2.220446049250313e-16)
        assert singular_threshold(np.eye(2, dtype=np.float32) * 10) == pytest.approx(
            1e4 * 1.1920929e-07)


class TestStationaryUpdate:
    def test_zero_b(self):
        pi = gth_stationary(KEMENY_P)
        A = oracles.group_inverse_meyer(KEMENY_P, pi)
        out = stationary_update_row(pi, A, PerturbationRow(3, np.zeros(5)))
        assert np.allclose(out, pi, atol=1e-16)

    def test_uniform_to_P1(self):
        b1 = build_perturbation_row(KEMENY_P, 0)
        P1 = replace_row(uniform_chain(5), b1).entries
        pi1 = stationary_update_row(PI0, A0, b1)
        assert np.abs(pi1 - oracles.stationary_direct(P1)).max() <= 1e-15

    def test_two_state(self):
        P = np.array([[0.7, 0.3], [0.6, 0.4]])
        pi = np.array([2 / 3, 1 / 3])
        out = stationary_update_row(pi, oracles.group_inverse_meyer(P, pi),
                                    PerturbationRow(0, np.array([-0.1, 0.1])))
        assert np.allclose(out, [0.6, 0.4], atol=1e-15)

    def test_flavors(self, rng):
        P, Pbar, b = random_pair(rng)
        m = P.shape[0]
        pi = oracles.stationary_direct(P)
        expected = oracles.stationary_direct(Pbar)
        G = make_tu_inverse(P, np.ones(m), rng.random(m) + 0.1)
        H = to_H(make_tu_inverse(P, rng.random(m) + 0.1, rng.random(m) + 0.1), pi)
        A = oracles.group_inverse_meyer(P, pi)
        for flavor, X in [(UpdateFlavor.G_FORM, G.g), (UpdateFlavor.H_FORM, H.g),
                          (UpdateFlavor.GROUP, A)]:
            out = stationary_update_row(pi, X, b, flavor)
            assert np.abs(out - expected).max() <= 1e-12
            assert out.sum() == pytest.approx(1, abs=1e-15)

    def test_wrong_flavor(self, rng):
        P, _, b = random_pair(rng)
        m = P.shape[0]
        pi = oracles.stationary_direct(P)
        G = make_tu_inverse(P, np.ones(m), rng.random(m) + 0.1).g  # Ge = ge but He != 0
        with pytest.raises(ValidationError):
            stationary_update_row(pi, G, b, UpdateFlavor.H_FORM)
        with pytest.raises(ValidationError):
            stationary_update_row(pi, G, b, UpdateFlavor.GROUP)

    def test_near_singular(self):
        # with G = I the denominator is 1 - b_0 = 0
        b = PerturbationRow(0, np.array([1.0, -1.0, 0.0]))
        with pytest.raises(NearSingularUpdateError):
            stationary_update_row(np.full(3, 1 / 3), np.eye(3), b, check=False)

    def test_against_direct_solve(self, rng):
        for _ in range(100):
            P, Pbar, b = random_pair(rng)
            pi = oracles.stationary_direct(P)
            out = stationary_update_row(pi, oracles.group_inverse_meyer(P, pi), b)
            assert oracles.max_rel_error(out, oracles.stationary_direct(Pbar)) <= 1e-10


class TestGroupInverseUpdate:
    def test_zero_b(self):
        out = group_inverse_update_row(A_PUBLISHED, 0.2, PerturbationRow(1, np.zeros(5)))
        assert np.array_equal(out, A_PUBLISHED)

    def test_uniform_to_P1(self):
        b1 = build_perturbation_row(KEMENY_P, 0)
        P1 = replace_row(uniform_chain(5), b1).entries
        out = group_inverse_update_row(A0, 0.2, b1)
        assert np.abs(out - oracles.group_inverse_meyer(P1)).max() <= 1e-14

    def test_full_sequence_reaches_published(self):
        A, pi = A0.copy(), PI0.copy()
        for i in range(5):
            b = build_perturbation_row(KEMENY_P, i)
            pi_next = stationary_update_row(pi, A, b)
            A = group_inverse_update_row(A, pi[i], b)
            pi = pi_next
        assert np.abs(A - A_PUBLISHED).max() <= 1e-11

    def test_annihilates_e(self, rng):
        for _ in range(30):
            P, Pbar, b = random_pair(rng)
            pi = oracles.stationary_direct(P)
            out = group_inverse_update_row(oracles.group_inverse_meyer(P, pi), pi[b.index], b)
            assert np.abs(out.sum(axis=1)).max() <= 1e-12
            assert np.abs(oracles.stationary_direct(Pbar) @ out).max() <= 1e-12

    def test_near_singular(self):
        with pytest.raises(NearSingularUpdateError):
            group_inverse_update_row(np.eye(3), 0.3, PerturbationRow(0, np.array([1.0, -1.0, 0])))

    def test_float32(self):
        b = build_perturbation_row(KEMENY_P.astype(np.float32), 0)
        out = group_inverse_update_row(A0.astype(np.float32), 0.2, b)
        assert out.dtype == np.float32


class TestFullPerturb:
    def test_zero(self):
        pi = gth_stationary(KEMENY_P)
        out = group_inverse_full_perturb(A_PUBLISHED, pi, np.zeros((5, 5)))
        assert np.allclose(out, A_PUBLISHED, atol=1e-15)

    def test_rank_one_agrees(self, rng):
        for _ in range(20):
            P, _, b = random_pair(rng)
            m = P.shape[0]
            pi = oracles.stationary_direct(P)
            A = oracles.group_inverse_meyer(P, pi)
            E = np.zeros((m, m))
            E[b.index] = b.b
            assert np.abs(group_inverse_full_perturb(A, pi, E)
                          - group_inverse_update_row(A, pi[b.index], b)).max() <= 1e-12

    def test_all_rows_from_uniform(self):
        E = KEMENY_P - 0.2
        assert np.abs(group_inverse_full_perturb(A0, PI0, E) - A_PUBLISHED).max() <= 1e-11
        assert np.abs(stationary_full_perturb(A0, PI0, E) - gth_stationary(KEMENY_P)).max() <= 1e-14

    def test_equivalent_forms(self, rng):
        # A# + A# E A# X - A# X == 0 with X = (I - E A#)^{-1}
        for _ in range(20):
            P, _, b = random_pair(rng)
            m = P.shape[0]
            A = oracles.group_inverse_meyer(P)
            E = np.zeros((m, m))
            E[b.index] = b.b
            X = np.linalg.inv(np.eye(m) - E @ A)
            assert np.abs(A + A @ E @ A @ X - A @ X).max() <= 1e-12

    def test_inconsistent_input(self):
        # E with zero row sums that makes I - E A# singular for A = I - ee^T/2
        A = np.eye(2) - 0.5
        E = np.array([[1.0, -1.0], [0.0, 0.0]])
        with pytest.raises(NearSingularUpdateError):
            group_inverse_full_perturb(A, [0.5, 0.5], E)

    def test_sequence_matches(self):
        # cross-check replace_row bookkeeping against the all-rows formula
        last = list(perturbation_sequence(KEMENY_P))[-1]
        assert np.array_equal(last.entries, KEMENY_P)
