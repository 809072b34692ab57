"""Rank-one update kernels.

When one row of ``P`` changes, ``P_bar = P + e_i b^T`` with ``b^T e = 0``,
the stationary vector and group inverse of the new chain follow from those of
the old chain by Sherman-Morrison type corrections costing ``O(m^2)``.
:func:`group_inverse_full_perturb` handles an arbitrary zero-row-sum
perturbation with dense solves and serves as a cross-check.
"""

from __future__ import annotations

import enum

import numpy as np

from .chain import PerturbationRow
from .errors import NearSingularUpdateError, SingularSystemError, ValidationError
from .ginverse import is_row_constant, solve_dense

__all__ = [
    "UpdateFlavor",
    "singular_threshold",
    "sherman_morrison_apply",
    "stationary_update_row",
    "group_inverse_update_row",
    "group_inverse_full_perturb",
    "stationary_full_perturb",
]


class UpdateFlavor(enum.Enum):
    """Which kind of g-inverse of the old chain is supplied."""

    H_FORM = "h_form"  # He = 0
    G_FORM = "g_form"  # Ge = ge
    GROUP = "group"  # the group inverse itself


def singular_threshold(G) -> float:
    """``1e3 * ulp(1)`` scaled by ``max |g_ij|`` (at least 1)."""
    G = np.asarray(G)
    return 1e3 * float(np.finfo(G.dtype).eps) * max(1.0, float(np.abs(G).max()))


def _check_denominator(d, G, step=None):
    threshold = singular_threshold(G)
    if not np.isfinite(d) or abs(d) <= threshold:
        raise NearSingularUpdateError(float(d), threshold, step)


def sherman_morrison_apply(Ainv, u, v) -> np.ndarray:
    """``(A + u v^T)^{-1}`` given ``A^{-1}``.

    Raises :class:`NearSingularUpdateError` when ``1 + v^T A^{-1} u`` is too
    close to zero.
    """
    Ainv = np.asarray(Ainv)
    u = np.asarray(u, dtype=Ainv.dtype)
    v = np.asarray(v, dtype=Ainv.dtype)
    col = Ainv @ u
    row = v @ Ainv
    d = 1 + v @ col
    _check_denominator(d, Ainv)
    return Ainv - np.outer(col, row / d)


def stationary_update_row(pi_prev, G, b: PerturbationRow, flavor=UpdateFlavor.GROUP,
                          check=True) -> np.ndarray:
    """Stationary vector after replacing row ``b.index``.

    ``pi_bar^T = pi^T [I + e_i b^T G / d]`` with ``d = 1 - b^T G e_i``.  ``G``
    must be one of the g-inverses of the *unperturbed* chain named by
    ``flavor``; with ``check`` the defining property of that class is
    verified first.  The result is renormalized to sum to one.
    """
    G = np.asarray(G)
    dtype = G.dtype
    pi_prev = np.asarray(pi_prev, dtype=dtype)
    flavor = UpdateFlavor(flavor)
    i = b.index
    vec = np.asarray(b.b, dtype=dtype)
    if check:
        _check_flavor(G, pi_prev, flavor)
    w = vec @ G
    d = 1 - w[i]
    _check_denominator(d, G, i)
    pi = pi_prev + (pi_prev[i] / d) * w
    return pi / pi.sum()


def _check_flavor(G, pi, flavor):
    tol = 1e3 * float(np.finfo(G.dtype).eps) * max(1.0, float(np.abs(G).max())) * G.shape[0]
    if flavor is UpdateFlavor.H_FORM:
        ok = float(np.abs(G.sum(axis=1)).max()) <= tol
    elif flavor is UpdateFlavor.G_FORM:
        ok = is_row_constant(G)
    else:
        ok = (float(np.abs(G.sum(axis=1)).max()) <= tol
              and float(np.abs(pi @ G).max()) <= tol)
    if not ok:
        raise ValidationError(f"matrix does not have the {flavor.value} property")


def group_inverse_update_row(a_prev, pi_prev_i: float, b: PerturbationRow) -> np.ndarray:
    """Group inverse after replacing row ``b.index``.

    With ``A = a_prev``, ``i = b.index`` and ``a = 1 - b^T A e_i``::

        A_bar = A + A e_i b^T A / a
                  - (pi_i / a) e b^T (A + (b^T A^2 e_i / a) I) A

    ``pi_prev_i`` is the ``i``-th stationary probability of the old chain.
    The two contractions ``b^T A e_i`` and ``b^T A^2 e_i`` are formed from the
    single row vector ``b^T A``, so the update is ``O(m^2)``.
    """
    A = np.asarray(a_prev)
    dtype = A.dtype
    i = b.index
    w = np.asarray(b.b, dtype=dtype) @ A  # b^T A
    col = A[:, i].copy()  # A e_i
    a = 1 - w[i]
    _check_denominator(a, A, i)
    c = w @ col  # b^T A^2 e_i
    y = -(dtype.type(pi_prev_i) / a) * (w @ A + (c / a) * w)
    return A + np.outer(col, w / a) + y[None, :]


def _resolvent(a_sharp, Epert):
    A = np.asarray(a_sharp)
    X = np.eye(A.shape[0], dtype=A.dtype) - np.asarray(Epert, dtype=A.dtype) @ A
    try:
        return solve_dense(X)
    except SingularSystemError as exc:
        raise NearSingularUpdateError(exc.pivot, exc.threshold) from exc


def group_inverse_full_perturb(a_sharp, pi, Epert) -> np.ndarray:
    """Group inverse of ``I - P - E`` from that of ``I - P``, for ``Ee = 0``.

    ``A_bar = A# X - Pi X A# X`` with ``X = (I - E A#)^{-1}``.  ``I - E A#`` is
    always nonsingular for an irreducible perturbed chain, so a singular
    solve here means the inputs are inconsistent.
    """
    A = np.asarray(a_sharp)
    pi = np.asarray(pi, dtype=A.dtype)
    X = _resolvent(A, Epert)
    AX = A @ X
    return AX - np.outer(np.ones(A.shape[0], dtype=A.dtype), pi @ X @ AX)


def stationary_full_perturb(a_sharp, pi, Epert) -> np.ndarray:
    """``pi_bar^T = pi^T (I - E A#)^{-1}``."""
    A = np.asarray(a_sharp)
    return np.asarray(pi, dtype=A.dtype) @ _resolvent(A, Epert)
