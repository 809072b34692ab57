"""Generalized inverses of ``I - P`` and what can be read off them.

Any one-condition g-inverse ``G`` of ``A = I - P`` determines the stationary
vector, the mean first passage time matrix and the group inverse ``A#``.
This module builds the ``[I - P + tu^T]^{-1}`` family, classifies a g-inverse
by its parameters ``(alpha, beta, gamma)``, and implements the conversions
between ``G``, ``H = G(I - e pi^T)``, ``A#``, ``Z`` and ``M``.

Every function keeps the floating-point type of its inputs, so a single
precision ``G`` yields single precision results.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateProjectionError,
    InconsistentInputError,
    NotRowConstantError,
    SingularSystemError,
)

__all__ = [
    "Source",
    "MfptForm",
    "GeneralizedInverse",
    "ParameterTriple",
    "AxiomReport",
    "default_tolerance",
    "make_tu_inverse",
    "extract_parameters",
    "to_H",
    "to_group_inverse",
    "stationary_from_ginverse",
    "mfpt_from_ginverse",
    "group_inverse_from_mfpt",
    "fundamental_matrix",
    "verify_group_axioms",
    "is_row_constant",
    "solve_dense",
]


class Source(enum.Enum):
    TU_INVERSE = "tu_inverse"
    TRANSFORM = "transform"
    ALGORITHM_OUTPUT = "algorithm_output"


class MfptForm(enum.Enum):
    """Which closed form to use in :func:`mfpt_from_ginverse`."""

    GENERAL = "general"  # any g-inverse
    H_FORM = "h_form"  # via H = G(I - e pi^T)
    SIMPLE = "simple"  # only when Ge = ge


@dataclass(frozen=True)
class ParameterTriple:
    alpha: np.ndarray
    beta: np.ndarray
    gamma: float


@dataclass(frozen=True)
class GeneralizedInverse:
    """A matrix claimed to be a g-inverse of ``I - P``.

    Nothing is verified on construction; use :func:`verify_group_axioms` or
    check ``(I-P) g (I-P) = I-P`` yourself.  For ``[I - P + tu^T]^{-1}`` the
    vectors ``t`` and ``u`` are kept so the stationary vector can be read off
    directly.
    """

    g: np.ndarray
    source: Source = Source.ALGORITHM_OUTPUT
    t: np.ndarray | None = field(default=None, repr=False)
    u: np.ndarray | None = field(default=None, repr=False)
    params: ParameterTriple | None = None

    def __array__(self, dtype=None, copy=None):
        if dtype is None or np.dtype(dtype) == self.g.dtype:
            return self.g.copy() if copy else self.g
        return self.g.astype(dtype)


def _float_dtype(*arrays):
    dtype = np.result_type(*(np.asarray(a) for a in arrays))
    return dtype if dtype in (np.float32, np.float64) else np.dtype(np.float64)


def default_tolerance(dtype) -> float:
    """Verification tolerance, relative to the max-norm of the operand."""
    return 1e-4 if np.dtype(dtype) == np.float32 else 1e-10


def _as_g(G) -> np.ndarray:
    return G.g if isinstance(G, GeneralizedInverse) else np.asarray(G)


def solve_dense(A: np.ndarray, rhs: np.ndarray | None = None) -> np.ndarray:
    """LU solve with partial pivoting; the inverse when ``rhs`` is omitted.

    Raises :class:`SingularSystemError` when a pivot falls below
    ``m * ulp(max |a_ij|)``.
    """
    A = np.asarray(A)
    m = A.shape[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    threshold = m * float(np.spacing(np.abs(A).max().astype(A.dtype)))
    pivots = np.abs(np.diag(lu))
    if pivots.min() < threshold:
        raise SingularSystemError(float(pivots.min()), threshold)
    if rhs is None:
        rhs = np.eye(m, dtype=A.dtype)
    return scipy.linalg.lu_solve((lu, piv), rhs)


def make_tu_inverse(P, t, u) -> GeneralizedInverse:
    """``[I - P + t u^T]^{-1}``, a g-inverse whenever ``pi^T t != 0`` and ``u^T e != 0``."""
    P = np.asarray(P)
    dtype = P.dtype
    t = np.asarray(t, dtype=dtype)
    u = np.asarray(u, dtype=dtype)
    m = P.shape[0]
    A = np.eye(m, dtype=dtype) - P + np.outer(t, u)
    return GeneralizedInverse(solve_dense(A), Source.TU_INVERSE, t=t, u=u)


def extract_parameters(G, P, pi) -> ParameterTriple:
    """Parameters ``(alpha, beta, gamma)`` of ``G`` in its parametric form.

    ``alpha = (I - (I-P)G) e``, ``beta^T = pi^T (I - G(I-P))`` and
    ``gamma = beta^T G alpha - 1``.  The group inverse has ``(e, pi, -1)``
    and the fundamental matrix ``(e, pi, 0)``.
    """
    g = _as_g(G)
    P = np.asarray(P, dtype=g.dtype)
    pi = np.asarray(pi, dtype=g.dtype)
    m = g.shape[0]
    A = np.eye(m, dtype=g.dtype) - P
    alpha = (np.eye(m, dtype=g.dtype) - A @ g).sum(axis=1)
    beta = pi @ (np.eye(m, dtype=g.dtype) - g @ A)
    gamma = beta @ g @ alpha - 1
    return ParameterTriple(alpha, beta, gamma.item())


def to_H(G, pi) -> GeneralizedInverse:
    """``H = G(I - e pi^T)``, a g-inverse with ``He = 0``."""
    g = _as_g(G)
    pi = np.asarray(pi, dtype=g.dtype)
    return GeneralizedInverse(g - np.outer(g.sum(axis=1), pi), Source.TRANSFORM)


def to_group_inverse(G, pi) -> np.ndarray:
    """``A# = (I - e pi^T) G (I - e pi^T)``, valid for any one-condition ``G``."""
    h = to_H(G, pi).g
    pi = np.asarray(pi, dtype=h.dtype)
    return h - np.outer(np.ones(h.shape[0], dtype=h.dtype), pi @ h)


def stationary_from_ginverse(G, P, v=None) -> np.ndarray:
    """Stationary vector from a g-inverse.

    For a :class:`GeneralizedInverse` built by :func:`make_tu_inverse` (and no
    ``v``) this is ``u^T G / u^T G e``.  Otherwise
    ``pi^T = v^T A_G / v^T A_G e`` with ``A_G = I - (I-P)G`` and ``v``
    defaulting to ``e``.
    """
    g = _as_g(G)
    dtype = g.dtype
    if v is None and isinstance(G, GeneralizedInverse) and G.u is not None:
        w = np.asarray(G.u, dtype=dtype) @ g
    else:
        P = np.asarray(P, dtype=dtype)
        m = g.shape[0]
        v = np.ones(m, dtype=dtype) if v is None else np.asarray(v, dtype=dtype)
        A_G = np.eye(m, dtype=dtype) - (np.eye(m, dtype=dtype) - P) @ g
        w = v @ A_G
    total = w.sum()
    if abs(total) <= 1e3 * np.finfo(dtype).eps * max(1.0, float(np.abs(w).max())):
        raise DegenerateProjectionError(
            f"projection sums to {total!r}; choose another vector v"
        )
    return w / total


def is_row_constant(G, tol=None) -> bool:
    """Whether ``Ge = ge`` for some scalar ``g`` (the (1, 5a) class)."""
    g = _as_g(G)
    rows = g.sum(axis=1)
    c = rows.sum() / g.shape[0]
    if tol is None:
        tol = 1e3 * np.finfo(g.dtype).eps * max(1.0, float(np.abs(g).max())) * g.shape[0]
    return float(np.abs(rows - c).max()) <= tol


def mfpt_from_ginverse(G, pi, form=MfptForm.GENERAL) -> np.ndarray:
    """Mean first passage time matrix from a g-inverse of ``I - P``.

    ``GENERAL``: ``M = [G Pi - E (G Pi)_d + I - G + E G_d] D``;
    ``H_FORM``: ``M = [I - H + E H_d] D`` with ``H = G(I - Pi)``;
    ``SIMPLE``: ``M = [I - G + E G_d] D``, only for ``Ge = ge``.
    Here ``Pi = e pi^T``, ``E`` is the all-ones matrix and
    ``D = diag(1/pi)``.
    """
    g = _as_g(G)
    dtype = g.dtype
    pi = np.asarray(pi, dtype=dtype)
    form = MfptForm(form)
    m = g.shape[0]
    if form is MfptForm.H_FORM:
        g = to_H(g, pi).g
    elif form is MfptForm.SIMPLE and not is_row_constant(g):
        rows = g.sum(axis=1)
        raise NotRowConstantError(
            f"row sums of G vary by {float(rows.max() - rows.min())!r}; use another form"
        )
    inner = np.eye(m, dtype=dtype) - g + np.diag(g)[None, :]
    if form is MfptForm.GENERAL:
        g_pi = np.outer(g.sum(axis=1), pi)
        inner = g_pi - np.diag(g_pi)[None, :] + inner
    return inner / pi[None, :]


def group_inverse_from_mfpt(M, pi, tol=None) -> np.ndarray:
    """Recover ``A#`` from ``M``.

    With ``tau_j = sum_k pi_k m_kj``: ``a#_jj = pi_j (tau_j - 1)`` and
    ``a#_ij = a#_jj - pi_j m_ij`` for ``i != j``.
    """
    M = np.asarray(M)
    dtype = _float_dtype(M)
    M = M.astype(dtype, copy=False)
    pi = np.asarray(pi, dtype=dtype)
    if tol is None:
        tol = default_tolerance(dtype)
    recur = np.diag(M) * pi
    if np.abs(recur - 1).max() > tol:
        j = int(np.argmax(np.abs(recur - 1)))
        raise InconsistentInputError(f"m_jj * pi_j = {float(recur[j])!r} at j={j}, expected 1")
    tau = pi @ M
    diag = pi * (tau - 1)
    A = diag[None, :] - pi[None, :] * M
    np.fill_diagonal(A, diag)
    return A


def fundamental_matrix(a_sharp, pi) -> np.ndarray:
    """``Z = A# + e pi^T``."""
    a_sharp = np.asarray(a_sharp)
    return a_sharp + np.asarray(pi, dtype=a_sharp.dtype)[None, :]


@dataclass
class AxiomReport:
    """Max-norm residuals of the group-inverse characterisations."""

    residuals: dict[str, float]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, r in self.residuals.items() if r > self.tol]


def verify_group_axioms(a_sharp, P, pi, tol=None) -> AxiomReport:
    """Check ``X`` against the properties that pin down ``A#`` for ``A = I - P``.

    Residuals reported (all max-norm): ``(I-P)X - (I - e pi^T)``,
    ``X(I-P) - (I - e pi^T)``, ``Xe``, ``pi^T X``, and the g-inverse
    conditions ``AXA = A``, ``XAX = X``, ``AX = XA``.
    """
    X = np.asarray(a_sharp)
    dtype = X.dtype
    P = np.asarray(P, dtype=dtype)
    pi = np.asarray(pi, dtype=dtype)
    m = X.shape[0]
    if tol is None:
        tol = default_tolerance(dtype)
    I = np.eye(m, dtype=dtype)
    A = I - P
    proj = I - np.outer(np.ones(m, dtype=dtype), pi)

    def norm(x):
        return float(np.abs(x).max())

    residuals = {
        "left_projection": norm(A @ X - proj),
        "right_projection": norm(X @ A - proj),
        "annihilates_e": norm(X.sum(axis=1)),
        "annihilated_by_pi": norm(pi @ X),
        "condition_1": norm(A @ X @ A - A),
        "condition_2": norm(X @ A @ X - X),
        "condition_5": norm(A @ X - X @ A),
    }
    scale = max(1.0, norm(X))
    return AxiomReport(residuals, tol * scale)
