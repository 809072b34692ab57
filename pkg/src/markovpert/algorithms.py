"""Row-by-row perturbation algorithms for ``pi``, ``A#`` and ``M``.

Each algorithm starts from the uniform chain ``P0 = ee^T/m``, whose
generalized inverses are known in closed form, and replaces row ``i`` of the
current chain by row ``i`` of ``P`` for ``i = 0, ..., m-1``.  Each
replacement is a rank-one update of the working matrix:

* AL1 updates ``G_i = [I - P_i + t_i u_i^T]^{-1}`` with ``t_0 = e`` and
  ``t_i = e_i`` afterwards.
* AL2 updates ``R_i``, the group inverse of ``I - P_i`` up to a term ``e y^T``.
* AL3 updates ``Pi_i = e pi_i^T`` and the group inverse ``A_i#`` together.
* AL4A/B/C update ``K_i = [I - P_i + e beta^T]^{-1}`` for
  ``beta = e/m``, ``e_1`` and ``e``.

All arithmetic happens in the dtype of the validated input, so running with
``PrecisionMode.SINGLE`` reproduces a pure binary32 computation.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chain import PrecisionMode, StochasticMatrix, validate_stochastic
from .errors import MarkovError
from .gth import gth_stationary
from .perturb import _check_denominator

__all__ = [
    "AlgorithmId",
    "IterationRecord",
    "AlgorithmResult",
    "RunSet",
    "run_al1",
    "run_al2",
    "run_al3",
    "run_al4",
    "run_algorithm",
    "run_all",
]

log = logging.getLogger(__name__)

Callback = Callable[[int, dict], None]


class AlgorithmId(enum.Enum):
    AL1 = "al1"
    AL2 = "al2"
    AL3 = "al3"
    AL4A = "al4a"
    AL4B = "al4b"
    AL4C = "al4c"

    @property
    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class IterationRecord:
    step: int
    denominator: float
    max_norm: float


@dataclass
class AlgorithmResult:
    algorithm: AlgorithmId
    precision: PrecisionMode
    pi: np.ndarray
    a_sharp: np.ndarray
    mfpt: np.ndarray
    trace: list[IterationRecord] = field(default_factory=list)


def _prepare(P, precision) -> StochasticMatrix:
    if isinstance(P, StochasticMatrix):
        if precision is None or PrecisionMode.of(precision) is P.precision:
            return P
        return P.astype(precision)
    return validate_stochastic(P, PrecisionMode.DOUBLE if precision is None else precision)


def _mfpt(W, pi):
    """``[I - W + E W_d] D`` for a working matrix ``W`` with ``We = we``."""
    m = W.shape[0]
    inner = np.eye(m, dtype=W.dtype) - W + np.diag(W)[None, :]
    return inner / pi[None, :]


def _finish(alg, prec, pi, a_sharp, W, trace):
    return AlgorithmResult(alg, prec, pi, a_sharp, _mfpt(W, pi), trace)


def _record(trace, step, d, W):
    trace.append(IterationRecord(step, float(d), float(np.abs(W).max())))


def run_al1(P, precision=None, callback: Callback | None = None) -> AlgorithmResult:
    """Successive updating of ``G_i = [I - P_i + t_i u_i^T]^{-1}``.

    ``G_0 = I`` and ``u_0 = e/m``.  Step ``i`` applies
    ``G_i = G_{i-1} + G_{i-1}(t_{i-1} - e_i) u_{i-1}^T G_{i-1} / (u_{i-1}^T G_{i-1} e_i)``
    and then ``u_i = u_{i-1} + b_i``.  After the last step
    ``pi = u^T G / u^T G e``, ``H = G(I - e pi^T)``, ``A# = (I - e pi^T) H``
    and ``M = [I - H + E H_d] D``.

    For steps after the first, the correction vanishes below row ``i``, so
    only the leading rows are touched.
    """
    S = _prepare(P, precision)
    X = S.entries
    dtype, m = X.dtype, S.m
    G = np.eye(m, dtype=dtype)
    u = np.full(m, 1 / m, dtype=dtype)
    base = dtype.type(1 / m)
    trace = []
    for i in range(m):
        uG = u @ G
        d = uG[i]
        _check_denominator(d, G, i)
        if i == 0:
            col = G.sum(axis=1) - G[:, 0]
            G += np.outer(col, uG / d)
        else:
            rows = slice(0, i + 1)
            col = G[rows, i - 1] - G[rows, i]
            G[rows] += np.outer(col, uG / d)
        u = u + (X[i] - base)
        _record(trace, i, d, G)
        if callback is not None:
            callback(i, {"G": G, "u": u})
    w = u @ G
    pi = w / w.sum()
    H = G - np.outer(G.sum(axis=1), pi)
    a_sharp = H - (pi @ H)[None, :]
    return _finish(AlgorithmId.AL1, S.precision, pi, a_sharp, H, trace)


def run_al2(P, precision=None, callback: Callback | None = None) -> AlgorithmResult:
    """Row perturbations of the group inverse, dropping ``e y^T`` terms.

    ``R_0 = I - ee^T/m`` and
    ``R_i = R_{i-1} + R_{i-1} e_i b_i^T R_{i-1} / (1 - b_i^T R_{i-1} e_i)``.
    Then ``pi^T = e_1^T - e_1^T (I - P) R``, ``A# = (I - e pi^T) R`` and
    ``M = [I - R + E R_d] D``.
    """
    S = _prepare(P, precision)
    X = S.entries
    dtype, m = X.dtype, S.m
    base = dtype.type(1 / m)
    R = np.eye(m, dtype=dtype) - np.full((m, m), 1 / m, dtype=dtype)
    trace = []
    for i in range(m):
        w = (X[i] - base) @ R
        k = 1 - w[i]
        _check_denominator(k, R, i)
        R += np.outer(R[:, i], w / k)
        _record(trace, i, k, R)
        if callback is not None:
            callback(i, {"R": R})
    e1 = np.zeros(m, dtype=dtype)
    e1[0] = 1
    pi = e1 - ((np.eye(m, dtype=dtype) - X)[0] @ R)
    a_sharp = R - (pi @ R)[None, :]
    return _finish(AlgorithmId.AL2, S.precision, pi, a_sharp, R, trace)


def run_al3(P, precision=None, callback: Callback | None = None) -> AlgorithmResult:
    """Joint updating of ``Pi_i`` and ``A_i#`` by matrix operations.

    ``Pi_0 = ee^T/m``, ``A_0# = I - ee^T/m`` and, with
    ``S_i = I + e_i b_i^T A_{i-1}# / (1 - b_i^T A_{i-1}# e_i)``,
    ``Pi_i = Pi_{i-1} S_i`` and ``A_i# = (I - Pi_i) A_{i-1}# S_i``.
    ``pi`` is the first row of ``Pi_m`` and ``M = [I - A# + E A#_d] D``.
    """
    S = _prepare(P, precision)
    X = S.entries
    dtype, m = X.dtype, S.m
    base = dtype.type(1 / m)
    I = np.eye(m, dtype=dtype)
    Pi = np.full((m, m), 1 / m, dtype=dtype)
    A = I - Pi
    trace = []
    for i in range(m):
        w = (X[i] - base) @ A
        k = 1 - w[i]
        _check_denominator(k, A, i)
        scaled = w / k
        # right-multiplying by S_i adds column i times scaled
        Pi = Pi + np.outer(Pi[:, i], scaled)
        AS = A + np.outer(A[:, i], scaled)
        A = AS - Pi @ AS
        _record(trace, i, k, A)
        if callback is not None:
            callback(i, {"Pi": Pi, "A": A})
    pi = Pi[0].copy()
    return _finish(AlgorithmId.AL3, S.precision, pi, A, A, trace)


_AL4 = {"A": AlgorithmId.AL4A, "B": AlgorithmId.AL4B, "C": AlgorithmId.AL4C}


def _al4_start(variant, m, dtype):
    I = np.eye(m, dtype=dtype)
    if variant == "A":
        return I
    if variant == "B":
        h = np.full(m, 1 / m, dtype=dtype)
        h[0] -= 1
        return I + h[None, :]
    return I - np.full((m, m), (m - 1) / m**2, dtype=dtype)


def run_al4(P, variant="A", precision=None, callback: Callback | None = None) -> AlgorithmResult:
    """Sherman-Morrison updating of ``K_i = [I - P_i + e beta^T]^{-1}``.

    ``variant`` selects ``beta``: ``"A"`` is ``e/m`` (``K_0 = I``), ``"B"`` is
    ``e_1`` (``K_0 = I + e(e^T/m - e_1^T)``) and ``"C"`` is ``e``
    (``K_0 = I - ((m-1)/m^2) ee^T``).  Each step is
    ``K_i = K_{i-1} + K_{i-1} e_i b_i^T K_{i-1} / k_i`` with
    ``k_i = 1 - b_i^T K_{i-1} e_i``.  Then ``pi^T`` is ``e^T K/m``,
    ``e_1^T K`` or ``e^T K`` respectively, ``A# = (I - e pi^T) K`` and
    ``M = [I - K + E K_d] D``.
    """
    variant = variant.upper()
    if variant not in _AL4:
        raise ValueError(f"unknown AL4 variant {variant!r}; expected A, B or C")
    S = _prepare(P, precision)
    X = S.entries
    dtype, m = X.dtype, S.m
    base = dtype.type(1 / m)
    K = _al4_start(variant, m, dtype)
    trace = []
    for i in range(m):
        w = (X[i] - base) @ K
        k = 1 - w[i]
        _check_denominator(k, K, i)
        K += np.outer(K[:, i], w / k)
        _record(trace, i, k, K)
        if callback is not None:
            callback(i, {"K": K})
    if variant == "A":
        pi = K.sum(axis=0) / m
    elif variant == "B":
        pi = K[0].copy()
    else:
        pi = K.sum(axis=0)
    a_sharp = K - (pi @ K)[None, :]
    return _finish(_AL4[variant], S.precision, pi, a_sharp, K, trace)


def run_algorithm(alg, P, precision=None, callback: Callback | None = None) -> AlgorithmResult:
    """Dispatch on an :class:`AlgorithmId` (or its lowercase name)."""
    alg = AlgorithmId(alg.value if isinstance(alg, AlgorithmId) else str(alg).lower())
    if alg is AlgorithmId.AL1:
        return run_al1(P, precision, callback)
    if alg is AlgorithmId.AL2:
        return run_al2(P, precision, callback)
    if alg is AlgorithmId.AL3:
        return run_al3(P, precision, callback)
    return run_al4(P, alg.name[-1], precision, callback)


@dataclass
class RunSet:
    """Outcome of :func:`run_all` at one precision."""

    precision: PrecisionMode
    results: list[AlgorithmResult]
    gth: np.ndarray | None
    failures: dict[str, MarkovError] = field(default_factory=dict)

    def get(self, alg) -> AlgorithmResult | None:
        alg = AlgorithmId(alg) if not isinstance(alg, AlgorithmId) else alg
        return next((r for r in self.results if r.algorithm is alg), None)


def run_all(P, precision=None, algorithms=None, include_gth=True) -> RunSet:
    """Run every algorithm (and GTH) on ``P``.

    ``P`` is validated once up front, so a reducible matrix raises before
    anything runs.  A numerical failure in one algorithm is recorded in
    ``RunSet.failures`` and does not stop the others.
    """
    S = _prepare(P, precision)
    algorithms = list(AlgorithmId) if algorithms is None else [AlgorithmId(a) for a in algorithms]
    results, failures = [], {}
    for alg in algorithms:
        try:
            results.append(run_algorithm(alg, S))
        except MarkovError as exc:
            log.warning("%s failed in %s precision: %s", alg.label, S.precision.value, exc)
            failures[alg.label] = exc
    gth = None
    if include_gth:
        try:
            gth = gth_stationary(S)
        except MarkovError as exc:
            log.warning("GTH failed in %s precision: %s", S.precision.value, exc)
            failures["GTH"] = exc
    return RunSet(S.precision, results, gth, failures)
