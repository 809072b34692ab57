"""GTH state reduction for the stationary distribution.

States are folded away from the last to the second; the outgoing mass of the
state being removed is taken as the sum of its transitions to the remaining
states rather than ``1 - p_nn``, so the reduction never subtracts.
"""

from __future__ import annotations

import numpy as np

from .chain import PrecisionMode, StochasticMatrix, validate_stochastic
from .errors import ReducibleError

__all__ = ["gth_stationary"]


def gth_stationary(P, precision=None, trace=None) -> np.ndarray:
    """Stationary distribution by Grassmann-Taksar-Heyman state reduction.

    Parameters
    ----------
    P : StochasticMatrix or array_like
        Irreducible transition matrix.  Raw arrays are validated first.
    precision : PrecisionMode or str, optional
        Arithmetic format; defaults to that of ``P``.
    trace : list, optional
        If given, every folded block is appended to it (for inspecting
        intermediate values).

    Returns
    -------
    pi : ndarray, shape (m,)

    Examples
    --------
    >>> [round(float(x), 12) for x in gth_stationary([[0.7, 0.3], [0.6, 0.4]])]
    [0.666666666667, 0.333333333333]
    """
    if isinstance(P, StochasticMatrix):
        S = P if precision is None else P.astype(precision)
    else:
        S = validate_stochastic(P, PrecisionMode.DOUBLE if precision is None else precision)
    A = np.array(S.entries)
    m = S.m
    s = np.zeros(m, dtype=A.dtype)
    for n in range(m - 1, 0, -1):
        s[n] = A[n, :n].sum()
        if not s[n] > 0:
            raise ReducibleError(
                (list(range(n)), list(range(n, m))),
                f"state {n} has no transitions to states 0..{n - 1} after reduction",
            )
        A[:n, :n] += np.outer(A[:n, n], A[n, :n] / s[n])
        if trace is not None:
            trace.append(A[:n, :n].copy())
    w = np.zeros(m, dtype=A.dtype)
    w[0] = 1
    for n in range(1, m):
        w[n] = (w[:n] @ A[:n, n]) / s[n]
    return w / w.sum()
