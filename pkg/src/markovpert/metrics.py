"""Error statistics for comparing stationary vectors, MFPT matrices and
group inverses across algorithms and precisions.

Every statistic comes as a ``(min, max, sum)`` triple of absolute values.
An operation on two inputs of different precision is evaluated in the wider
one; a residual of a single precision result against a single precision
``P`` is evaluated in single precision.

:func:`build_tables` assembles the three comparison tables (stationary
vector, MFPT, group inverse) from single and double precision runs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .errors import DimensionMismatchError, LengthMismatchError

__all__ = [
    "StationaryErrorReport",
    "MfptErrorReport",
    "GroupInverseErrorReport",
    "DIGITS_CAP",
    "DECIMAL_PLACES_CAP",
    "stationary_residuals",
    "pairwise_vector_errors",
    "mfpt_residuals",
    "mfpt_pairwise",
    "parameter_deltas",
    "accurate_digits",
    "avg_decimal_places",
    "stationary_report",
    "mfpt_report",
    "group_inverse_report",
    "build_tables",
]

DIGITS_CAP = 16.0
DECIMAL_PLACES_CAP = 15


def _common(*arrays):
    arrays = [np.asarray(a) for a in arrays]
    dtype = np.result_type(*arrays)
    if dtype not in (np.float32, np.float64):
        dtype = np.dtype(np.float64)
    return [a.astype(dtype, copy=False) for a in arrays]


def _triple(x) -> tuple[float, float, float]:
    x = np.abs(np.asarray(x))
    return float(x.min()), float(x.max()), float(x.sum())


@dataclass
class StationaryErrorReport:
    minre: float
    maxre: float
    rele: float
    mine: float | None = None
    maxe: float | None = None
    rele_pair: float | None = None
    avg_decimal_places: float | None = None

    to_dict = asdict


@dataclass
class MfptErrorReport:
    minresm: float
    maxresm: float
    resm: float
    minem: float | None = None
    maxem: float | None = None
    rem: float | None = None
    accurate_digits: float | None = None
    avg_decimal_places: float | None = None

    to_dict = asdict


@dataclass
class GroupInverseErrorReport:
    mindelta_alpha: float
    maxdelta_alpha: float
    reldelta_alpha: float
    mindelta_beta: float
    maxdelta_beta: float
    reldelta_beta: float
    delta_gamma: float
    accurate_digits: float | None = None
    avg_decimal_places: float | None = None

    to_dict = asdict


def stationary_residuals(pi, P):
    """``r_j = |pi_j - sum_i pi_i p_ij|`` reduced to ``(min, max, sum)``."""
    pi, P = _common(pi, P)
    if P.shape != (pi.size, pi.size):
        raise DimensionMismatchError(f"pi has {pi.size} entries but P is {P.shape}")
    return _triple(pi - pi @ P)


def pairwise_vector_errors(a, b):
    """``|a_i - b_i|`` reduced to ``(min, max, sum)``."""
    a, b = _common(a, b)
    if a.shape != b.shape:
        raise LengthMismatchError(f"lengths differ: {a.shape} vs {b.shape}")
    return _triple(a - b)


def mfpt_residuals(M, P):
    """``|m_ij - sum_{k != j} p_ik m_kj - 1|`` over all ``i, j``, as ``(min, max, sum)``."""
    M, P = _common(M, P)
    if M.shape != P.shape:
        raise DimensionMismatchError(f"M is {M.shape} but P is {P.shape}")
    first_step = P @ M - P * np.diag(M)[None, :]
    return _triple(M - first_step - 1)


def mfpt_pairwise(Ms, Md):
    """``|ms_ij - md_ij|`` over all entries, as ``(min, max, sum)``."""
    Ms, Md = _common(Ms, Md)
    if Ms.shape != Md.shape:
        raise DimensionMismatchError(f"shapes differ: {Ms.shape} vs {Md.shape}")
    return _triple(Ms - Md)


def parameter_deltas(a_sharp, P, pi_ref) -> GroupInverseErrorReport:
    """How far a computed group inverse is from the parameters ``(e, pi, -1)``.

    ``alpha = (I - (I-P)A#) e`` and ``beta^T = pi^T (I - A#(I-P))``; reports
    ``|alpha_i - 1|`` and ``|beta_i - pi_i|`` triples and ``|beta^T A# alpha|``.
    Everything is evaluated in the precision of ``a_sharp``, with ``pi_ref``
    rounded to it.
    """
    X = np.asarray(a_sharp)
    dtype = X.dtype
    P = np.asarray(P, dtype=dtype)
    pi = np.asarray(pi_ref, dtype=dtype)
    m = X.shape[0]
    I = np.eye(m, dtype=dtype)
    A = I - P
    alpha = (I - A @ X).sum(axis=1)
    beta = pi @ (I - X @ A)
    da = _triple(alpha - 1)
    db = _triple(beta - pi)
    return GroupInverseErrorReport(*da, *db, delta_gamma=float(abs(beta @ X @ alpha)))


def accurate_digits(truth, computed, return_skipped=False):
    """Mean of ``-log10 |(t - c) / t|`` over all entries.

    Entries with ``t == 0`` are skipped; per-entry values are capped at
    :data:`DIGITS_CAP` (which is what an exact match scores).  With
    ``return_skipped`` the number of skipped entries is returned as well.
    """
    t, c = _common(truth, computed)
    t = t.astype(np.float64).ravel()
    c = c.astype(np.float64).ravel()
    if t.shape != c.shape:
        raise DimensionMismatchError(f"shapes differ: {np.shape(truth)} vs {np.shape(computed)}")
    keep = t != 0
    skipped = int((~keep).sum())
    with np.errstate(divide="ignore", over="ignore"):
        rel = np.abs((t[keep] - c[keep]) / t[keep])
        digits = np.minimum(-np.log10(rel), DIGITS_CAP)
    value = float(digits.mean()) if digits.size else DIGITS_CAP
    return (value, skipped) if return_skipped else value


def _round_half_away(x: Decimal, d: int) -> Decimal:
    # ROUND_HALF_UP in decimal rounds ties away from zero
    return x.quantize(Decimal(1).scaleb(-d), rounding=ROUND_HALF_UP)


def _decimal_places(ref: float, comp: float) -> int:
    r = Decimal(float(ref))
    c = Decimal(float(comp))
    for d in range(DECIMAL_PLACES_CAP, -1, -1):
        if abs(c - _round_half_away(r, d)) < Decimal(5).scaleb(-d - 1):
            return d
    return 0


def avg_decimal_places(reference, computed) -> float:
    """Average number of decimal places to which ``computed`` matches ``reference``.

    For each entry, the largest ``d`` in ``0..15`` with
    ``|computed - round(reference, d)| < 0.5 * 10**-d``, rounding half away
    from zero.  The comparison is carried out exactly in decimal.
    """
    ref = np.asarray(reference, dtype=np.float64).ravel()
    comp = np.asarray(computed).astype(np.float64).ravel()
    if ref.shape != comp.shape:
        raise DimensionMismatchError(f"shapes differ: {np.shape(reference)} vs {np.shape(computed)}")
    return float(np.mean([_decimal_places(r, c) for r, c in zip(ref, comp)]))


def stationary_report(pi, P, reference=None) -> StationaryErrorReport:
    """Residual statistics of ``pi``, plus comparisons when a reference is given."""
    report = StationaryErrorReport(*stationary_residuals(pi, P))
    if reference is not None:
        report.mine, report.maxe, report.rele_pair = pairwise_vector_errors(reference, pi)
        report.avg_decimal_places = avg_decimal_places(reference, pi)
    return report


def mfpt_report(M, P, truth=None) -> MfptErrorReport:
    """Residual statistics of ``M``; with ``truth`` also errors and digit counts."""
    report = MfptErrorReport(*mfpt_residuals(M, P))
    if truth is not None:
        report.minem, report.maxem, report.rem = mfpt_pairwise(M, truth)
        report.accurate_digits = accurate_digits(truth, M)
        report.avg_decimal_places = avg_decimal_places(truth, M)
    return report


def group_inverse_report(a_sharp, P, pi_ref, truth=None) -> GroupInverseErrorReport:
    """Parameter deltas of ``a_sharp``; with ``truth`` also digit counts."""
    report = parameter_deltas(a_sharp, P, pi_ref)
    if truth is not None:
        report.accurate_digits = accurate_digits(truth, a_sharp)
        report.avg_decimal_places = avg_decimal_places(truth, a_sharp)
    return report


def _put(table, row, col, value):
    table.setdefault(row, {})[col] = value


def build_tables(P_single, P_double, single=None, double=None, reference=None):
    """The three comparison tables, as ``{row label: {column: value}}``.

    ``single`` and ``double`` are :class:`~markovpert.algorithms.RunSet`
    objects (either may be ``None``); ``P_single`` and ``P_double`` are the
    transition matrices each was run on.  Row labels follow the usual naming
    (``MINRE(S)``, ``MAXEM(S, D)``, ``DELTA gamma(D)``, ...).  The double
    precision GTH vector is the reference for every stationary comparison;
    MFPT and group inverse comparisons use each algorithm's own double
    precision result as truth.  ``reference`` overrides the GTH-double
    benchmark vector (needed when only single precision was run).
    """
    t1, t2, t3 = {}, {}, {}
    runs = [(r, P) for r, P in ((single, P_single), (double, P_double)) if r is not None]
    gthd = reference if reference is not None else (double.gth if double is not None else None)
    gths = single.gth if single is not None else None

    for rs, P in runs:
        tag = rs.precision.tag
        columns = [("GTH", rs.gth)] if rs.gth is not None else []
        columns += [(r.algorithm.label, r.pi) for r in rs.results]
        for col, pi in columns:
            lo, hi, tot = stationary_residuals(pi, P)
            _put(t1, f"MINRE({tag})", col, lo)
            _put(t1, f"MAXRE({tag})", col, hi)
            _put(t1, f"RELE({tag})", col, tot)
            if gthd is not None:
                _put(t1, f"Av # d.p.'s for pi({tag})", col, avg_decimal_places(gthd, pi))
                if not (col == "GTH" and tag == "D"):
                    lo, hi, tot = pairwise_vector_errors(gthd, pi)
                    _put(t1, f"MINE(GTHD, {tag})", col, lo)
                    _put(t1, f"MAXE(GTHD, {tag})", col, hi)
                    _put(t1, f"RELE(GTHD, {tag})", col, tot)
            if tag == "S" and gths is not None and col != "GTH":
                lo, hi, tot = pairwise_vector_errors(gths, pi)
                _put(t1, "MINE(GTHS, S)", col, lo)
                _put(t1, "MAXE(GTHS, S)", col, hi)
                _put(t1, "RELE(GTHS, S)", col, tot)

        for r in rs.results:
            col = r.algorithm.label
            lo, hi, tot = mfpt_residuals(r.mfpt, P)
            _put(t2, f"MINRESM({tag})", col, lo)
            _put(t2, f"MAXRESM({tag})", col, hi)
            _put(t2, f"RESM({tag})", col, tot)
            ref = gthd if gthd is not None else r.pi
            d = parameter_deltas(r.a_sharp, P, ref)
            _put(t3, f"MINDELTA alpha({tag})", col, d.mindelta_alpha)
            _put(t3, f"MAXDELTA alpha({tag})", col, d.maxdelta_alpha)
            _put(t3, f"RELDELTA alpha({tag})", col, d.reldelta_alpha)
            _put(t3, f"MINDELTA beta({tag})", col, d.mindelta_beta)
            _put(t3, f"MAXDELTA beta({tag})", col, d.maxdelta_beta)
            _put(t3, f"RELDELTA beta({tag})", col, d.reldelta_beta)
            _put(t3, f"DELTA gamma({tag})", col, d.delta_gamma)

    if single is not None and double is not None:
        if gths is not None and gthd is not None:
            lo, hi, tot = pairwise_vector_errors(gths, gthd)
            _put(t1, "MINE(S, D)", "GTH", lo)
            _put(t1, "MAXE(S, D)", "GTH", hi)
            _put(t1, "RELE(S, D)", "GTH", tot)
        for rsingle in single.results:
            rdouble = double.get(rsingle.algorithm)
            if rdouble is None:
                continue
            col = rsingle.algorithm.label
            lo, hi, tot = pairwise_vector_errors(rsingle.pi, rdouble.pi)
            _put(t1, "MINE(S, D)", col, lo)
            _put(t1, "MAXE(S, D)", col, hi)
            _put(t1, "RELE(S, D)", col, tot)
            lo, hi, tot = mfpt_pairwise(rsingle.mfpt, rdouble.mfpt)
            _put(t2, "Accurate d.p.'s for M(S)", col, avg_decimal_places(rdouble.mfpt, rsingle.mfpt))
            _put(t2, "MINEM(S, D)", col, lo)
            _put(t2, "MAXEM(S, D)", col, hi)
            _put(t2, "REM(S, D)", col, tot)
            _put(t2, "Accurate Digits", col, accurate_digits(rdouble.mfpt, rsingle.mfpt))
            _put(t3, "Av # accurate d.p.'s A#(S)", col,
                 avg_decimal_places(rdouble.a_sharp, rsingle.a_sharp))
            _put(t3, "Accurate digits", col, accurate_digits(rdouble.a_sharp, rsingle.a_sharp))

    return {
        "stationary": _ordered(t1, _T1_ORDER),
        "mfpt": _ordered(t2, _T2_ORDER),
        "group_inverse": _ordered(t3, _T3_ORDER),
    }


_T1_ORDER = [
    "MINRE(S)", "MAXRE(S)", "RELE(S)", "Av # d.p.'s for pi(S)",
    "MINE(GTHS, S)", "MAXE(GTHS, S)", "RELE(GTHS, S)",
    "MINE(GTHD, S)", "MAXE(GTHD, S)", "RELE(GTHD, S)",
    "MINE(S, D)", "MAXE(S, D)", "RELE(S, D)",
    "MINE(GTHD, D)", "MAXE(GTHD, D)", "RELE(GTHD, D)",
    "MINRE(D)", "MAXRE(D)", "RELE(D)", "Av # d.p.'s for pi(D)",
]
_T2_ORDER = [
    "MINRESM(S)", "MAXRESM(S)", "RESM(S)", "Accurate d.p.'s for M(S)",
    "MINEM(S, D)", "MAXEM(S, D)", "REM(S, D)",
    "MINRESM(D)", "MAXRESM(D)", "RESM(D)", "Accurate Digits",
]


def _t3_order():
    rows = []
    for tag in ("S", "D"):
        for p in ("alpha", "beta"):
            rows += [f"MINDELTA {p}({tag})", f"MAXDELTA {p}({tag})", f"RELDELTA {p}({tag})"]
        rows.append(f"DELTA gamma({tag})")
        if tag == "S":
            rows.append("Av # accurate d.p.'s A#(S)")
    rows.append("Accurate digits")
    return rows


_T3_ORDER = _t3_order()


def _ordered(table, order):
    out = {k: table[k] for k in order if k in table}
    out.update({k: v for k, v in table.items() if k not in out})
    return out
