"""Validated transition matrices and the row-replacement construction.

States are indexed from 0 throughout the Python API.  The perturbation
algorithms start from the uniform chain ``P0 = ee^T/m`` and swap in the rows
of the target matrix one at a time; :func:`build_perturbation_row` and
:func:`replace_row` express one such swap.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    MatrixFormatError,
    NegativeEntryError,
    NotSquareError,
    ReducibleError,
    ResultNotStochasticError,
    RowSumError,
    ValidationError,
)

__all__ = [
    "PrecisionMode",
    "StochasticMatrix",
    "PerturbationRow",
    "ones",
    "ones_matrix",
    "unit_vector",
    "uniform_chain",
    "validate_stochastic",
    "is_irreducible",
    "build_perturbation_row",
    "replace_row",
    "perturbation_sequence",
    "load_matrix",
    "parse_csv",
    "parse_json",
]


class PrecisionMode(enum.Enum):
    """Floating-point format for a whole computation."""

    SINGLE = "single"
    DOUBLE = "double"

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float32 if self is PrecisionMode.SINGLE else np.float64)

    @property
    def eps(self) -> float:
        return float(np.finfo(self.dtype).eps)

    @property
    def tag(self) -> str:
        """One-letter label used in report row names, ``S`` or ``D``."""
        return "S" if self is PrecisionMode.SINGLE else "D"

    @classmethod
    def of(cls, x) -> "PrecisionMode":
        """Precision matching the dtype of an array (or a mode passed through)."""
        if isinstance(x, cls):
            return x
        if isinstance(x, str):
            return cls(x.lower())
        dtype = np.asarray(x).dtype
        return cls.SINGLE if dtype == np.float32 else cls.DOUBLE


@dataclass(frozen=True)
class StochasticMatrix:
    """A row-stochastic, irreducible transition matrix.

    Build instances with :func:`validate_stochastic`; the constructor itself
    does not check anything.  ``entries`` is stored in the dtype of
    ``precision`` and is never modified.
    """

    entries: np.ndarray
    precision: PrecisionMode = PrecisionMode.DOUBLE

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def dtype(self) -> np.dtype:
        return self.entries.dtype

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def astype(self, precision) -> "StochasticMatrix":
        """Re-validate the same matrix in another precision."""
        return validate_stochastic(self.entries, precision)

    def __array__(self, dtype=None, copy=None):
        if dtype is None or np.dtype(dtype) == self.entries.dtype:
            return self.entries.copy() if copy else self.entries
        return self.entries.astype(dtype)

    def __repr__(self):
        return f"StochasticMatrix(m={self.m}, precision={self.precision.value})"


@dataclass(frozen=True)
class PerturbationRow:
    """The change ``b`` applied to row ``index`` of a transition matrix.

    ``target`` optionally records the row that ``b`` was derived from so that
    :func:`replace_row` can reproduce it exactly instead of relying on
    ``base + (target - base)`` rounding back to ``target``.
    """

    index: int
    b: np.ndarray
    target: np.ndarray | None = field(default=None, compare=False)


def ones(m: int, dtype=np.float64) -> np.ndarray:
    """The all-ones column ``e``."""
    return np.ones(m, dtype=dtype)


def ones_matrix(m: int, dtype=np.float64) -> np.ndarray:
    """The all-ones matrix ``E = ee^T``."""
    return np.ones((m, m), dtype=dtype)


def unit_vector(m: int, i: int, dtype=np.float64) -> np.ndarray:
    v = np.zeros(m, dtype=dtype)
    v[i] = 1
    return v


def uniform_chain(m: int, precision=PrecisionMode.DOUBLE) -> StochasticMatrix:
    """The chain ``ee^T/m`` every algorithm starts from."""
    prec = PrecisionMode.of(precision)
    return StochasticMatrix(np.full((m, m), 1 / m, dtype=prec.dtype), prec)


def _reachable(adj: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        k = queue.popleft()
        for j in np.flatnonzero(adj[k] & ~seen):
            seen[j] = True
            queue.append(j)
    return seen


def _reducibility_witness(P: np.ndarray):
    adj = P > 0
    for graph in (adj, adj.T):
        seen = _reachable(graph, 0)
        if not seen.all():
            return (np.flatnonzero(seen).tolist(), np.flatnonzero(~seen).tolist())
    return None


def is_irreducible(P) -> bool:
    """Strong connectivity of the graph ``{(i, j): p_ij > 0}``."""
    return _reducibility_witness(np.asarray(P)) is None


def validate_stochastic(raw, precision=PrecisionMode.DOUBLE) -> StochasticMatrix:
    """Round ``raw`` to ``precision`` and check that it is a valid chain.

    Parameters
    ----------
    raw : array_like, shape (m, m)
        Transition probabilities, ``m >= 2``.
    precision : PrecisionMode or str
        Entries are rounded to this format before any check.

    Raises
    ------
    NotSquareError, NegativeEntryError, RowSumError, ReducibleError
    """
    prec = PrecisionMode.of(precision)
    try:
        P = np.array(raw, dtype=prec.dtype)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"cannot interpret input as a float matrix: {exc}") from exc
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {P.shape}")
    m = P.shape[0]
    if m < 2:
        raise NotSquareError(f"need at least 2 states, got {m}")
    if not np.isfinite(P).all():
        raise ValidationError("matrix contains non-finite entries")
    neg = np.argwhere(P < 0)
    if neg.size:
        i, j = (int(k) for k in neg[0])
        raise NegativeEntryError(i, j, float(P[i, j]))
    tol = 4 * m * prec.eps
    sums = P.sum(axis=1)
    off = np.abs(sums - 1)
    if (off > tol).any():
        i = int(np.argmax(off))
        raise RowSumError(i, float(sums[i]), tol)
    witness = _reducibility_witness(P)
    if witness is not None:
        raise ReducibleError(witness)
    return StochasticMatrix(P, prec)


def build_perturbation_row(P, i: int) -> PerturbationRow:
    """``b = p_i - e/m``: the change taking uniform row ``i`` to row ``i`` of ``P``."""
    P = np.asarray(P)
    m = P.shape[0]
    if not 0 <= i < m:
        raise IndexError(f"state index {i} out of range for m={m}")
    target = P[i].copy()
    return PerturbationRow(i, target - P.dtype.type(1 / m), target)


def replace_row(P_prev, r: PerturbationRow) -> StochasticMatrix:
    """Return ``P_prev + e_i b^T`` as a new matrix.

    No irreducibility re-check is done; the uniform-start sequence keeps
    every intermediate chain irreducible.
    """
    prec = PrecisionMode.of(P_prev)
    P = np.array(P_prev, dtype=prec.dtype)
    new = P[r.index] + r.b.astype(prec.dtype, copy=False)
    if r.target is not None:
        target = r.target.astype(prec.dtype, copy=False)
        if np.allclose(new, target, rtol=0, atol=4 * prec.eps):
            new = target
    if (new < 0).any():
        j = int(np.argmax(new < 0))
        raise ResultNotStochasticError(
            f"row {r.index} would get negative entry {float(new[j])!r} at column {j}"
        )
    P[r.index] = new
    return StochasticMatrix(P, prec)


def perturbation_sequence(P):
    """Yield ``P_1, ..., P_m``: the uniform chain with rows of ``P`` swapped in."""
    current = uniform_chain(np.asarray(P).shape[0], PrecisionMode.of(P))
    for i in range(current.m):
        current = replace_row(current, build_perturbation_row(P, i))
        yield current


def parse_csv(text: str) -> list[list[float]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise MatrixFormatError(f"line {lineno}: {exc}") from exc
    _check_rectangular(rows)
    return rows


def parse_json(text: str) -> list[list[float]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "rows" not in doc:
        raise MatrixFormatError('expected an object with a "rows" field')
    rows = doc["rows"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MatrixFormatError('"rows" must be a list of lists')
    _check_rectangular(rows)
    if "m" in doc and doc["m"] != len(rows):
        raise MatrixFormatError(f'"m" is {doc["m"]} but {len(rows)} rows were given')
    try:
        return [[float(x) for x in r] for r in rows]
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"non-numeric entry: {exc}") from exc


def _check_rectangular(rows):
    if not rows:
        raise MatrixFormatError("no rows found")
    width = len(rows[0])
    for k, r in enumerate(rows):
        if len(r) != width:
            raise MatrixFormatError(f"ragged input: row {k} has {len(r)} entries, expected {width}")


def load_matrix(path, precision=PrecisionMode.DOUBLE) -> StochasticMatrix:
    """Read and validate a matrix from a CSV or JSON file.

    The format is picked from the suffix (``.json`` means JSON); anything
    else is treated as CSV.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        rows = parse_json(text)
    else:
        rows = parse_csv(text)
    return validate_stochastic(rows, precision)
