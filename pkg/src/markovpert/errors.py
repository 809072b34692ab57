"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for bad input
matrices and vectors, and :class:`NumericalError` for breakdowns during a
computation (vanishing update denominators, singular systems).  The CLI maps
them to distinct exit codes.
"""


class MarkovError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MarkovError, ValueError):
    """Input does not describe a valid object."""


class NotSquareError(ValidationError):
    pass


class MatrixFormatError(ValidationError):
    """A matrix file could not be parsed (ragged rows, bad tokens, ...)."""


class NegativeEntryError(ValidationError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"negative entry p[{i},{j}] = {value!r}")


class RowSumError(ValidationError):
    def __init__(self, i, total, tol):
        self.i, self.total, self.tol = i, total, tol
        super().__init__(f"row {i} sums to {total!r} (tolerance {tol:.3g})")


class ReducibleError(ValidationError):
    """The positive-entry graph is not strongly connected.

    ``partition`` is a pair ``(closed, rest)`` of sorted state lists that
    witnesses the failure: either no path leads from ``closed`` to ``rest``
    or none leads back.
    """

    def __init__(self, partition, message=None):
        self.partition = partition
        super().__init__(message or f"chain is reducible; witness partition {partition}")


class ResultNotStochasticError(ValidationError):
    pass


class InconsistentInputError(ValidationError):
    pass


class LengthMismatchError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class NumericalError(MarkovError, ArithmeticError):
    """A computation broke down numerically."""


class SingularSystemError(NumericalError):
    def __init__(self, pivot, threshold):
        self.pivot, self.threshold = pivot, threshold
        super().__init__(f"system is numerically singular: |pivot| = {pivot:.3g} < {threshold:.3g}")


class NearSingularUpdateError(NumericalError):
    def __init__(self, denominator, threshold, step=None):
        self.denominator, self.threshold, self.step = denominator, threshold, step
        where = "" if step is None else f" at step {step}"
        super().__init__(
            f"rank-one update denominator {denominator!r} below {threshold:.3g}{where}"
        )


class DegenerateProjectionError(NumericalError):
    pass


class NotRowConstantError(NumericalError):
    pass
