"""Stationary distributions, group inverses and mean first passage times of
finite irreducible Markov chains by sequential row perturbation."""

from .algorithms import (
    AlgorithmId,
    AlgorithmResult,
    IterationRecord,
    RunSet,
    run_al1,
    run_al2,
    run_al3,
    run_al4,
    run_algorithm,
    run_all,
)
from .chain import (
    PerturbationRow,
    PrecisionMode,
    StochasticMatrix,
    build_perturbation_row,
    load_matrix,
    replace_row,
    uniform_chain,
    validate_stochastic,
)
from .errors import MarkovError, NumericalError, ValidationError
from .ginverse import (
    GeneralizedInverse,
    MfptForm,
    extract_parameters,
    fundamental_matrix,
    group_inverse_from_mfpt,
    make_tu_inverse,
    mfpt_from_ginverse,
    stationary_from_ginverse,
    to_group_inverse,
    to_H,
    verify_group_axioms,
)
from .gth import gth_stationary

__version__ = "0.1.0"

__all__ = [
    "MarkovError",
    "NumericalError",
    "ValidationError",
    "gth_stationary",
    "AlgorithmId",
    "AlgorithmResult",
    "IterationRecord",
    "RunSet",
    "run_al1",
    "run_al2",
    "run_al3",
    "run_al4",
    "run_algorithm",
    "run_all",
    "PerturbationRow",
    "PrecisionMode",
    "StochasticMatrix",
    "build_perturbation_row",
    "load_matrix",
    "replace_row",
    "uniform_chain",
    "validate_stochastic",
    "GeneralizedInverse",
    "MfptForm",
    "extract_parameters",
    "fundamental_matrix",
    "group_inverse_from_mfpt",
    "make_tu_inverse",
    "mfpt_from_ginverse",
    "stationary_from_ginverse",
    "to_group_inverse",
    "to_H",
    "verify_group_axioms",
]
