"""Peer evaluation mechanisms for team projects."""

from ._backend import BACKEND
from .core import (
    AuxiliaryMatrix,
    EvaluationMatrix,
    as_contribution_vector,
    impute_missing,
    normalize_columns,
    validate_matrix,
)
from .mechanisms import (
    MechanismKind,
    auxiliary_matrix,
    main_mechanism,
    pie_to_all,
    pie_to_others,
    run_mechanism,
    truthful_matrix,
)
from .scoring import ScoreReport, ScoreWeights, compose_final_scores, evaluation_error, evaluation_errors

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AuxiliaryMatrix",
    "EvaluationMatrix",
    "MechanismKind",
    "ScoreReport",
    "ScoreWeights",
    "as_contribution_vector",
    "auxiliary_matrix",
    "compose_final_scores",
    "evaluation_error",
    "evaluation_errors",
    "impute_missing",
    "main_mechanism",
    "normalize_columns",
    "pie_to_all",
    "pie_to_others",
    "run_mechanism",
    "truthful_matrix",
    "validate_matrix",
]
