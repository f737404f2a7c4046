"""Peer evaluation mechanisms.

A mechanism maps an evaluation matrix to a vector of perceived shares that
sums to one. Two baselines where every student splits one unit ("pie")
among the team, and the auxiliary-matrix mechanism which only uses
third-party judgements and so never reads self-evaluations.
"""

from __future__ import annotations

import enum
import warnings

import numpy as np

from . import _backend
from .core import (
    AuxiliaryMatrix,
    EvaluationMatrix,
    as_contribution_vector,
    as_weights,
    normalize_columns,
    validate_matrix,
)
from .errors import (
    DegenerateTruth,
    NoInformedJudges,
    NoValidColumns,
    TeamTooSmall,
    TheoremPreconditionWarning,
)


class MechanismKind(enum.Enum):
    PIE_TO_ALL = "pie-to-all"
    PIE_TO_OTHERS = "pie-to-others"
    AUXILIARY_WEIGHTED = "auxiliary"

    @property
    def uses_self_evaluation(self) -> bool:
        return self is MechanismKind.PIE_TO_ALL


def pie_to_all(A) -> np.ndarray:
    """Average piece of pie received, self-evaluations included."""
    A = normalize_columns(validate_matrix(A))
    return A.entries.mean(axis=1)


def pie_to_others(A) -> np.ndarray:
    """Average piece of pie received when nobody may keep any for themselves."""
    A = normalize_columns(validate_matrix(A, require_zero_diagonal=True))
    return A.entries.mean(axis=1)


def auxiliary_matrix(A, w=None) -> AuxiliaryMatrix:
    """Pairwise contribution ratios estimated by third parties.

    ``b[i, j]`` is the ratio of i's contribution to j's according to every
    other student ``k``, each judgement ``a[i,k] / (a[i,k] + a[j,k])``
    weighted by the instructor's grade ``w[k]`` for k's reports. Omitting
    ``w`` weighs every judge equally. Judges with a zero grade, or who gave
    both students zero, are skipped.

    Self-evaluations never enter the formula. Each column of ``A`` may be on
    its own scale.
    """
    A = validate_matrix(A)
    n = A.n
    if n < 3:
        raise TeamTooSmall(n)
    w = np.ones(n) if w is None else as_weights(w, n)
    _check_credible_judges(A, w)

    return AuxiliaryMatrix(_ratios(A.entries, w))


def _ratios(a, w) -> np.ndarray:
    # unchecked core shared with the manipulation search
    n = a.shape[0]
    a = np.ascontiguousarray(a, dtype=float)
    num, den = _backend.ratio_sums(a, np.ascontiguousarray(w, dtype=float))
    b = np.full((n, n), np.nan)
    pos = den > 0
    b[pos] = num[pos] / den[pos]
    b[~pos & (num > 0)] = np.inf
    np.fill_diagonal(b, 1.0)
    if n > 1 and np.isnan(b[~np.eye(n, dtype=bool)]).all():
        raise NoInformedJudges()
    return b


def _check_credible_judges(A: EvaluationMatrix, w):
    credible = sum(1 for j in range(A.n) if A.submitted[j] and w[j] > 0)
    if credible < 3:
        warnings.warn(
            f"only {credible} students submitted evaluations with a positive report grade; "
            "the mechanism is guaranteed accurate only with at least 3",
            TheoremPreconditionWarning,
            stacklevel=3,
        )


def main_mechanism(B) -> np.ndarray:
    """Average of the column-normalized auxiliary matrix.

    Columns holding an infinite or undefined ratio are left out of the
    average.
    """
    b = np.asarray(B, dtype=float)
    keep = np.isfinite(b).all(axis=0)
    if not keep.any():
        raise NoValidColumns()
    cols = b[:, keep]
    return (cols / cols.sum(axis=0)).mean(axis=1)


def truthful_matrix(t, self_evaluation: bool = False) -> EvaluationMatrix:
    """Reports of a team in which everybody tells the truth.

    Student ``j`` gives each teammate ``t_i / (1 - t_j)``, i.e. splits the
    pie among the others in proportion to their true shares. With
    ``self_evaluation`` the diagonal holds ``t_j / (1 - t_j)`` as well, so
    each column is proportional to ``t``.
    """
    t = as_contribution_vector(t)
    full = np.flatnonzero(t >= 1.0)
    if full.size:
        raise DegenerateTruth(int(full[0]))
    a = t[:, None] / (1.0 - t[None, :])
    if not self_evaluation:
        np.fill_diagonal(a, 0.0)
    return EvaluationMatrix(a)


def run_mechanism(kind: MechanismKind | str, A, w=None) -> np.ndarray:
    kind = MechanismKind(kind)
    if kind is MechanismKind.PIE_TO_ALL:
        return pie_to_all(A)
    if kind is MechanismKind.PIE_TO_OTHERS:
        return pie_to_others(A)
    return main_mechanism(auxiliary_matrix(A, w))
