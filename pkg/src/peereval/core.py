"""Domain types and the preprocessing shared by every mechanism.

Conventions
-----------
``a[i, j]`` is the evaluation of student ``i`` reported by student ``j``.
Column ``j`` is therefore everything student ``j`` submitted and row ``i``
is everything student ``i`` received.

Auxiliary-matrix entries are plain floats: a finite value, ``inf`` (the
ratio's denominator vanished while its numerator did not) or ``nan``
(both vanished, the ratio is undefined).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    AllMissing,
    InvalidIndex,
    LengthMismatch,
    NegativeEntry,
    NonzeroDiagonal,
    NotSquare,
    TooSmall,
    ValidationError,
    ZeroColumn,
)

SUM_TOL = 1e-12
RECIPROCAL_RTOL = 1e-9
IMPUTED_SCORE = 1.0


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class EvaluationMatrix:
    """Raw peer evaluations plus a flag per column saying whether it was submitted."""

    entries: np.ndarray
    submitted: tuple = field(default=None)

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise NotSquare(entries.shape)
        object.__setattr__(self, "entries", entries)
        if self.submitted is None:
            object.__setattr__(self, "submitted", (True,) * entries.shape[0])
        else:
            submitted = tuple(bool(x) for x in self.submitted)
            if len(submitted) != entries.shape[0]:
                raise LengthMismatch(entries.shape[0], len(submitted), "submitted flags")
            object.__setattr__(self, "submitted", submitted)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def received(self, i: int) -> np.ndarray:
        """Evaluations received by student ``i`` (row view)."""
        return self.entries[i, :]

    def reported(self, j: int) -> np.ndarray:
        """Evaluations reported by student ``j`` (column view)."""
        return self.entries[:, j]

    def without_self_evaluation(self) -> "EvaluationMatrix":
        entries = self.entries.copy()
        np.fill_diagonal(entries, 0.0)
        return EvaluationMatrix(entries, self.submitted)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries.copy()
        return self.entries.astype(dtype)


@dataclass(frozen=True)
class AuxiliaryMatrix:
    """Pairwise contribution ratios ``b[i, j]`` (student i relative to student j)."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def infinite(self) -> np.ndarray:
        return np.isinf(self.entries)

    @property
    def undefined(self) -> np.ndarray:
        return np.isnan(self.entries)

    @property
    def qualifying_columns(self) -> np.ndarray:
        """Boolean mask of columns with every entry finite."""
        return np.isfinite(self.entries).all(axis=0)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries.copy()
        return self.entries.astype(dtype)


def as_evaluation_matrix(A) -> EvaluationMatrix:
    if isinstance(A, EvaluationMatrix):
        return A
    return EvaluationMatrix(np.asarray(A, dtype=float))


def as_contribution_vector(values, tol: float = SUM_TOL) -> np.ndarray:
    """Validate a share vector: nonnegative entries summing to one."""
    t = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValidationError(f"contribution vector must be 1-D and nonempty, got shape {t.shape}")
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ValidationError(f"contribution vector must be finite and nonnegative: {t}")
    if abs(t.sum() - 1.0) > tol:
        raise ValidationError(f"contribution vector sums to {t.sum()!r}, not 1")
    return t


def as_weights(values, n: int | None = None) -> np.ndarray:
    """Validate instructor report grades (nonnegative, any scale)."""
    w = np.asarray(values, dtype=float)
    if w.ndim != 1:
        raise ValidationError(f"instructor weights must be 1-D, got shape {w.shape}")
    if n is not None and w.size != n:
        raise LengthMismatch(n, w.size, "instructor weights")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValidationError(f"instructor weights must be finite and nonnegative: {w}")
    return w


def check_index(j: int, n: int) -> int:
    if not isinstance(j, (int, np.integer)) or not 0 <= j < n:
        raise InvalidIndex(j, n)
    return int(j)


def validate_matrix(A, require_zero_diagonal: bool = False) -> EvaluationMatrix:
    """Check the structural assumptions on an evaluation matrix.

    Returns the input (wrapped as :class:`EvaluationMatrix`) if every entry is
    nonnegative, the team has at least two members and, when
    ``require_zero_diagonal`` is set, nobody evaluated themselves.
    """
    A = as_evaluation_matrix(A)
    a = A.entries
    if A.n < 2:
        raise TooSmall(A.n)
    bad = np.argwhere(~(a >= 0))
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise NegativeEntry(i, j, a[i, j])
    if require_zero_diagonal:
        diag = np.flatnonzero(np.diag(a) != 0)
        if diag.size:
            i = int(diag[0])
            raise NonzeroDiagonal(i, a[i, i])
    return A


def normalize_columns(A) -> EvaluationMatrix:
    """Rescale every column to sum to one."""
    A = as_evaluation_matrix(A)
    sums = A.entries.sum(axis=0)
    zero = np.flatnonzero(~(sums > 0))
    if zero.size:
        raise ZeroColumn(int(zero[0]))
    return EvaluationMatrix(A.entries / sums, A.submitted)


def impute_missing(A, missing: Iterable[int], w) -> tuple[EvaluationMatrix, np.ndarray]:
    """Fill the columns of students who submitted nothing.

    Each missing column gets the same score for every teammate and a zero
    self-evaluation, and the student's report grade is forced to zero so the
    made-up column carries no weight in the auxiliary matrix.
    """
    A = as_evaluation_matrix(A)
    w = as_weights(w, A.n).copy()
    missing = sorted({check_index(j, A.n) for j in missing})
    if len(missing) == A.n:
        raise AllMissing()
    if not missing:
        return A, w
    entries = A.entries.copy()
    submitted = list(A.submitted)
    for j in missing:
        entries[:, j] = IMPUTED_SCORE
        entries[j, j] = 0.0
        w[j] = 0.0
        submitted[j] = False
    return EvaluationMatrix(entries, tuple(submitted)), w


def reciprocity_violations(B, rtol: float = RECIPROCAL_RTOL) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` with both ratios finite but ``b_ij * b_ji`` not 1.

    Diagonal entries other than exactly 1 are reported as ``(i, i)``.
    """
    b = np.asarray(B, dtype=float)
    bad = [(i, i) for i in range(b.shape[0]) if b[i, i] != 1.0]
    for i in range(b.shape[0]):
        for j in range(i + 1, b.shape[0]):
            if np.isfinite(b[i, j]) and np.isfinite(b[j, i]):
                if abs(b[i, j] * b[j, i] - 1.0) > rtol:
                    bad.append((i, j))
    return bad
