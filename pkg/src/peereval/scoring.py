"""Truthfulness metric and the composite final grade."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_evaluation_matrix, as_weights, check_index
from .errors import LengthMismatch, NoComparableEntries, ValidationError, ZeroColumn


@dataclass(frozen=True)
class ScoreWeights:
    """How the final grade splits between mechanism share, report grade and consistency."""

    mechanism: float = 0.9
    report: float = 0.05
    consistency: float = 0.05

    def __post_init__(self):
        parts = (self.mechanism, self.report, self.consistency)
        if any(not np.isfinite(p) or p < 0 for p in parts):
            raise ValidationError(f"score weights must be nonnegative: {parts}")
        if abs(sum(parts) - 1.0) > 1e-12:
            raise ValidationError(f"score weights must sum to 1, got {sum(parts)!r}")

    @classmethod
    def parse(cls, text: str) -> "ScoreWeights":
        try:
            parts = [float(x) for x in text.split(",")]
        except ValueError:
            raise ValidationError(f"cannot parse score weights {text!r}") from None
        if len(parts) != 3:
            raise ValidationError(f"expected three comma-separated weights, got {text!r}")
        return cls(*parts)

    def as_tuple(self):
        return (self.mechanism, self.report, self.consistency)


def evaluation_error(A_with_self, s, j: int, paper_formula: bool = False) -> float:
    """Mean relative deviation of student j's normalized column from ``s``.

    Entry ``i`` of the column is compared with ``s[i]``; students with a zero
    share are left out. With ``paper_formula`` every entry is compared with
    the single value ``s[j]`` instead, the literal form of the printed
    expression (kept for audits; it is not zero for truthful columns).
    """
    A = as_evaluation_matrix(A_with_self)
    s = np.asarray(s, dtype=float)
    if s.shape != (A.n,):
        raise LengthMismatch(A.n, s.size, "share vector")
    j = check_index(j, A.n)
    col = A.entries[:, j]
    total = col.sum()
    if not total > 0:
        raise ZeroColumn(j)
    c = col / total
    if paper_formula:
        if not s[j] > 0:
            raise NoComparableEntries()
        return float(np.mean(np.abs(c - s[j]) / s[j]))
    keep = s > 0
    if not keep.any():
        raise NoComparableEntries()
    return float(np.mean(np.abs(c[keep] - s[keep]) / s[keep]))


def evaluation_errors(A_with_self, s, paper_formula: bool = False) -> np.ndarray:
    """``evaluation_error`` for every student.

    Students whose column was imputed get an error of at least 1, which
    zeroes their consistency bonus.
    """
    A = as_evaluation_matrix(A_with_self)
    E = np.array([evaluation_error(A, s, j, paper_formula) for j in range(A.n)])
    imputed = ~np.array(A.submitted)
    E[imputed] = np.maximum(E[imputed], 1.0)
    return E


def normalize_report_grades(w, max_grade: float | None = None) -> np.ndarray:
    """Map raw report grades onto [0, 1] by the declared maximum grade.

    Without ``max_grade`` the best grade awarded is used (or 1 if every
    grade is zero).
    """
    w = as_weights(w)
    if max_grade is None:
        max_grade = float(w.max()) if w.size and w.max() > 0 else 1.0
    if not max_grade > 0:
        raise ValidationError(f"maximum report grade must be positive, got {max_grade}")
    if np.any(w > max_grade):
        raise ValidationError(f"report grade above declared maximum {max_grade}: {w.max()}")
    return w / max_grade


@dataclass(frozen=True)
class ScoreReport:
    mechanism_share: np.ndarray
    report_grade: np.ndarray
    eval_error: np.ndarray
    final_score: np.ndarray
    weights: ScoreWeights

    def __len__(self):
        return len(self.final_score)

    def records(self) -> list[dict]:
        return [
            {
                "mechanism_share": float(self.mechanism_share[i]),
                "report_grade": float(self.report_grade[i]),
                "eval_error": float(self.eval_error[i]),
                "final_score": float(self.final_score[i]),
            }
            for i in range(len(self))
        ]


def consistency_term(E, weights: ScoreWeights = ScoreWeights()) -> np.ndarray:
    return weights.consistency * (1.0 - np.minimum(1.0, np.asarray(E, dtype=float)))


def compose_final_scores(s, w, E, weights: ScoreWeights = ScoreWeights()) -> ScoreReport:
    """Blend mechanism share, report grade and evaluation consistency.

    ``w`` must already be on [0, 1] (see :func:`normalize_report_grades`).
    """
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    E = np.asarray(E, dtype=float)
    n = s.size
    for name, v in (("report grades", w), ("evaluation errors", E)):
        if v.shape != (n,):
            raise LengthMismatch(n, v.size, name)
    if np.any(E < 0) or np.any(np.isnan(E)):
        raise ValidationError(f"evaluation errors must be nonnegative: {E}")
    if np.any(w < 0) or np.any(w > 1):
        raise ValidationError(f"report grades must be normalized to [0, 1]: {w}")
    final = weights.mechanism * s + weights.report * w + consistency_term(E, weights)
    return ScoreReport(s, w, E, final, weights)
