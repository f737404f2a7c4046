"""Simulation lab: accuracy trials and single-deviator manipulation search.

Everything here is deterministic given its arguments; random trials take an
explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .core import as_contribution_vector, check_index
from .errors import MechanismError, PeerEvalError, ResolutionTooCoarse, ValidationError
from .mechanisms import MechanismKind, _ratios, main_mechanism, run_mechanism, truthful_matrix
from .scoring import ScoreWeights, evaluation_error

ACCURACY_TOL = 1e-9
MIN_SHARE = 1e-3
DEFAULT_RESOLUTION = 60
OBJECTIVES = ("mechanism_share", "final_score")


# --- accuracy ---------------------------------------------------------------


@dataclass
class TrialResult:
    passed: bool
    max_error: float
    n: int
    seed: object
    t: np.ndarray
    w: np.ndarray
    s: np.ndarray | None = None
    message: str = ""


def random_truth(rng: np.random.Generator, n: int, min_share: float = MIN_SHARE) -> np.ndarray:
    """Uniform draw from the simplex, rejecting points near its boundary."""
    while True:
        t = rng.dirichlet(np.ones(n))
        if t.min() >= min_share:
            return t


def _run_truthful(t, w, rng, seed, tol) -> TrialResult:
    n = t.size
    a = truthful_matrix(t).entries * np.exp(rng.uniform(-5.0, 5.0, size=n))[None, :]
    try:
        s = run_mechanism(MechanismKind.AUXILIARY_WEIGHTED, a, w)
    except PeerEvalError as exc:
        return TrialResult(False, np.inf, n, seed, t, w, None, f"{type(exc).__name__}: {exc}")
    err = float(np.max(np.abs(s - t)))
    return TrialResult(err < tol, err, n, seed, t, w, s)


def accuracy_trial(n: int, seed, t=None, w=None, tol: float = ACCURACY_TOL) -> TrialResult:
    """One randomized check that truthful reports give back the truth.

    ``t`` and ``w`` are drawn when not given: ``t`` uniform on the simplex
    interior and ``w`` uniform on (0, 1]. Every column of the truthful
    matrix is rescaled by an independent random factor. Failure is reported
    in the result, not raised.
    """
    if n < 3:
        raise ValidationError(f"accuracy trials need n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    t = random_truth(rng, n) if t is None else as_contribution_vector(t)
    w = 1.0 - rng.random(n) if w is None else np.asarray(w, dtype=float)
    if t.size != n or w.size != n:
        raise ValidationError("t and w must have n entries")
    return _run_truthful(t, w, rng, seed, tol)


def zero_contributor_trial(n: int, seed, tol: float = ACCURACY_TOL) -> TrialResult:
    """Like :func:`accuracy_trial` but with exactly one student who did nothing."""
    if n < 3:
        raise ValidationError(f"zero-contributor trials need n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    rest = random_truth(rng, n - 1)
    t = np.insert(rest, rng.integers(n), 0.0)
    w = 1.0 - rng.random(n)
    return _run_truthful(t, w, rng, seed, tol)


def accuracy_suite(count: int, sizes: Sequence[int], seed: int = 0, zero_contributor: bool = False) -> dict:
    """Run ``count`` trials cycling through team ``sizes``; trial i uses seed ``(seed, i)``."""
    trial = zero_contributor_trial if zero_contributor else accuracy_trial
    sizes = list(sizes)
    failures = []
    worst = 0.0
    for i in range(count):
        res = trial(sizes[i % len(sizes)], (seed, i))
        worst = max(worst, res.max_error)
        if not res.passed:
            failures.append({"trial": i, "n": res.n, "max_error": res.max_error, "message": res.message})
    return {
        "trials": count,
        "sizes": sizes,
        "seed": seed,
        "zero_contributor": zero_contributor,
        "failures": len(failures),
        "max_error": worst,
        "failed_trials": failures,
    }


# --- manipulation -----------------------------------------------------------


@dataclass
class ManipulationResult:
    """Best single deviation found for one student.

    For the ``final_score`` objective ``honest_share`` and ``best_share``
    hold final scores rather than mechanism shares.
    """

    manipulator: int
    honest_share: float
    best_share: float
    best_report: np.ndarray
    gain: float
    grid_resolution: int
    objective: str = "mechanism_share"
    evaluated: int = 0
    skipped: int = 0
    best_mechanism_share: float = field(default=float("nan"))


def simplex_grid(parts: int, resolution: int) -> Iterator[tuple[int, ...]]:
    """Every ordered way to split ``resolution`` into ``parts`` nonnegative ints."""
    last = resolution + parts - 1
    for bars in combinations(range(last), parts - 1):
        prev = -1
        point = []
        for b in bars:
            point.append(b - prev - 1)
            prev = b
        point.append(last - prev - 1)
        yield tuple(point)


class _Game:
    """Everybody but ``j`` reports the truth; evaluates j's candidate columns."""

    def __init__(self, t, j, kind, objective, weights):
        self.t, self.j, self.kind = t, j, kind
        self.objective, self.weights = objective, weights
        self.n = t.size
        self.with_self = kind.uses_self_evaluation or objective == "final_score"
        self.full = truthful_matrix(t, self_evaluation=self.with_self).entries.copy()
        self.w = np.ones(self.n)

    @property
    def slots(self) -> list[int]:
        return list(range(self.n)) if self.with_self else [i for i in range(self.n) if i != self.j]

    def honest_column(self) -> np.ndarray:
        return self.full[:, self.j].copy()

    def evaluate(self, column) -> tuple[float, float]:
        """Objective value and mechanism share of j for a reported column."""
        a = self.full.copy()
        a[:, self.j] = column
        if self.kind is MechanismKind.AUXILIARY_WEIGHTED:
            s = main_mechanism(_ratios(a, self.w))
        else:
            mech = a.copy()
            if not self.kind.uses_self_evaluation:
                np.fill_diagonal(mech, 0.0)
            s = run_mechanism(self.kind, mech, self.w)
        share = float(s[self.j])
        if self.objective == "mechanism_share":
            return share, share
        E = evaluation_error(a, s, self.j)
        ws = self.weights
        return ws.mechanism * share + ws.report + ws.consistency * (1.0 - min(1.0, E)), share


def manipulation_search(
    t,
    j: int,
    resolution: int = DEFAULT_RESOLUTION,
    objective: str = "mechanism_share",
    kind: MechanismKind | str = MechanismKind.AUXILIARY_WEIGHTED,
    weights: ScoreWeights = ScoreWeights(),
) -> ManipulationResult:
    """Exhaustive search over student ``j``'s reports, others truthful.

    Candidate reports are the points of a simplex grid with spacing
    ``1 / resolution`` over the entries the objective reads (teammates only,
    plus the self-evaluation when the mechanism or the consistency term
    uses it). Reports are scale-free, so the grid covers every report up to
    its spacing. Instructor grades are all equal. The honest report is
    always evaluated first and wins ties, so ``gain >= 0``.
    """
    t = as_contribution_vector(t)
    n = t.size
    j = check_index(j, n)
    kind = MechanismKind(kind)
    if objective not in OBJECTIVES:
        raise ValidationError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    if resolution < n - 1:
        raise ResolutionTooCoarse(resolution, n - 1)
    game = _Game(t, j, kind, objective, weights)

    honest = game.honest_column()
    honest_value, honest_share = game.evaluate(honest)
    best_value, best_share, best_col = honest_value, honest_share, honest
    evaluated, skipped = 1, 0
    slots = game.slots
    for point in simplex_grid(len(slots), resolution):
        col = np.zeros(n)
        col[slots] = point
        try:
            value, share = game.evaluate(col)
        except MechanismError:
            skipped += 1
            continue
        evaluated += 1
        if value > best_value:
            best_value, best_share, best_col = value, share, col
    return ManipulationResult(
        manipulator=j,
        honest_share=honest_value,
        best_share=best_value,
        best_report=best_col / best_col.sum(),
        gain=best_value - honest_value,
        grid_resolution=resolution,
        objective=objective,
        evaluated=evaluated,
        skipped=skipped,
        best_mechanism_share=best_share,
    )


def deviation_share(t, j: int, column, kind=MechanismKind.AUXILIARY_WEIGHTED) -> float:
    """Mechanism share of ``j`` when j reports ``column`` and everyone else is truthful."""
    t = as_contribution_vector(t)
    j = check_index(j, t.size)
    game = _Game(t, j, MechanismKind(kind), "mechanism_share", ScoreWeights())
    return game.evaluate(np.asarray(column, dtype=float))[0]


def incentive_experiment(
    t,
    weights: ScoreWeights = ScoreWeights(),
    resolution: int = DEFAULT_RESOLUTION,
    kind: MechanismKind | str = MechanismKind.AUXILIARY_WEIGHTED,
) -> list[dict]:
    """Honest vs best final score for every student acting alone.

    Evidence only; whether the gains vanish depends on the weights and is
    not asserted anywhere.
    """
    t = as_contribution_vector(t)
    objective = "final_score" if weights.as_tuple() != (1.0, 0.0, 0.0) else "mechanism_share"
    rows = []
    for j in range(t.size):
        res = manipulation_search(t, j, resolution, objective, kind, weights)
        rows.append(
            {
                "manipulator": j,
                "mechanism_weight": weights.mechanism,
                "report_weight": weights.report,
                "consistency_weight": weights.consistency,
                "honest": res.honest_share,
                "best": res.best_share,
                "gain": res.gain,
                "best_mechanism_share": res.best_mechanism_share,
                "best_report": [float(x) for x in res.best_report],
            }
        )
    return rows


def weight_sweep(
    t,
    consistency_weights: Sequence[float] = (0.0, 0.05, 0.1, 0.2),
    report_weight: float = 0.05,
    resolution: int = DEFAULT_RESOLUTION,
    kind: MechanismKind | str = MechanismKind.AUXILIARY_WEIGHTED,
) -> list[dict]:
    """:func:`incentive_experiment` for each consistency weight.

    The report weight stays fixed and the mechanism weight takes the rest.
    """
    rows = []
    for c in consistency_weights:
        weights = ScoreWeights(1.0 - report_weight - c, report_weight, c)
        rows.extend(incentive_experiment(t, weights, resolution, kind))
    return rows
