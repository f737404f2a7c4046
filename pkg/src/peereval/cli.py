"""Command line front end.

    peereval compute --evals E.csv --grades G.csv --roster R.csv [--out FILE]
    peereval simulate --scenario S.json [--out FILE]

Exit codes: 0 success, 1 invalid input, 2 mechanism failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import io, simlab
from .core import impute_missing
from .errors import MechanismError, PeerEvalError, ValidationError
from .mechanisms import MechanismKind, auxiliary_matrix, main_mechanism, run_mechanism
from .scoring import ScoreWeights, compose_final_scores, evaluation_errors, normalize_report_grades

EXIT_OK, EXIT_INVALID, EXIT_MECHANISM, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    mechanism: MechanismKind = MechanismKind.AUXILIARY_WEIGHTED
    score_weights: ScoreWeights = field(default_factory=ScoreWeights)
    max_report_grade: float | None = None
    grid_resolution: int = simlab.DEFAULT_RESOLUTION
    output_format: str = "json"
    literal_error: bool = False


def compute_report(roster: io.Roster, A, missing, w_raw, config: RunConfig = RunConfig()) -> dict:
    """Impute, run the mechanism, score, and collect every intermediate for audit."""
    kind = MechanismKind(config.mechanism)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        missing_idx = [roster.index(m) for m in missing]
        A_imp, w = impute_missing(A, missing_idx, w_raw)
        mech_input = A_imp if kind.uses_self_evaluation else A_imp.without_self_evaluation()

        B = None
        if kind is MechanismKind.AUXILIARY_WEIGHTED:
            B = auxiliary_matrix(mech_input, w)
            s = main_mechanism(B)
        else:
            s = run_mechanism(kind, mech_input, w)

        E = evaluation_errors(A_imp, s, paper_formula=config.literal_error)
        w_norm = normalize_report_grades(w, config.max_report_grade)
        scores = compose_final_scores(s, w_norm, E, config.score_weights)

    m = mech_input.entries
    sums = m.sum(axis=0)
    normalized = np.divide(m, sums, out=np.zeros_like(m), where=sums > 0)
    students = []
    for i, sid in enumerate(roster.ids):
        students.append(
            {
                "id": sid,
                "name": roster.names[i],
                "submitted": bool(A_imp.submitted[i]),
                "mechanism_share": io.fmt(scores.mechanism_share[i]),
                "report_grade_raw": io.fmt(w[i]),
                "report_grade": io.fmt(scores.report_grade[i]),
                "eval_error": io.fmt(scores.eval_error[i]),
                "final_score": io.fmt(scores.final_score[i]),
            }
        )
    return {
        "mechanism": kind.value,
        "score_weights": dict(
            zip(("mechanism", "report", "consistency"), (io.fmt(x) for x in config.score_weights.as_tuple()))
        ),
        "max_report_grade": io.fmt(config.max_report_grade or (w.max() if w.max() > 0 else 1.0)),
        "error_formula": "literal" if config.literal_error else "per-student",
        "students": students,
        "imputed": [roster.ids[j] for j in sorted(missing_idx)],
        "evaluations": io.encode_matrix(A.entries, exact=True),
        "normalized_evaluations": io.encode_matrix(normalized),
        "auxiliary_matrix": None if B is None else io.encode_matrix(B.entries),
        "qualifying_columns": None if B is None else [bool(x) for x in B.qualifying_columns],
        "sum_final_scores": io.fmt(scores.final_score.sum()),
        "warnings": [str(c.message) for c in caught],
    }


def cmd_compute(args) -> int:
    config = RunConfig(
        mechanism=MechanismKind(args.mechanism),
        score_weights=ScoreWeights.parse(args.weights),
        max_report_grade=args.max_grade,
        output_format=args.format,
        literal_error=args.literal_error,
    )
    roster = io.load_roster(args.roster)
    A, missing = io.load_evaluations(args.evals, roster)
    if args.grades:
        w = io.load_instructor_grades(args.grades, roster, default_zero=args.default_zero_grades)
    else:
        w = np.ones(len(roster))
    report = compute_report(roster, A, missing, w, config)
    if config.output_format == "csv":
        text = io.scores_csv(report)
    elif config.output_format == "text":
        text = io.scores_text(report)
    else:
        text = io.dumps(report)
    _emit(text, args.out)
    return EXIT_OK


# --- simulate -----------------------------------------------------------------


def _truth(spec, where):
    if not isinstance(spec, list):
        raise ValidationError(f"{where}: truth must be a list")
    return [io.parse_share(x, where) for x in spec]


def _sizes(spec, where):
    if "sizes" in spec:
        return [int(n) for n in spec["sizes"]]
    if "n_min" in spec and "n_max" in spec:
        return list(range(int(spec["n_min"]), int(spec["n_max"]) + 1))
    raise ValidationError(f"{where}: give 'sizes' or 'n_min'/'n_max'")


def run_scenario(data: dict, resolution: int = simlab.DEFAULT_RESOLUTION) -> dict:
    """Execute a scenario document; see README for the schema."""
    known = {"seed", "resolution", "accuracy", "zero_contributor", "manipulation", "incentive"}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    seed = int(data.get("seed", 0))
    resolution = int(data.get("resolution", resolution))
    out = {"seed": seed}

    for key, zero in (("accuracy", False), ("zero_contributor", True)):
        if key in data:
            spec = data[key]
            summary = simlab.accuracy_suite(int(spec.get("trials", 1000)), _sizes(spec, key), seed, zero)
            summary["max_error"] = io.fmt(summary["max_error"])
            out[key] = summary

    if "manipulation" in data:
        specs = data["manipulation"]
        rows = []
        for k, spec in enumerate(specs if isinstance(specs, list) else [specs]):
            where = f"manipulation[{k}]"
            t = _truth(spec.get("truth"), where)
            j = spec.get("manipulator")
            if not isinstance(j, int):
                raise ValidationError(f"{where}: manipulator must be a 0-based integer index")
            kind = spec.get("mechanism", MechanismKind.AUXILIARY_WEIGHTED.value)
            res = simlab.manipulation_search(
                t, j, int(spec.get("resolution", resolution)), spec.get("objective", "mechanism_share"), kind
            )
            row = {
                "truth": [io.fmt(x) for x in t],
                "manipulator": j,
                "mechanism": MechanismKind(kind).value,
                "objective": res.objective,
                "resolution": res.grid_resolution,
                "honest": io.fmt(res.honest_share),
                "best": io.fmt(res.best_share),
                "gain": io.fmt(res.gain),
                "best_report": [io.fmt(x) for x in res.best_report],
                "evaluated": res.evaluated,
                "skipped": res.skipped,
            }
            if "deviation" in spec:
                dev = [io.parse_share(x, where + ".deviation") for x in spec["deviation"]]
                share = simlab.deviation_share(t, j, dev, kind)
                row["deviation"] = [io.fmt(x) for x in dev]
                row["deviation_share"] = io.fmt(share)
                row["deviation_gain"] = io.fmt(share - res.honest_share) if res.objective == "mechanism_share" else None
            rows.append(row)
        out["manipulation"] = rows

    if "incentive" in data:
        spec = data["incentive"]
        t = _truth(spec.get("truth"), "incentive")
        table = simlab.weight_sweep(
            t,
            [float(c) for c in spec.get("consistency_weights", (0.0, 0.05, 0.1, 0.2))],
            float(spec.get("report_weight", 0.05)),
            int(spec.get("resolution", resolution)),
            spec.get("mechanism", MechanismKind.AUXILIARY_WEIGHTED.value),
        )
        out["incentive"] = [
            {k: ([io.fmt(x) for x in v] if isinstance(v, list) else io.fmt(v) if isinstance(v, float) else v)
             for k, v in row.items()}
            for row in table
        ]
    return out


def cmd_simulate(args) -> int:
    data = io.load_scenario(args.scenario)
    report = run_scenario(data, args.resolution)
    _emit(io.dumps(report), args.out)
    return EXIT_OK


# --- plumbing -------------------------------------------------------------------


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        io.write_atomic(out, text)


def _diagnose(exc, code) -> int:
    diag = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("line", "path", "i", "j", "student_id"):
        value = getattr(exc, attr, None)
        if value is not None:
            diag[attr] = str(value)
    sys.stderr.write(json.dumps(diag) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="peereval", description="Peer evaluation mechanisms for team projects.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="score a team from evaluation and grade files")
    p.add_argument("--mechanism", choices=[k.value for k in MechanismKind], default="auxiliary")
    p.add_argument("--evals", required=True, help="CSV with evaluator_id,evaluatee_id,score")
    p.add_argument("--grades", help="CSV with student_id,grade (default: everybody 1)")
    p.add_argument("--roster", required=True, help="CSV with id[,name]; row order is output order")
    p.add_argument("--weights", default="0.9,0.05,0.05", help="mechanism,report,consistency weights")
    p.add_argument("--max-grade", type=float, help="top of the report grading scale (default: best grade given)")
    p.add_argument("--default-zero-grades", action="store_true", help="students without a grade row get 0")
    p.add_argument("--literal-error", action="store_true", help="compare every entry of a column with s_j")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("simulate", help="run accuracy trials and manipulation searches")
    p.add_argument("--scenario", required=True, help="JSON scenario file")
    p.add_argument("--resolution", type=int, default=simlab.DEFAULT_RESOLUTION)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MechanismError as exc:
        return _diagnose(exc, EXIT_MECHANISM)
    except PeerEvalError as exc:
        return _diagnose(exc, EXIT_INVALID)
    except (OSError, UnicodeDecodeError) as exc:
        return _diagnose(exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
