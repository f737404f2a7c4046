"""File formats: roster, long-form evaluations, instructor grades, scenarios, reports.

All tabular inputs are UTF-8 CSV with a header row. Reports are JSON with
a fixed key order; derived numbers are rounded to 12 significant digits,
raw evaluations are written at full precision so they reload unchanged.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import EvaluationMatrix
from .errors import DuplicateCell, NegativeScore, ParseError, UnknownStudent, ValidationError

INF = "inf"
UNDEFINED = "undefined"
DIGITS = 12

EVAL_COLUMNS = ("evaluator_id", "evaluatee_id", "score")
GRADE_COLUMNS = ("student_id", "grade")


@dataclass(frozen=True)
class Roster:
    ids: tuple
    names: tuple

    def __post_init__(self):
        if not self.ids:
            raise ValidationError("roster is empty")
        if any(not i for i in self.ids):
            raise ValidationError("roster ids must be nonempty")
        if len(set(self.ids)) != len(self.ids):
            dup = next(i for i in self.ids if self.ids.count(i) > 1)
            raise ValidationError(f"duplicate roster id {dup!r}")
        if len(self.names) != len(self.ids):
            raise ValidationError("roster names and ids differ in length")

    @classmethod
    def from_ids(cls, ids, names=None):
        ids = tuple(ids)
        return cls(ids, tuple(names) if names is not None else ids)

    def __len__(self):
        return len(self.ids)

    def index(self, student_id: str, line=None) -> int:
        try:
            return self.ids.index(student_id)
        except ValueError:
            raise UnknownStudent(student_id, line) from None


def _read_rows(path, columns, aliases=None):
    """Yield ``(line_number, {column: value})`` for each data row."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = None
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            cells = [c.strip() for c in row]
            if header is None:
                header = [(aliases or {}).get(c.lower(), c.lower()) for c in cells]
                lost = [c for c in columns if c not in header]
                if lost:
                    raise ParseError(f"header lacks column(s) {', '.join(lost)}", reader.line_num, path)
                continue
            if len(cells) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(cells)}", reader.line_num, path)
            yield reader.line_num, dict(zip(header, cells))


def load_roster(path) -> Roster:
    """Roster CSV with columns ``id`` and optional ``name``; row order is matrix order."""
    ids, names = [], []
    for line, row in _read_rows(path, ("id",), {"student_id": "id", "display_name": "name"}):
        if not row["id"]:
            raise ParseError("empty student id", line, path)
        if row["id"] in ids:
            raise ParseError(f"duplicate student id {row['id']!r}", line, path)
        ids.append(row["id"])
        names.append(row.get("name") or row["id"])
    if not ids:
        raise ParseError("roster has no students", None, path)
    return Roster(tuple(ids), tuple(names))


def _number(text, line, path, what="score"):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric {what} {text!r}", line, path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite {what} {text!r}", line, path)
    return value


def load_evaluations(path, roster: Roster) -> tuple[EvaluationMatrix, set]:
    """Read long-form ``evaluator_id,evaluatee_id,score`` rows.

    Returns the matrix in roster order (``a[evaluatee, evaluator]``) and the
    set of roster ids that submitted nothing. Cells a submitting student
    left out are zero, with a warning.
    """
    n = len(roster)
    a = np.zeros((n, n))
    seen = np.zeros((n, n), dtype=bool)
    aliases = {"evaluator": "evaluator_id", "evaluatee": "evaluatee_id"}
    for line, row in _read_rows(path, EVAL_COLUMNS, aliases):
        j = roster.index(row["evaluator_id"], line)
        i = roster.index(row["evaluatee_id"], line)
        score = _number(row["score"], line, path)
        if score < 0:
            raise NegativeScore(row["evaluatee_id"], row["evaluator_id"], line)
        if seen[i, j]:
            raise DuplicateCell(row["evaluatee_id"], row["evaluator_id"], line)
        seen[i, j] = True
        a[i, j] = score
    submitted = seen.any(axis=0)
    for j in np.flatnonzero(submitted):
        gaps = [roster.ids[i] for i in range(n) if i != j and not seen[i, j]]
        if gaps:
            warnings.warn(f"{roster.ids[j]} did not evaluate {', '.join(gaps)}; treated as 0")
    missing = {roster.ids[j] for j in range(n) if not submitted[j]}
    return EvaluationMatrix(a, tuple(submitted)), missing


def load_instructor_grades(path, roster: Roster, default_zero: bool = False) -> np.ndarray:
    """Read ``student_id,grade`` rows into a vector in roster order.

    Students without a row are an error unless ``default_zero`` is set. An
    empty file is accepted only with ``default_zero``.
    """
    w = np.full(len(roster), np.nan)
    path = Path(path)
    if path.read_text(encoding="utf-8").strip():
        for line, row in _read_rows(path, GRADE_COLUMNS, {"id": "student_id"}):
            i = roster.index(row["student_id"], line)
            grade = _number(row["grade"], line, path, "grade")
            if grade < 0:
                raise ParseError(f"negative grade {grade} for {row['student_id']!r}", line, path)
            if not np.isnan(w[i]):
                raise ParseError(f"duplicate grade for {row['student_id']!r}", line, path)
            w[i] = grade
    absent = np.isnan(w)
    if absent.any():
        if not default_zero:
            lost = ", ".join(roster.ids[i] for i in np.flatnonzero(absent))
            raise ParseError(f"no grade for {lost}", None, path)
        w[absent] = 0.0
    return w


# --- report encoding ---------------------------------------------------------


def fmt(x):
    """JSON-ready number: 12 significant digits, sentinels for inf and nan."""
    x = float(x)
    if math.isnan(x):
        return UNDEFINED
    if math.isinf(x):
        return INF if x > 0 else "-inf"
    return float(f"{x:.{DIGITS}g}")


def encode_matrix(m, exact: bool = False) -> list:
    m = np.asarray(m, dtype=float)
    if exact:
        return [[_exact(x) for x in row] for row in m]
    return [[fmt(x) for x in row] for row in m]


def _exact(x):
    if math.isnan(x):
        return UNDEFINED
    if math.isinf(x):
        return INF
    return float(x)


def decode_matrix(rows) -> np.ndarray:
    def one(x):
        if x == INF:
            return math.inf
        if x == UNDEFINED:
            return math.nan
        return float(x)

    return np.array([[one(x) for x in row] for row in rows], dtype=float)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str):
    """Write ``text`` so that ``path`` is either complete or untouched."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def scores_csv(report: dict) -> str:
    cols = ("id", "name", "mechanism_share", "report_grade", "eval_error", "final_score")
    lines = [",".join(cols)]
    for row in report["students"]:
        lines.append(",".join(_csv_cell(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _csv_cell(v):
    text = repr(v) if isinstance(v, float) else str(v)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def scores_text(report: dict) -> str:
    head = f"mechanism: {report['mechanism']}  weights: " + "/".join(
        str(v) for v in report["score_weights"].values()
    )
    rows = [("id", "share", "report", "error", "final")]
    for r in report["students"]:
        mark = "*" if not r["submitted"] else ""
        rows.append(
            (
                r["id"] + mark,
                f"{r['mechanism_share']:.6f}",
                f"{r['report_grade']:.4f}",
                f"{r['eval_error']:.4f}",
                f"{r['final_score']:.6f}",
            )
        )
    widths = [max(len(r[c]) for r in rows) for c in range(5)]
    out = [head]
    for r in rows:
        out.append("  ".join(cell.ljust(widths[c]) if c == 0 else cell.rjust(widths[c]) for c, cell in enumerate(r)))
    if report["imputed"]:
        out.append("* no evaluations submitted; column imputed")
    return "\n".join(out) + "\n"


# --- scenarios ----------------------------------------------------------------


def parse_share(value, where="truth"):
    """A share given as a number or a fraction string such as ``"1/4"``."""
    if isinstance(value, bool):
        raise ValidationError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"{where}: cannot read {value!r} as a number")


def load_scenario(path) -> dict:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, path) from None
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object", 1, path)
    return data
