"""Exception hierarchy.

Everything raised on purpose by the package derives from ``PeerEvalError``.
``ValidationError`` covers malformed input (CLI exit code 1) and
``MechanismError`` covers inputs that are well formed but on which a
mechanism has nothing to say (CLI exit code 2).
"""


class PeerEvalError(Exception):
    pass


class ValidationError(PeerEvalError, ValueError):
    pass


class MechanismError(PeerEvalError, ArithmeticError):
    pass


class TheoremPreconditionWarning(UserWarning):
    """Fewer than three credible, complete evaluators: accuracy is not guaranteed."""


# --- input validation -------------------------------------------------------


class NegativeEntry(ValidationError):
    def __init__(self, i, j, value=None):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"negative evaluation a[{i},{j}] = {value}")


class NonzeroDiagonal(ValidationError):
    def __init__(self, i, value=None):
        self.i, self.value = i, value
        super().__init__(f"self-evaluation a[{i},{i}] = {value} where none is allowed")


class TooSmall(ValidationError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"a team needs at least 2 students, got {n}")


class NotSquare(ValidationError):
    def __init__(self, shape):
        self.shape = shape
        super().__init__(f"evaluation matrix must be square, got shape {shape}")


class ZeroColumn(ValidationError):
    def __init__(self, j):
        self.j = j
        super().__init__(f"column {j} has no positive entry")


class AllMissing(ValidationError):
    def __init__(self):
        super().__init__("no student submitted evaluations")


class DegenerateTruth(ValidationError):
    def __init__(self, j):
        self.j = j
        super().__init__(f"student {j} did all the work; truthful reports are undefined")


class LengthMismatch(ValidationError):
    def __init__(self, expected, got, what="vector"):
        self.expected, self.got = expected, got
        super().__init__(f"{what} has length {got}, expected {expected}")


class InvalidIndex(ValidationError):
    def __init__(self, j, n):
        self.j, self.n = j, n
        super().__init__(f"student index {j} out of range for team of {n}")


class ResolutionTooCoarse(ValidationError):
    def __init__(self, resolution, minimum):
        self.resolution, self.minimum = resolution, minimum
        super().__init__(f"grid resolution {resolution} is below the minimum {minimum}")


# --- file ingestion ---------------------------------------------------------


class ParseError(ValidationError):
    def __init__(self, message, line=None, path=None):
        self.line, self.path = line, path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class UnknownStudent(ValidationError):
    def __init__(self, student_id, line=None):
        self.student_id, self.line = student_id, line
        suffix = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown student id {student_id!r}{suffix}")


class DuplicateCell(ValidationError):
    def __init__(self, i, j, line=None):
        self.i, self.j, self.line = i, j, line
        super().__init__(f"duplicate evaluation of {i!r} by {j!r} (line {line})")


class NegativeScore(ValidationError):
    def __init__(self, i, j, line=None):
        self.i, self.j, self.line = i, j, line
        super().__init__(f"negative score for {i!r} by {j!r} (line {line})")


# --- mechanism failures -----------------------------------------------------


class TeamTooSmall(MechanismError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"the auxiliary-matrix mechanism needs at least 3 students, got {n}")


class NoInformedJudges(MechanismError):
    def __init__(self):
        super().__init__(
            "every off-diagonal ratio is undefined: no third party with a positive "
            "instructor grade evaluated any pair"
        )


class NoValidColumns(MechanismError):
    def __init__(self):
        super().__init__("every column of the auxiliary matrix has an infinite or undefined entry")


class NoComparableEntries(MechanismError):
    def __init__(self):
        super().__init__("evaluation error is undefined: every reference share is zero")
