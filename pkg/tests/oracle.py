"""Independent scalar reference implementations in exact rational arithmetic.

Deliberately written from the formulas without touching the package, so the
package's vectorized and compiled paths are checked against something that
shares none of their code.
"""

from fractions import Fraction

INF = float("inf")
NAN = float("nan")


def ratio(A, w, i, j):
    """b_ij as Fraction, or INF / NAN."""
    if i == j:
        return Fraction(1)
    num = den = Fraction(0)
    for k in range(len(A)):
        if k in (i, j) or w[k] == 0:
            continue
        aik, ajk = Fraction(A[i][k]), Fraction(A[j][k])
        if aik + ajk == 0:
            continue
        num += Fraction(w[k]) * aik / (aik + ajk)
        den += Fraction(w[k]) * ajk / (aik + ajk)
    if den == 0:
        return INF if num > 0 else NAN
    return num / den


def aux(A, w=None):
    n = len(A)
    w = [1] * n if w is None else w
    return [[ratio(A, w, i, j) for j in range(n)] for i in range(n)]


def mechanism(B):
    n = len(B)
    def finite(x):
        return not (isinstance(x, float) and (x != x or x == INF))

    cols = [j for j in range(n) if all(finite(B[i][j]) for i in range(n))]
    s = [Fraction(0)] * n
    for j in cols:
        tot = sum(Fraction(B[i][j]) for i in range(n))
        for i in range(n):
            s[i] += Fraction(B[i][j]) / tot
    return [x / len(cols) for x in s]


def pie(A):
    n = len(A)
    sums = [sum(Fraction(A[i][j]) for i in range(n)) for j in range(n)]
    return [sum(Fraction(A[i][j]) / sums[j] for j in range(n)) / n for i in range(n)]


def eval_error(column, s):
    tot = sum(Fraction(x) for x in column)
    c = [Fraction(x) / tot for x in column]
    terms = [abs(ci - Fraction(si)) / Fraction(si) for ci, si in zip(c, s) if si != 0]
    return sum(terms) / len(terms)
