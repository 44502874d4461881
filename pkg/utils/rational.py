"""Exact rational helpers: parsing, formatting and small linear algebra over QQ."""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a Fraction; floats are rejected"""
    raw = str(text).strip()
    if any(c in raw for c in ".eE") and "/" not in raw:
        raise ValueError(f"rational expected as 'p/q', got {text!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid rational {text!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def sign(value) -> int:
    return (value > 0) - (value < 0)


def permutation_parity(sequence: Sequence[int]) -> int:
    """+1 when sorting the sequence needs an even number of transpositions"""
    items = list(sequence)
    parity = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                parity = -parity
    return parity


def _qq(value: Fraction):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(element) -> Fraction:
    return Fraction(int(element.numerator), int(element.denominator))


def to_domain_matrix(rows: Sequence[Sequence[Fraction]]) -> DomainMatrix:
    height = len(rows)
    width = len(rows[0]) if height else 0
    return DomainMatrix([[_qq(x) for x in row] for row in rows], (height, width), QQ)


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    if not rows:
        return Fraction(1)
    return _fraction(to_domain_matrix(rows).det())


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return to_domain_matrix(rows).rank()


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of the square system rows * x = rhs, or None when singular"""
    matrix = to_domain_matrix(rows)
    if matrix.det() == 0:
        return None
    solution = matrix.lu_solve(to_domain_matrix([[b] for b in rhs]))
    values = solution.to_Matrix()
    return [Fraction(int(values[i, 0].p), int(values[i, 0].q)) for i in range(len(rhs))]


def in_affine_hull(points: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> bool:
    """Whether target lies in the affine hull of the given points"""
    base = points[0]
    spans = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    offset = [target[i] - base[i] for i in range(len(base))]
    if not spans:
        return all(x == 0 for x in offset)
    columns = [list(col) for col in zip(*spans)]
    with_target = [columns[i] + [offset[i]] for i in range(len(base))]
    return rank(columns) == rank(with_target)


def orient2d(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction], c: Tuple[Fraction, Fraction]) -> int:
    """Sign of twice the signed area of triangle abc; positive when counterclockwise"""
    return sign((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def combine(weights: Sequence[Fraction], points: Sequence[Sequence[Fraction]]) -> Tuple[Fraction, ...]:
    """Affine combination sum(w_i * p_i)"""
    dim = len(points[0])
    return tuple(sum((w * p[i] for w, p in zip(weights, points)), Fraction(0)) for i in range(dim))
