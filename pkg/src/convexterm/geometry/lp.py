"""Dense two-phase simplex over Fractions, Bland's rule (no cycling)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(rows, obj, basis, r, j):
    piv = rows[r][j]
    row = [v / piv for v in rows[r]]
    rows[r] = row
    for i, other in enumerate(rows):
        f = other[j]
        if i != r and f:
            rows[i] = [a - f * b for a, b in zip(other, row)]
    f = obj[j]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, row)]
    basis[r] = j


def _run(rows, obj, basis, allowed):
    """Maximise; ``obj`` holds reduced costs (negative = improving) and -value at the end."""
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(rows, obj, basis, best[1], enter)


def solve_lp(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Maximise ``c . x`` subject to ``a_eq x = b_eq`` and ``x >= 0``, exactly."""
    n = len(c)
    m = len(a_eq)
    rows = []
    for r, (coeffs, rhs) in enumerate(zip(a_eq, b_eq)):
        coeffs = [Fraction(v) for v in coeffs]
        rhs = Fraction(rhs)
        if len(coeffs) != n:
            raise ValueError("constraint width does not match objective")
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
        artificial = [Fraction(int(i == r)) for i in range(m)]
        rows.append(coeffs + artificial + [rhs])
    basis = [n + i for i in range(m)]

    # phase one: maximise -(sum of artificials)
    obj = [Fraction(0)] * (n + m + 1)
    for row in rows:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    _run(rows, obj, basis, range(n + m))
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out; rows that cannot pivot are redundant
    keep = []
    for i in range(len(rows)):
        if basis[i] >= n:
            j = next((j for j in range(n) if rows[i][j] != 0), None)
            if j is None:
                continue
            _pivot(rows, obj, basis, i, j)
        keep.append(i)
    rows = [rows[i] for i in keep]
    basis = [basis[i] for i in keep]

    obj = [-Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    for i, j in enumerate(basis):
        f = obj[j]
        if f:
            obj = [a - f * b for a, b in zip(obj, rows[i])]
    status = _run(rows, obj, basis, range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    return LPResult(OPTIMAL, tuple(x), obj[-1])


def convex_weights(points: Sequence[Sequence[Fraction]], x: Sequence[Fraction]):
    """Weights ``lam >= 0`` summing to 1 with ``sum lam_i points_i = x``, or None."""
    dim = len(x)
    a_eq = [[pt[k] for pt in points] for k in range(dim)] + [[1] * len(points)]
    res = solve_lp([0] * len(points), a_eq, list(x) + [1])
    return res.x if res.status == OPTIMAL else None


def max_min_weight(points: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Fraction | None:
    """Largest t such that x is a convex combination with every weight >= t.

    Substitutes lam = mu + t; ``None`` when x is outside the hull.
    """
    m = len(points)
    dim = len(x)
    a_eq = [[pt[k] for pt in points] + [sum(pt[k] for pt in points)] for k in range(dim)]
    a_eq.append([1] * m + [m])
    res = solve_lp([0] * m + [1], a_eq, list(x) + [1])
    if res.status != OPTIMAL:
        return None
    return res.value
