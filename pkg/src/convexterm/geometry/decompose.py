"""Minkowski decomposition of polygons by splitting edge vectors."""

from __future__ import annotations

from fractions import Fraction
from itertools import accumulate

from .. import kernels
from .lp import OPTIMAL, solve_lp
from .polytope import Polytope, canonical_hull, echelon_basis


def _cyclic_vertices(a: Polytope):
    """Vertices in boundary order, via the pivot chart of the affine hull."""
    ints, _ = a.integer_form()
    basis = echelon_basis(ints)
    if len(basis) > 2:
        raise ValueError("decomposition is only supported up to affine dimension 2")
    if len(basis) < 2:
        return None
    pivots = sorted(piv for piv, _ in basis)
    order = kernels.hull2d([tuple(pt[c] for c in pivots) for pt in ints])
    return [a.vertices[i] for i in order], pivots


def decompose_2d(a: Polytope):
    """A pair ``(B, C)`` with ``B + C = A``, not both homothetic to ``A``, or None.

    Edge ``e_i`` of the polygon is split as ``l_i e_i + (1 - l_i) e_i``; the
    two parts close up exactly when ``sum l_i e_i = 0``. Any non-constant
    feasible ``l`` in ``[0, 1]^m`` gives a nontrivial decomposition, found by
    maximising ``l_i - l_j`` over pairs.
    """
    found = _cyclic_vertices(a)
    if found is None:
        return None
    verts, pivots = found
    m = len(verts)
    edges = [tuple(w - v for v, w in zip(verts[i], verts[(i + 1) % m])) for i in range(m)]
    # constraints in chart coordinates; variables l_0..l_{m-1}, then slacks s_i = 1 - l_i
    a_eq = [[e[c] for e in edges] + [Fraction(0)] * m for c in pivots]
    for i in range(m):
        a_eq.append([Fraction(int(k == i)) for k in range(m)] + [Fraction(int(k == i)) for k in range(m)])
    b_eq = [Fraction(0)] * len(pivots) + [Fraction(1)] * m
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            c = [Fraction(0)] * (2 * m)
            c[i], c[j] = Fraction(1), Fraction(-1)
            res = solve_lp(c, a_eq, b_eq)
            if res.status == OPTIMAL and res.value > 0:
                lam = res.x[:m]
                return _summands(verts, edges, lam)
    return None


def _summands(verts, edges, lam):
    dim = len(verts[0])
    zero = (Fraction(0),) * dim

    def walk(start, weights):
        steps = accumulate(
            (tuple(w * c for c in e) for w, e in zip(weights, edges)),
            lambda acc, d: tuple(x + y for x, y in zip(acc, d)),
            initial=start,
        )
        return canonical_hull(list(steps))

    b = walk(verts[0], lam)
    c = walk(zero, [1 - w for w in lam])
    return b, c


def is_indecomposable_2d(a: Polytope) -> bool:
    return decompose_2d(a) is None


__all__ = ["decompose_2d", "is_indecomposable_2d"]
