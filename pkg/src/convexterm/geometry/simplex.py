"""The standard simplex, its corner-dropping chart and homothety normalisation."""

from __future__ import annotations

from fractions import Fraction

from .polytope import Polytope, canonical_hull, scale_translate


def simplex(n: int) -> Polytope:
    """Convex hull of the unit vectors of Q^n."""
    if n < 1:
        raise ValueError("the simplex needs at least one label")
    return canonical_hull(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def corner(n: int, i: int) -> Polytope:
    return Polytope._canonical((tuple(Fraction(int(i == j)) for j in range(n)),))


def in_simplex(a: Polytope) -> bool:
    return all(min(v) >= 0 and sum(v) == 1 for v in a.vertices)


def in_corner_region(a: Polytope) -> bool:
    """Inside ``D = {x >= 0, sum(x) <= 1}``."""
    return all(min(v) >= 0 and sum(v) <= 1 for v in a.vertices)


def touches_all_faces(c: Polytope) -> bool:
    """Every coordinate attains 0 somewhere on ``c`` (which must lie in the simplex)."""
    if not in_simplex(c):
        raise ValueError("body is not contained in the standard simplex")
    return all(min(v[i] for v in c.vertices) == 0 for i in range(c.dim))


def phi(c: Polytope) -> Polytope:
    """Drop the last coordinate; an affine isomorphism from the simplex onto D."""
    if c.dim < 2:
        raise ValueError("need at least two labels")
    # dropping the last coordinate preserves lexicographic order on the simplex
    return Polytope._canonical(tuple(v[:-1] for v in c.vertices))


def phi_inv(a: Polytope) -> Polytope:
    return Polytope._canonical(tuple(v + (1 - sum(v),) for v in a.vertices))


def homothety_normalize(a: Polytope) -> Polytope:
    """Translate so every coordinate minimum is 0, then scale the largest coordinate sum to 1."""
    if a.is_singleton():
        raise ValueError("cannot normalise a singleton")
    t = tuple(min(v[i] for v in a.vertices) for i in range(a.dim))
    s = max(sum(v) for v in a.vertices) - sum(t)
    return scale_translate(a, 1 / s, tuple(-c / s for c in t))


def in_normal_form(a: Polytope) -> bool:
    return (
        all(min(v[i] for v in a.vertices) == 0 for i in range(a.dim))
        and max(sum(v) for v in a.vertices) == 1
    )
