"""Canonical V-represented polytopes over the rationals.

Every hull computation follows the same route: scale to integers, find the
affine hull by integer row reduction, project onto the pivot coordinates
(an affine isomorphism onto a full-dimensional chart) and hand the chart
points to a dimension-specific kernel.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .. import kernels
from ..rational import as_rational, format_rational, scale_to_integers
from .lp import convex_weights, max_min_weight

Point = tuple  # tuple[Fraction, ...]


def as_point(coords: Iterable) -> Point:
    pt = tuple(as_rational(c) for c in coords)
    if not pt:
        raise ValueError("points need at least one coordinate")
    return pt


def _reduce(basis, vec):
    """Eliminate ``vec`` against echelon rows; returns the integer remainder."""
    for piv, row in basis:
        f = vec[piv]
        if f:
            r = row[piv]
            vec = [r * a - f * b for a, b in zip(vec, row)]
            g = 0
            for a in vec:
                g = gcd(g, a)
            if g > 1:
                vec = [a // g for a in vec]
    return vec


def echelon_basis(ints: Sequence[Sequence[int]]):
    """Pivot columns and echelon rows spanning the differences ``p - ints[0]``."""
    base = ints[0]
    dim = len(base)
    basis = []
    for pt in ints[1:]:
        if len(basis) == dim:
            break
        vec = _reduce(basis, [a - b for a, b in zip(pt, base)])
        piv = next((k for k, a in enumerate(vec) if a), None)
        if piv is not None:
            basis.append((piv, vec))
    return basis


def _extreme_indices(ints: list[tuple[int, ...]]) -> list[int]:
    """Indices (into ``ints``) of the extreme points; ``ints`` must be duplicate-free."""
    basis = echelon_basis(ints)
    k = len(basis)
    if k == 0:
        return [0]
    pivots = [piv for piv, _ in basis]
    proj = [tuple(pt[c] for c in pivots) for pt in ints]
    if k == 1:
        vals = [p[0] for p in proj]
        return [vals.index(min(vals)), vals.index(max(vals))]
    if k == 2:
        return kernels.hull2d(proj)
    if k == 3:
        return kernels.hull3d(proj)[0]
    out = []
    for i, pt in enumerate(proj):
        others = proj[:i] + proj[i + 1:]
        if convex_weights(others, pt) is None:
            out.append(i)
    return out


class Polytope:
    """Nonempty convex hull of finitely many rational points.

    ``vertices`` are exactly the extreme points, in lexicographic order, so
    equality of polytopes is equality of vertex tuples.
    """

    __slots__ = ("vertices", "_hash", "_ints")

    def __init__(self, points: Iterable[Iterable]):
        hull = canonical_hull(points)
        object.__setattr__(self, "vertices", hull.vertices)
        object.__setattr__(self, "_hash", hull._hash)
        object.__setattr__(self, "_ints", None)

    @classmethod
    def _canonical(cls, vertices: tuple) -> "Polytope":
        obj = object.__new__(cls)
        object.__setattr__(obj, "vertices", vertices)
        object.__setattr__(obj, "_hash", hash(vertices))
        object.__setattr__(obj, "_ints", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Polytope is immutable")

    def __reduce__(self):
        return (Polytope._canonical, (self.vertices,))

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Polytope"):
        return (len(self.vertices), self.vertices) < (len(other.vertices), other.vertices)

    def __repr__(self):
        pts = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"Polytope[{pts}]"

    def is_singleton(self) -> bool:
        return len(self.vertices) == 1

    def integer_form(self) -> tuple[list[tuple[int, ...]], int]:
        if self._ints is None:
            object.__setattr__(self, "_ints", scale_to_integers(self.vertices))
        return self._ints

    def affine_dim(self) -> int:
        ints, _ = self.integer_form()
        return len(echelon_basis(ints))

    def contains(self, x) -> bool:
        return member(self, x)


def _from_integer_candidates(cands: list[tuple[int, ...]], den: int) -> Polytope:
    uniq = list(dict.fromkeys(cands))
    idx = _extreme_indices(uniq)
    verts = sorted(tuple(Fraction(c, den) for c in uniq[i]) for i in idx)
    return Polytope._canonical(tuple(verts))


def canonical_hull(points: Iterable[Iterable]) -> Polytope:
    pts = [as_point(p) for p in points]
    if not pts:
        raise ValueError("cannot take the hull of no points")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ValueError("points have mixed dimensions")
    pts = list(dict.fromkeys(pts))
    if len(pts) == 1:
        return Polytope._canonical((pts[0],))
    ints, den = scale_to_integers(pts)
    idx = _extreme_indices(ints)
    return Polytope._canonical(tuple(sorted(pts[i] for i in idx)))


def point_polytope(x) -> Polytope:
    return Polytope._canonical((as_point(x),))


def _check_same_dim(a: Polytope, b: Polytope):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def minkowski_combine(p, a: Polytope, b: Polytope) -> Polytope:
    """The pointwise combination ``p*A + (1-p)*B``."""
    p = as_rational(p)
    _check_same_dim(a, b)
    if not 0 <= p <= 1:
        raise ValueError(f"coefficient {p} outside [0, 1]")
    if p == 1:
        return a
    if p == 0:
        return b
    if a is b or a == b:
        return a
    ai, ad = a.integer_form()
    bi, bd = b.integer_form()
    l = lcm(ad, bd)
    fa = p.numerator * (l // ad)
    fb = (p.denominator - p.numerator) * (l // bd)
    cands = [
        tuple(fa * x + fb * y for x, y in zip(u, v))
        for u in ai
        for v in bi
    ]
    return _from_integer_candidates(cands, p.denominator * l)


def minkowski_sum(a: Polytope, b: Polytope) -> Polytope:
    _check_same_dim(a, b)
    return canonical_hull(tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices)


def scale_translate(a: Polytope, s, shift=None) -> Polytope:
    """``s*A + shift`` for a scalar ``s > 0``; vertex order is preserved."""
    s = as_rational(s)
    if s <= 0:
        raise ValueError("scale must be positive")
    shift = as_point(shift) if shift is not None else (Fraction(0),) * a.dim
    verts = tuple(tuple(s * c + t for c, t in zip(v, shift)) for v in a.vertices)
    return Polytope._canonical(verts)


def is_homothetic(a: Polytope, b: Polytope) -> bool:
    """Either is a singleton, or ``B = s*A + x`` for some ``s > 0``."""
    if a.is_singleton() or b.is_singleton():
        return True
    if len(a) != len(b):
        return False
    # lexicographic order is preserved by positive scaling plus translation
    a0, b0 = a.vertices[0], b.vertices[0]
    da = [tuple(c - c0 for c, c0 in zip(v, a0)) for v in a.vertices]
    db = [tuple(c - c0 for c, c0 in zip(v, b0)) for v in b.vertices]
    ref = next((k, j) for k, v in enumerate(da) for j, c in enumerate(v) if c)
    s = db[ref[0]][ref[1]] / da[ref[0]][ref[1]]
    if s <= 0:
        return False
    return all(tuple(s * c for c in u) == w for u, w in zip(da, db))


class Chart:
    """Affine isomorphism between aff(A) and its pivot-coordinate projection."""

    def __init__(self, points: Sequence[Point]):
        ints, _ = scale_to_integers(points)
        basis = echelon_basis(ints)
        self.pivots = [piv for piv, _ in basis]
        self.base = points[0]
        self.dim = len(points[0])
        dirs = []
        for piv, row in basis:
            dirs.append([Fraction(a) for a in row])
        self.dirs = dirs
        self._basis = basis
        # solve proj(dirs) * coeff = y for lifting
        self._proj_dirs = [[d[c] for c in self.pivots] for d in dirs]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains_affine(self, x: Point) -> bool:
        diff = [a - b for a, b in zip(x, self.base)]
        den = lcm(*(c.denominator for c in diff)) if diff else 1
        vec = [int(c * den) for c in diff]
        return not any(_reduce(self._basis, vec))

    def project(self, x: Point) -> Point:
        return tuple(x[c] for c in self.pivots)

    def lift_vector(self, y: Sequence[Fraction]) -> Point:
        """Linear lift of a chart vector (a difference of chart points)."""
        k = self.rank
        # solve sum_i coeff_i * proj_dirs[i] = y (k x k, exact)
        mat = [[self._proj_dirs[i][r] for i in range(k)] + [Fraction(y[r])] for r in range(k)]
        for col in range(k):
            piv = next(r for r in range(col, k) if mat[r][col] != 0)
            mat[col], mat[piv] = mat[piv], mat[col]
            pv = mat[col][col]
            mat[col] = [v / pv for v in mat[col]]
            for r in range(k):
                if r != col and mat[r][col]:
                    f = mat[r][col]
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
        coeff = [mat[r][k] for r in range(k)]
        return tuple(
            sum((coeff[i] * self.dirs[i][j] for i in range(k)), Fraction(0)) for j in range(self.dim)
        )

    def lift(self, y: Sequence[Fraction]) -> Point:
        y0 = self.project(self.base)
        v = self.lift_vector([a - b for a, b in zip(y, y0)])
        return tuple(b + c for b, c in zip(self.base, v))


def _locate(a: Polytope, x: Point):
    """Signs of ``x`` against the facets of ``A`` in its chart; None off the affine hull."""
    verts = list(a.vertices)
    ints, _ = scale_to_integers(verts + [x])
    basis = echelon_basis(ints[:-1])
    base = ints[0]
    rest = _reduce(basis, [c - b for c, b in zip(ints[-1], base)])
    if any(rest):
        return None
    pivots = [piv for piv, _ in basis]
    proj = [tuple(pt[c] for c in pivots) for pt in ints]
    y = proj.pop()
    k = len(pivots)
    if k == 1:
        lo, hi = min(p[0] for p in proj), max(p[0] for p in proj)
        return [y[0] - lo, hi - y[0]]
    if k == 2:
        order = kernels.hull2d(proj)
        return [
            kernels.orient2d(proj[order[i]], proj[order[(i + 1) % len(order)]], y)
            for i in range(len(order))
        ]
    if k == 3:
        _, faces = kernels.hull3d(proj)
        return [-kernels.orient3d(proj[f[0]], proj[f[1]], proj[f[2]], y) for f in faces]
    return proj, y


def member(a: Polytope, x) -> bool:
    x = as_point(x)
    if len(x) != a.dim:
        raise ValueError("dimension mismatch")
    if a.is_singleton():
        return x == a.vertices[0]
    loc = _locate(a, x)
    if loc is None:
        return False
    if isinstance(loc, tuple):
        return convex_weights(*loc) is not None
    return all(s >= 0 for s in loc)


def relint_member(a: Polytope, x) -> bool:
    x = as_point(x)
    if len(x) != a.dim:
        raise ValueError("dimension mismatch")
    if a.is_singleton():
        return x == a.vertices[0]
    loc = _locate(a, x)
    if loc is None:
        return False
    if isinstance(loc, tuple):
        t = max_min_weight(*loc)
        return t is not None and t > 0
    return all(s > 0 for s in loc)


def ccw_vertices(a: Polytope) -> list[Point]:
    """Vertices of a planar polytope counter-clockwise from the lexicographic minimum."""
    if a.dim != 2:
        raise ValueError("counter-clockwise order needs ambient dimension 2")
    if len(a) <= 2:
        return list(a.vertices)
    ints, _ = a.integer_form()
    return [a.vertices[i] for i in kernels.hull2d(ints)]


def polytope_to_json(a: Polytope) -> dict:
    return {"dim": a.dim, "vertices": [[format_rational(c) for c in v] for v in a.vertices]}


def polytope_from_json(doc) -> Polytope:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise ValueError("a polytope document needs a 'vertices' list")
    poly = canonical_hull(doc["vertices"])
    if "dim" in doc and doc["dim"] != poly.dim:
        raise ValueError(f"declared dim {doc['dim']} but vertices have dimension {poly.dim}")
    return poly
