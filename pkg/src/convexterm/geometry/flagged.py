"""Planar convex sets that are neither open nor closed.

A flagged polygon is a rational polygon whose relative interior is always
present and whose boundary is cut into cells: boundary points (the vertices
plus optional collinear split points) and the open edges between
consecutive points. Each boundary cell carries an inclusion flag.

Every open segment between two points of the closure either runs inside one
closed edge or lies in the interior, so which cells such a segment meets
depends only on the cells of its endpoints. Convexity checks and the
visibility hull are therefore decided on one representative per cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..rational import format_rational
from .polytope import (
    Point,
    Polytope,
    as_point,
    canonical_hull,
    ccw_vertices,
    minkowski_combine,
    polytope_from_json,
)

HALF = Fraction(1, 2)


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _between(a, b, x) -> bool:
    """``x`` on the open segment ``(a, b)``."""
    if _orient(a, b, x) != 0:
        return False
    t = sum((xc - ac) * (bc - ac) for xc, ac, bc in zip(x, a, b))
    return 0 < t < sum((bc - ac) ** 2 for ac, bc in zip(a, b))


def _mid(a, b):
    return tuple((x + y) * HALF for x, y in zip(a, b))


@dataclass(frozen=True)
class Cell:
    kind: str  # "point", "edge" or "interior"
    index: int
    rep: Point
    lines: tuple  # ((true edge id, position along it), ...)


class FlaggedPolygon:
    """Closure polygon plus boundary cells and their inclusion flags.

    ``boundary`` lists the boundary points counter-clockwise from the
    lexicographically smallest vertex; ``edge_flags[i]`` belongs to the open
    edge from ``boundary[i]`` to ``boundary[i+1]`` (cyclically). A segment
    closure has exactly its two endpoints as boundary and no edge flags; a
    point has neither.
    """

    __slots__ = ("closure", "boundary", "vertex_flags", "edge_flags", "_cells", "_true", "_k")

    def __init__(self, closure: Polytope, vertex_flags: Sequence[bool], edge_flags: Sequence[bool] = (), boundary=None):
        if closure.dim != 2:
            raise ValueError("flagged polygons live in the plane")
        k = closure.affine_dim()
        if k == 0:
            true = [closure.vertices[0]]
            bnd: list = []
        elif k == 1:
            true = list(closure.vertices)
            bnd = list(true)
        else:
            true = ccw_vertices(closure)
            bnd = list(true)
        if boundary is not None:
            bnd = _normalise_boundary(true, [as_point(b) for b in boundary], k)
        vflags = tuple(bool(f) for f in vertex_flags)
        eflags = tuple(bool(f) for f in edge_flags)
        if k == 0 and vflags in ((), (True,)):
            vflags = ()
        if len(vflags) != len(bnd):
            raise ValueError(f"expected {len(bnd)} vertex flags, got {len(vflags)}")
        n_edges = len(bnd) if k == 2 else 0
        if len(eflags) != n_edges:
            raise ValueError(f"expected {n_edges} edge flags, got {len(eflags)}")
        object.__setattr__(self, "closure", closure)
        object.__setattr__(self, "boundary", tuple(bnd))
        object.__setattr__(self, "vertex_flags", vflags)
        object.__setattr__(self, "edge_flags", eflags)
        object.__setattr__(self, "_true", tuple(true))
        object.__setattr__(self, "_k", k)
        object.__setattr__(self, "_cells", _build_cells(tuple(true), tuple(bnd), k))
        bad = self.convexity_violation()
        if bad is not None:
            raise ValueError(f"flags do not describe a convex set: {bad}")

    def __setattr__(self, name, value):
        raise AttributeError("FlaggedPolygon is immutable")

    @classmethod
    def closed(cls, closure: Polytope) -> "FlaggedPolygon":
        k = closure.affine_dim()
        n = 0 if k == 0 else len(closure)
        return cls(closure, [True] * n, [True] * (n if k == 2 else 0))

    @classmethod
    def relatively_open(cls, closure: Polytope) -> "FlaggedPolygon":
        k = closure.affine_dim()
        n = 0 if k == 0 else len(closure)
        return cls(closure, [False] * n, [False] * (n if k == 2 else 0))

    @property
    def affine_dim(self) -> int:
        return self._k

    @property
    def cells(self) -> tuple[Cell, ...]:
        return self._cells

    def included(self, cell: Cell) -> bool:
        if cell.kind == "interior":
            return True
        if cell.kind == "point":
            return self.vertex_flags[cell.index]
        return self.edge_flags[cell.index]

    def flags(self) -> tuple[bool, ...]:
        return tuple(self.included(c) for c in self._cells)

    def convexity_violation(self):
        inc = [c for c in self._cells if self.included(c)]
        for g in inc:
            for h in inc:
                for m in _met(g, h, self._cells):
                    if not self.included(m):
                        return {"from": g.rep, "to": h.rep, "missing": m.rep}
        return None

    def locate(self, x) -> Cell | None:
        x = as_point(x)
        return _locate(self, x)

    def contains(self, x) -> bool:
        cell = self.locate(x)
        return cell is not None and self.included(cell)

    def is_closed(self) -> bool:
        return all(self.vertex_flags) and all(self.edge_flags)

    def normalized(self) -> "FlaggedPolygon":
        """Drop split points whose flag agrees with both neighbouring edges."""
        if self._k < 2:
            return self
        true = set(self._true)
        keep = []
        for i, b in enumerate(self.boundary):
            if b in true:
                keep.append(i)
                continue
            if not (self.vertex_flags[i] == self.edge_flags[i - 1] == self.edge_flags[i]):
                keep.append(i)
        bnd = [self.boundary[i] for i in keep]
        vf = [self.vertex_flags[i] for i in keep]
        ef = [self.edge_flags[i] for i in keep]
        return FlaggedPolygon(self.closure, vf, ef, boundary=bnd)

    def _key(self):
        a = self.normalized()
        return (a.closure, a.boundary, a.vertex_flags, a.edge_flags)

    def __eq__(self, other):
        if not isinstance(other, FlaggedPolygon):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        pts = " ".join(
            ("[" if f else "(") + ",".join(str(c) for c in b) + ("]" if f else ")")
            for b, f in zip(self.boundary, self.vertex_flags)
        )
        return f"FlaggedPolygon({pts}; edges={''.join('1' if f else '0' for f in self.edge_flags)})"

    def to_json(self) -> dict:
        return {
            "dim": 2,
            "vertices": [[format_rational(c) for c in v] for v in self.closure.vertices],
            "boundary": [[format_rational(c) for c in b] for b in self.boundary],
            "vertex_flags": list(self.vertex_flags),
            "edge_flags": list(self.edge_flags),
        }

    @classmethod
    def from_json(cls, doc) -> "FlaggedPolygon":
        closure = polytope_from_json(doc)
        try:
            return cls(closure, doc.get("vertex_flags", []), doc.get("edge_flags", []), boundary=doc.get("boundary"))
        except (TypeError, AttributeError) as exc:
            raise ValueError(f"malformed flagged polygon: {exc}") from exc


def _normalise_boundary(true, bnd, k):
    """Rotate ``bnd`` to start at the first true vertex and validate it."""
    if k == 0:
        if bnd not in ([], true):
            raise ValueError("a point has no boundary points besides itself")
        return []
    if k == 1:
        if sorted(bnd) != sorted(true) or len(bnd) != 2:
            raise ValueError("a segment's boundary is exactly its two endpoints")
        return list(true)
    if len(set(bnd)) != len(bnd):
        raise ValueError("boundary points repeat")
    if true[0] not in bnd:
        raise ValueError("boundary must contain every vertex of the closure")
    s = bnd.index(true[0])
    bnd = bnd[s:] + bnd[:s]
    out = []
    pos = 0
    m = len(true)
    for j in range(m):
        v, w = true[j], true[(j + 1) % m]
        if pos >= len(bnd) or bnd[pos] != v:
            raise ValueError("boundary must list the closure vertices counter-clockwise")
        out.append(v)
        pos += 1
        last = Fraction(0)
        d = tuple(b - a for a, b in zip(v, w))
        while pos < len(bnd) and bnd[pos] != w:
            x = bnd[pos]
            if not _between(v, w, x):
                raise ValueError(f"boundary point {x} is not on the edge from {v} to {w}")
            t = sum((xc - vc) * dc for xc, vc, dc in zip(x, v, d))
            if t <= last:
                raise ValueError("boundary points are not in counter-clockwise order")
            last = t
            out.append(x)
            pos += 1
    if pos != len(bnd):
        raise ValueError("boundary must list the closure vertices counter-clockwise")
    return out


def _build_cells(true, bnd, k):
    if k == 0:
        return (Cell("interior", 0, true[0], ()),)
    if k == 1:
        a, b = bnd
        return (
            Cell("point", 0, a, ((0, 0),)),
            Cell("interior", 0, _mid(a, b), ((0, 1),)),
            Cell("point", 1, b, ((0, 2),)),
        )
    m = len(true)
    n = len(bnd)
    vid = {v: j for j, v in enumerate(true)}
    cells = []
    edge_of = []
    pos_on = []
    j = -1
    pos = 0
    for i, b in enumerate(bnd):
        if b in vid:
            j = vid[b]
            pos = 0
        edge_of.append(j)
        pos_on.append(pos)
        pos += 2
    for i, b in enumerate(bnd):
        lines = [(edge_of[i], pos_on[i])]
        if b in vid:
            prev = (edge_of[i] - 1) % m
            # a vertex also ends the previous true edge
            count = sum(1 for q in range(n) if edge_of[q] == prev)
            lines.append((prev, 2 * count))
        cells.append(Cell("point", i, b, tuple(sorted(lines))))
    for i, b in enumerate(bnd):
        c = bnd[(i + 1) % n]
        cells.append(Cell("edge", i, _mid(b, c), ((edge_of[i], pos_on[i] + 1),)))
    centroid = tuple(sum(v[d] for v in true) / m for d in range(2))
    cells.append(Cell("interior", 0, centroid, ()))
    return tuple(cells)


def _met(g: Cell, h: Cell, cells) -> list[Cell]:
    """Cells met by the open segment between the representatives of ``g`` and ``h``."""
    if g is h:
        return [] if g.kind == "point" else [g]
    gl = dict(g.lines)
    common = [e for e, _ in h.lines if e in gl]
    if not common:
        return [c for c in cells if c.kind == "interior"]
    e = common[0]
    a, b = gl[e], dict(h.lines)[e]
    lo, hi = min(a, b), max(a, b)
    out = []
    for c in cells:
        for ce, pos in c.lines:
            if ce != e:
                continue
            if lo < pos < hi or (pos in (lo, hi) and c.kind != "point"):
                out.append(c)
    return out


def _locate(a: FlaggedPolygon, x) -> Cell | None:
    cells = a.cells
    k = len(a.boundary)
    if k == 0:
        return cells[0] if x == cells[0].rep else None
    if a._k == 1:
        p, q = a.boundary
        if x == p:
            return cells[0]
        if x == q:
            return cells[2]
        return cells[1] if _between(p, q, x) else None
    n = len(a.boundary)
    for i, b in enumerate(a.boundary):
        if x == b:
            return cells[i]
    for i, b in enumerate(a.boundary):
        if _between(b, a.boundary[(i + 1) % n], x):
            return cells[n + i]
    true = a._true
    m = len(true)
    if all(_orient(true[j], true[(j + 1) % m], x) > 0 for j in range(m)):
        return cells[-1]
    return None


def vih_2d(a: FlaggedPolygon) -> FlaggedPolygon:
    """Visibility hull: cells from which every half-open segment into ``a`` stays in ``a``."""
    cells = a.cells
    inc = [c for c in cells if a.included(c)]

    def visible(g: Cell) -> bool:
        if a.included(g):
            return True
        return all(a.included(m) for h in inc for m in _met(g, h, cells))

    n = len(a.boundary)
    if a._k < 2:
        vf = [visible(c) for c in cells if c.kind == "point"]
        return FlaggedPolygon(a.closure, vf, (), boundary=a.boundary or None)
    vf = [visible(cells[i]) for i in range(n)]
    ef = [visible(cells[n + i]) for i in range(n)]
    return FlaggedPolygon(a.closure, vf, ef, boundary=a.boundary)


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _face_interval(a: FlaggedPolygon, normal, d):
    """``a`` intersected with its face maximising ``normal``, as an interval along ``d``.

    Returns ``(lo, lo_closed, hi, hi_closed)`` in points, or None if empty.
    """
    verts = a.closure.vertices
    best = max(_dot(normal, v) for v in verts)
    face = [v for v in verts if _dot(normal, v) == best]
    ends = []
    for c in a.cells:
        if not a.included(c) or _dot(normal, c.rep) != best:
            continue
        if c.kind == "point" or (c.kind == "interior" and len(verts) == 1):
            ends.append((_dot(d, c.rep), True, c.rep))
            ends.append((_dot(d, c.rep), True, c.rep))
            continue
        if c.kind == "edge":
            p, q = a.boundary[c.index], a.boundary[(c.index + 1) % len(a.boundary)]
        else:
            p, q = face[0], face[-1]
        ends.append((_dot(d, p), False, p))
        ends.append((_dot(d, q), False, q))
    if not ends:
        return None
    lo_t = min(t for t, _, _ in ends)
    hi_t = max(t for t, _, _ in ends)
    lo = next(pt for t, _, pt in ends if t == lo_t)
    hi = next(pt for t, _, pt in ends if t == hi_t)
    lo_closed = any(cl for t, cl, _ in ends if t == lo_t)
    hi_closed = any(cl for t, cl, _ in ends if t == hi_t)
    return lo, lo_closed, hi, hi_closed


def flagged_combine(p, a: FlaggedPolygon, b: FlaggedPolygon) -> FlaggedPolygon:
    """``p A + (1-p) B`` for flagged polygons.

    A boundary point of the combination decomposes only through the faces of
    ``A`` and ``B`` exposed by the same direction, and each such face meets
    its convex set in an interval, so every edge of the result carries one
    interval (the sum of two intervals).
    """
    q = 1 - p
    m_poly = minkowski_combine(p, a.closure, b.closure)
    k = m_poly.affine_dim()

    def comb(u, v):
        return tuple(p * x + q * y for x, y in zip(u, v))

    if k == 0:
        return FlaggedPolygon(m_poly, [])
    if k == 1:
        v0, v1 = m_poly.vertices
        d = tuple(y - x for x, y in zip(v0, v1))
        normal = (d[1], -d[0])  # every point lies on the face for this normal
        ia = _face_interval(a, normal, d)
        ib = _face_interval(b, normal, d)
        return FlaggedPolygon(m_poly, [ia[1] and ib[1], ia[3] and ib[3]])
    verts = ccw_vertices(m_poly)
    n = len(verts)
    bnd: list = []
    vflags: list = []
    eflags: list = []
    for j in range(n):
        v, w = verts[j], verts[(j + 1) % n]
        d = tuple(y - x for x, y in zip(v, w))
        normal = (d[1], -d[0])
        ia = _face_interval(a, normal, d)
        ib = _face_interval(b, normal, d)
        if ia is None or ib is None:
            pts = [(v, False)]
            interval = None
        else:
            lo, hi = comb(ia[0], ib[0]), comb(ia[2], ib[2])
            interval = (_dot(d, lo), ia[1] and ib[1], _dot(d, hi), ia[3] and ib[3])
            pts = [(v, None)]
            if lo not in (v, w):
                pts.append((lo, interval[1]))
            if hi != w and hi != lo:
                pts.append((hi, interval[3]))
        for pt, flag in pts:
            bnd.append(pt)
            vflags.append(flag)
        seg = [pt for pt, _ in pts] + [w]
        for s0, s1 in zip(seg, seg[1:]):
            t = _dot(d, _mid(s0, s1))
            eflags.append(interval is not None and interval[0] < t < interval[2])
    for idx, pt in enumerate(bnd):
        if pt in verts:
            vflags[idx] = _vertex_included(a, b, pt, comb)
    return FlaggedPolygon(m_poly, vflags, eflags, boundary=bnd).normalized()


def _vertex_included(a, b, pt, comb):
    for u in a.closure.vertices:
        for v in b.closure.vertices:
            if comb(u, v) == pt:
                return a.contains(u) and b.contains(v)
    raise AssertionError("vertex of a combination without a vertex preimage")


def flagged_closure(a: FlaggedPolygon) -> Polytope:
    return a.closure


def random_flagged(rng, closure: Polytope, splits: int = 2, max_den: int = 8) -> FlaggedPolygon:
    """A random valid flagged polygon over ``closure``: contiguous runs per edge."""
    k = closure.affine_dim()
    if k == 0:
        return FlaggedPolygon(closure, [])
    if k == 1:
        return FlaggedPolygon(closure, [rng.random() < 0.5, rng.random() < 0.5])
    true = ccw_vertices(closure)
    m = len(true)
    vf_true = [rng.random() < 0.5 for _ in range(m)]
    bnd, vflags, eflags = [], [], []
    for j in range(m):
        v, w = true[j], true[(j + 1) % m]
        ts = sorted({Fraction(rng.randint(1, max_den - 1), max_den) for _ in range(rng.randint(0, splits))})
        pts = [v] + [tuple(x + t * (y - x) for x, y in zip(v, w)) for t in ts] + [w]
        # cells along the closed edge: point, edge, point, ..., point
        ncell = 2 * len(pts) - 1
        start_in, end_in = vf_true[j], vf_true[(j + 1) % m]
        if start_in and end_in:
            lo, hi = 0, ncell - 1
        elif start_in:
            lo, hi = 0, rng.randint(0, ncell - 2)
        elif end_in:
            lo, hi = rng.randint(1, ncell - 1), ncell - 1
        elif rng.random() < 0.5 and ncell > 2:
            lo = rng.randint(1, ncell - 2)
            hi = rng.randint(lo, ncell - 2)
        else:
            lo, hi = 1, 0
        flags = [lo <= c <= hi for c in range(ncell)]
        for i, pt in enumerate(pts[:-1]):
            bnd.append(pt)
            vflags.append(flags[2 * i])
            eflags.append(flags[2 * i + 1])
    return FlaggedPolygon(closure, vflags, eflags, boundary=bnd)


__all__ = [
    "Cell",
    "FlaggedPolygon",
    "canonical_hull",
    "flagged_closure",
    "flagged_combine",
    "random_flagged",
    "vih_2d",
]
