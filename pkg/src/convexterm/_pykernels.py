"""Pure-Python exact hull kernels on integer coordinates.

Callers scale rational points to a common denominator and project them onto
a chart of their affine hull first, so every kernel here sees integer,
full-dimensional input.  ``_ckernels`` mirrors these signatures.
"""

from __future__ import annotations


def _unique_sorted(pts):
    order = sorted(range(len(pts)), key=pts.__getitem__)
    out = []
    last = None
    for i in order:
        if pts[i] != last:
            out.append(i)
            last = pts[i]
    return out


def orient2d(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orient3d(a, b, c, d):
    bx, by, bz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    cx, cy, cz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    dx, dy, dz = d[0] - a[0], d[1] - a[1], d[2] - a[2]
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)


def hull2d(pts):
    """Indices of the extreme points, counter-clockwise from the lexicographic minimum."""
    uniq = _unique_sorted(pts)
    if len(uniq) <= 2:
        return uniq
    lower = []
    for i in uniq:
        while len(lower) >= 2 and orient2d(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper = []
    for i in reversed(uniq):
        while len(upper) >= 2 and orient2d(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _normal(a, b, c):
    return _cross((b[0] - a[0], b[1] - a[1], b[2] - a[2]), (c[0] - a[0], c[1] - a[1], c[2] - a[2]))


def _spans_space(normals):
    it = iter(normals)
    n1 = next(it)
    rest = list(it)
    for n2 in rest:
        c = _cross(n1, n2)
        if c != (0, 0, 0):
            return any(c[0] * n3[0] + c[1] * n3[1] + c[2] * n3[2] for n3 in rest)
    return False


def _initial_simplex(pts, idx):
    p0 = pts[idx[0]]
    i1 = next((i for i in idx if pts[i] != p0), None)
    if i1 is None:
        return None
    p1 = pts[i1]
    u = tuple(p1[k] - p0[k] for k in range(3))
    i2 = next(
        (i for i in idx if _cross(u, tuple(pts[i][k] - p0[k] for k in range(3))) != (0, 0, 0)),
        None,
    )
    if i2 is None:
        return None
    i3 = next((i for i in idx if orient3d(p0, p1, pts[i2], pts[i])), None)
    if i3 is None:
        return None
    return idx[0], i1, i2, i3


def hull3d(pts):
    """Incremental hull of full-dimensional integer points in 3-space.

    Returns ``(vertices, faces)``: sorted indices of the extreme points and a
    triangulated boundary whose faces are counter-clockwise seen from outside.
    Coplanar points never make a face visible, so a face stays a
    non-degenerate triangle; triangulation vertices that sit on a flat facet
    or an edge are dropped by the normal-rank filter at the end.
    """
    idx = _unique_sorted(pts)
    start = _initial_simplex(pts, idx)
    if start is None:
        raise ValueError("points are not full-dimensional")
    i0, i1, i2, i3 = start
    faces = {}
    edges = {}
    next_id = 0

    def add(a, b, c):
        nonlocal next_id
        faces[next_id] = (a, b, c)
        edges[(a, b)] = edges[(b, c)] = edges[(c, a)] = next_id
        next_id += 1

    for a, b, c, opp in ((i0, i1, i2, i3), (i0, i1, i3, i2), (i0, i2, i3, i1), (i1, i2, i3, i0)):
        if orient3d(pts[a], pts[b], pts[c], pts[opp]) > 0:
            b, c = c, b
        add(a, b, c)

    seed = {i0, i1, i2, i3}
    for i in idx:
        if i in seed:
            continue
        p = pts[i]
        visible = {f for f, (a, b, c) in faces.items() if orient3d(pts[a], pts[b], pts[c], p) > 0}
        if not visible:
            continue
        horizon = []
        for f in visible:
            a, b, c = faces[f]
            for u, v in ((a, b), (b, c), (c, a)):
                if edges[(v, u)] not in visible:
                    horizon.append((u, v))
        for f in visible:
            del faces[f]
        for u, v in horizon:
            add(u, v, i)

    incident = {}
    for a, b, c in faces.values():
        n = _normal(pts[a], pts[b], pts[c])
        for v in (a, b, c):
            incident.setdefault(v, []).append(n)
    verts = sorted(v for v, normals in incident.items() if _spans_space(normals))
    return verts, list(faces.values())
