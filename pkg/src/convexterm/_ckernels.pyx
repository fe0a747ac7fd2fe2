# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hull kernels; same contract as ``_pykernels``.

Coordinates are copied into C ``long long`` arrays and predicates evaluated in
``__int128``.  With |coordinate| < 2**40 a 3x3 orientation determinant stays
below 2**126, so results are exact.  Larger inputs go to the Python kernels.
"""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

from convexterm import _pykernels

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef long long BOUND = 1LL << 40
cdef int MAX_EDGE_TABLE = 4096

orient2d = _pykernels.orient2d
orient3d = _pykernels.orient3d


cdef bint _fits(pts, int dim):
    cdef object c
    for pt in pts:
        if len(pt) != dim:
            raise ValueError("dimension mismatch")
        for c in pt:
            if c >= BOUND or c <= -BOUND:
                return False
    return True


cdef inline i128 _o2(long long *X, long long *Y, int a, int b, int c) nogil:
    return (<i128>(X[b] - X[a])) * (Y[c] - Y[a]) - (<i128>(Y[b] - Y[a])) * (X[c] - X[a])


cdef inline i128 _o3(long long *X, long long *Y, long long *Z, int a, int b, int c, int d) nogil:
    cdef i128 bx = X[b] - X[a], by = Y[b] - Y[a], bz = Z[b] - Z[a]
    cdef i128 cx = X[c] - X[a], cy = Y[c] - Y[a], cz = Z[c] - Z[a]
    cdef i128 dx = X[d] - X[a], dy = Y[d] - Y[a], dz = Z[d] - Z[a]
    return bx * (cy * dz - cz * dy) - by * (cx * dz - cz * dx) + bz * (cx * dy - cy * dx)


def _unique_sorted(pts):
    return _pykernels._unique_sorted(pts)


def hull2d(pts):
    if not _fits(pts, 2):
        return _pykernels.hull2d(pts)
    uniq = _unique_sorted(pts)
    cdef int n = len(uniq)
    if n <= 2:
        return uniq
    cdef long long *X = <long long *>malloc(n * sizeof(long long))
    cdef long long *Y = <long long *>malloc(n * sizeof(long long))
    cdef int *hull = <int *>malloc((2 * n + 1) * sizeof(int))
    cdef int i, k = 0, t
    try:
        for i in range(n):
            X[i] = pts[uniq[i]][0]
            Y[i] = pts[uniq[i]][1]
        with nogil:
            for i in range(n):
                while k >= 2 and _o2(X, Y, hull[k - 2], hull[k - 1], i) <= 0:
                    k -= 1
                hull[k] = i
                k += 1
            t = k + 1
            i = n - 2
            while i >= 0:
                while k >= t and _o2(X, Y, hull[k - 2], hull[k - 1], i) <= 0:
                    k -= 1
                hull[k] = i
                k += 1
                i -= 1
        return [uniq[hull[i]] for i in range(k - 1)]
    finally:
        free(X)
        free(Y)
        free(hull)


cdef bint _rank3(long long *N, int m):
    # N holds m normals as consecutive (x, y, z) triples
    cdef int j, k
    cdef i128 cx, cy, cz
    for j in range(1, m):
        cx = (<i128>N[1]) * N[3 * j + 2] - (<i128>N[2]) * N[3 * j + 1]
        cy = (<i128>N[2]) * N[3 * j] - (<i128>N[0]) * N[3 * j + 2]
        cz = (<i128>N[0]) * N[3 * j + 1] - (<i128>N[1]) * N[3 * j]
        if cx != 0 or cy != 0 or cz != 0:
            for k in range(1, m):
                if cx * N[3 * k] + cy * N[3 * k + 1] + cz * N[3 * k + 2] != 0:
                    return True
            return False
    return False


def hull3d(pts):
    if not _fits(pts, 3):
        return _pykernels.hull3d(pts)
    uniq = _unique_sorted(pts)
    cdef int n = len(uniq)
    if n > MAX_EDGE_TABLE:
        return _pykernels.hull3d(pts)
    sub = [pts[i] for i in uniq]
    start = _pykernels._initial_simplex(sub, list(range(n)))
    if start is None:
        raise ValueError("points are not full-dimensional")

    cdef long long *X = <long long *>malloc(n * sizeof(long long))
    cdef long long *Y = <long long *>malloc(n * sizeof(long long))
    cdef long long *Z = <long long *>malloc(n * sizeof(long long))
    cdef int *edge = <int *>malloc(n * n * sizeof(int))
    cdef int cap = 8 * n + 16
    cdef int *F = <int *>malloc(3 * cap * sizeof(int))
    cdef char *alive = <char *>malloc(cap)
    cdef char *vis = <char *>malloc(cap)
    cdef int *hz = <int *>malloc(2 * 3 * cap * sizeof(int))
    cdef int nf = 0, i, f, a, b, c, u, v, g, nh, j, tmp, q, m
    cdef int i0, i1, i2, i3
    cdef int seeds[4]
    cdef int quads[16]
    cdef bint any_vis
    cdef long long *N
    cdef i128 nx, ny, nz
    try:
        for i in range(n):
            X[i] = sub[i][0]
            Y[i] = sub[i][1]
            Z[i] = sub[i][2]
        i0, i1, i2, i3 = start
        seeds[0] = i0; seeds[1] = i1; seeds[2] = i2; seeds[3] = i3
        quads[:] = [i0, i1, i2, i3, i0, i1, i3, i2, i0, i2, i3, i1, i1, i2, i3, i0]
        for j in range(4):
            a = quads[4 * j]; b = quads[4 * j + 1]; c = quads[4 * j + 2]
            if _o3(X, Y, Z, a, b, c, quads[4 * j + 3]) > 0:
                tmp = b; b = c; c = tmp
            F[3 * nf] = a; F[3 * nf + 1] = b; F[3 * nf + 2] = c
            alive[nf] = 1
            edge[a * n + b] = nf; edge[b * n + c] = nf; edge[c * n + a] = nf
            nf += 1

        for i in range(n):
            if i == i0 or i == i1 or i == i2 or i == i3:
                continue
            any_vis = False
            for f in range(nf):
                vis[f] = 0
                if alive[f] and _o3(X, Y, Z, F[3 * f], F[3 * f + 1], F[3 * f + 2], i) > 0:
                    vis[f] = 1
                    any_vis = True
            if not any_vis:
                continue
            nh = 0
            for f in range(nf):
                if not vis[f]:
                    continue
                for j in range(3):
                    u = F[3 * f + j]
                    v = F[3 * f + (j + 1) % 3]
                    g = edge[v * n + u]
                    if not vis[g]:
                        hz[2 * nh] = u
                        hz[2 * nh + 1] = v
                        nh += 1
                alive[f] = 0
            if nf + nh > cap:
                while nf + nh > cap:
                    cap *= 2
                F = <int *>realloc(F, 3 * cap * sizeof(int))
                alive = <char *>realloc(alive, cap)
                vis = <char *>realloc(vis, cap)
                hz = <int *>realloc(hz, 2 * 3 * cap * sizeof(int))
            for j in range(nh):
                u = hz[2 * j]
                v = hz[2 * j + 1]
                F[3 * nf] = u; F[3 * nf + 1] = v; F[3 * nf + 2] = i
                alive[nf] = 1
                vis[nf] = 0
                edge[u * n + v] = nf; edge[v * n + i] = nf; edge[i * n + u] = nf
                nf += 1

        faces = []
        incident = {}
        for f in range(nf):
            if alive[f]:
                a = F[3 * f]; b = F[3 * f + 1]; c = F[3 * f + 2]
                faces.append((uniq[a], uniq[b], uniq[c]))
                for q in (a, b, c):
                    incident.setdefault(q, []).append(f)
        verts = []
        for q, fs in incident.items():
            m = len(fs)
            N = <long long *>malloc(3 * m * sizeof(long long))
            small = True
            for j in range(m):
                f = fs[j]
                a = F[3 * f]; b = F[3 * f + 1]; c = F[3 * f + 2]
                nx = (<i128>(Y[b] - Y[a])) * (Z[c] - Z[a]) - (<i128>(Z[b] - Z[a])) * (Y[c] - Y[a])
                ny = (<i128>(Z[b] - Z[a])) * (X[c] - X[a]) - (<i128>(X[b] - X[a])) * (Z[c] - Z[a])
                nz = (<i128>(X[b] - X[a])) * (Y[c] - Y[a]) - (<i128>(Y[b] - Y[a])) * (X[c] - X[a])
                # rank test multiplies three normal components
                if (nx >= BOUND or nx <= -BOUND or ny >= BOUND or ny <= -BOUND
                        or nz >= BOUND or nz <= -BOUND):
                    small = False
                    break
                N[3 * j] = <long long>nx; N[3 * j + 1] = <long long>ny; N[3 * j + 2] = <long long>nz
            if small:
                extreme = _rank3(N, m)
            else:
                extreme = _pykernels._spans_space(
                    [_pykernels._normal(sub[F[3 * f]], sub[F[3 * f + 1]], sub[F[3 * f + 2]]) for f in fs]
                )
            free(N)
            if extreme:
                verts.append(uniq[q])
        verts.sort()
        return verts, faces
    finally:
        free(X); free(Y); free(Z); free(edge)
        free(F); free(alive); free(vis); free(hz)
