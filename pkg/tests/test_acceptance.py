"""Acceptance criteria, one marked group per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see conftest).
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from conftest import GRID, HALF, REDUCED_PQ
from convexterm.algebra import (
    ConvexAlgebra,
    FiniteConvexAlgebra,
    Semilattice,
    adheres,
    check_axioms,
    free_algebra,
    is_cancellable,
    meet_semilattices,
    semilattice_algebra,
    semilattice_glue,
    trivial_algebra,
)
from convexterm.automata import BeliefTransformer, parse_pa
from convexterm.dist import dirac, mix, uniform
from convexterm.extensions import (
    STAR,
    BlackHole,
    Case4,
    Imitate,
    ImitateOuter,
    Mixed,
    build_extension,
    check_naturality,
    glue,
    is_extremal_in_KD_simplex,
    probe_extension,
    simplex_css,
    spec_of_report,
)
from convexterm.geometry.decompose import decompose_2d
from convexterm.geometry.flagged import FlaggedPolygon, random_flagged, vih_2d
from convexterm.geometry.polytope import (
    canonical_hull,
    is_homothetic,
    minkowski_combine,
    minkowski_sum,
    point_polytope,
)
from convexterm.geometry.simplex import (
    homothety_normalize,
    in_normal_form,
    phi,
    phi_inv,
    simplex,
    touches_all_faces,
)
from convexterm.sampling import (
    body_samples,
    dist_samples,
    random_dist,
    random_pa_document,
    random_point_in_simplex,
    random_polytope,
)

F = Fraction


def acceptance(key, label):
    return pytest.mark.acceptance(key, label)


# --- 1. axiom suite ----------------------------------------------------------------


def _labels(n):
    return [str(i + 1) for i in range(n)]


def _extension_variants():
    """(name, oracle, samples) for every spec kind over |S| <= 3."""
    out = []
    rng = random.Random(11)
    for n in (1, 2, 3):
        labels = _labels(n)
        free = free_algebra(labels)
        ds = dist_samples(labels, 5, seed=n)
        ws = [dirac(labels[0]), uniform(labels), random_dist(rng, labels)]
        specs = [BlackHole()] + [Imitate(w) for w in ws] + [Mixed(dirac(lab)) for lab in labels]
        for spec in specs:
            extra = [getattr(spec, "w")] if hasattr(spec, "w") else []
            out.append((f"free{n}:{spec}", build_extension(free, spec), list(dict.fromkeys(ds + extra)) + [STAR]))

        css = simplex_css(labels)
        corners = [point_polytope(v) for v in simplex(n).vertices]
        full = simplex(n)
        inner_body = canonical_hull([random_point_in_simplex(rng, n, 6) for _ in range(3)])
        base_samples = list(dict.fromkeys([corners[0], full, inner_body]))
        specs = [BlackHole(), Imitate(corners[-1]), Imitate(full), Imitate(inner_body), ImitateOuter(full)]
        specs += [Mixed(c) for c in corners]
        if n == 2:
            specs.append(Case4(full))
        if n == 3:
            tri = canonical_hull([(0, F(1, 2), F(1, 2)), (F(1, 3), 0, F(2, 3)), (F(1, 4), F(3, 4), 0)])
            seg = canonical_hull([(1, 0, 0), (0, F(1, 3), F(2, 3))])
            specs += [Case4(full), Case4(tri), Case4(seg)]
        for spec in specs:
            param = getattr(spec, "w", None) or getattr(spec, "c", None)
            extra = [param] if param is not None else []
            samples = list(dict.fromkeys(base_samples + extra)) + [STAR]
            out.append((f"css{n}:{spec.kind}", build_extension(css, spec), samples))
    return out


@acceptance("1", "axiom suite: semilattices, CSS polytopes, every extension variant (<60s)")
def test_criterion_1_axiom_suite():
    start = time.perf_counter()

    # (a) meet-semilattices on <= 4 elements, one per isomorphism class
    counts = []
    for n in range(1, 5):
        lattices = meet_semilattices(n)
        counts.append(len(lattices))
        for order in lattices:
            alg = semilattice_algebra(order)
            rep = check_axioms(alg, GRID, alg.elements)
            assert rep.passed, rep.counterexample
    assert counts == [1, 1, 2, 5]
    with pytest.raises(ValueError, match="missing meet"):
        Semilattice(["a", "b", "c"], [("a", "c"), ("b", "c")])

    # (b) CSS polytope algebra: 100 random triples, dim <= 3, <= 6 vertices
    rng = random.Random(2024)
    triples = []
    for _ in range(100):
        dim = rng.randint(1, 3)
        triples.append(tuple(random_polytope(rng, dim, 6) for _ in range(3)))
    css_rd = ConvexAlgebra(minkowski_combine, name="css")
    samples = list(dict.fromkeys(x for t in triples for x in t))
    pairs = [(t[i], t[j]) for t in triples for i in range(3) for j in range(3)]
    rep = check_axioms(css_rd, GRID, samples, pairs=pairs, triples=triples, pq_pairs=REDUCED_PQ)
    assert rep.passed, rep.counterexample

    # (c) every extension oracle over |S| <= 3
    for name, oracle, samples in _extension_variants():
        rep = check_axioms(oracle, GRID, samples, pq_pairs=REDUCED_PQ)
        assert rep.passed, (name, rep.counterexample)

    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"axiom suite took {elapsed:.1f}s"


# --- 2. negative control ---------------------------------------------------------------


@acceptance("2", "non-extremal mixed table rejected; forced build fails associativity (<5s)")
def test_criterion_2_negative_control():
    start = time.perf_counter()
    labels = _labels(2)
    free = free_algebra(labels)
    mid = uniform(labels)
    with pytest.raises(ValueError, match="extremal"):
        build_extension(free, Mixed(mid))
    forced = build_extension(free, Mixed(mid), validate=False)
    rep = check_axioms(forced, GRID, dist_samples(labels, 4) + [STAR])
    assert not rep.passed
    assert rep.counterexample["law"] == "associativity"

    css = simplex_css(labels)
    mid_body = point_polytope((HALF, HALF))
    with pytest.raises(ValueError, match="extremal"):
        build_extension(css, Mixed(mid_body))
    forced = build_extension(css, Mixed(mid_body), validate=False)
    rep = check_axioms(forced, GRID, [point_polytope((1, 0)), point_polytope((0, 1)), simplex(2), mid_body, STAR], pq_pairs=REDUCED_PQ)
    assert not rep.passed
    assert rep.counterexample["law"] == "associativity"
    assert time.perf_counter() - start < 5


# --- 3. classification round trip ------------------------------------------------------------


@acceptance("3", "probe(build(spec)) recovers case and parameter exactly, |S| in {2,3}")
@pytest.mark.parametrize("n", [2, 3])
def test_criterion_3_round_trip(n):
    labels = _labels(n)
    free = free_algebra(labels)
    rng = random.Random(n)
    samples = dist_samples(labels, 12, seed=100 + n)
    ws = [dirac(lab) for lab in labels] + [uniform(labels)] + [random_dist(rng, labels) for _ in range(5)]
    specs = [BlackHole()] + [Imitate(w) for w in ws] + [Mixed(dirac(lab)) for lab in labels]
    for spec in specs:
        report = probe_extension(build_extension(free, spec), samples, GRID)
        assert spec_of_report(report) == spec
        if report.w is not None:
            assert report.w == spec.w  # exact rational equality


# --- 4. gluing --------------------------------------------------------------------------------------


@acceptance("4", "glue with P = X minus {w} reproduces the mixed table")
@pytest.mark.parametrize("algebra", ["free", "css"])
def test_criterion_4_gluing(algebra):
    rng = random.Random(4)
    if algebra == "free":
        labels = _labels(3)
        base = free_algebra(labels)
        w = dirac("1")
        samples = dist_samples(labels, 10, seed=4)
    else:
        labels = _labels(2)
        base = simplex_css(labels)
        w = point_polytope((1, 0))
        samples = body_samples(2, 10, seed=4)
    inner = build_extension(base, Imitate(w))
    glued = glue(base, lambda x: x != w, inner, samples, GRID)
    mixed = build_extension(base, Mixed(w))
    pool = samples + [STAR]
    all_pairs = list(itertools.product(pool, repeat=2))
    chosen = rng.sample(all_pairs, 50)
    # make sure every branch of the table is exercised
    chosen += [(w, STAR), (STAR, w), (STAR, STAR), (samples[-1], STAR)]
    for p in GRID:
        for x, y in chosen:
            assert glued.op(p, x, y) == mixed.op(p, x, y), (p, x, y)


# --- 5. functoriality ---------------------------------------------------------------------------


@acceptance("5", "black hole natural under 20 random maps; imitate-delta1 not natural under swap")
def test_criterion_5_functoriality():
    rng = random.Random(5)
    labels = _labels(2)
    samples = dist_samples(labels, 6, seed=5)
    for _ in range(20):
        images = {lab: random_dist(rng, labels) for lab in labels}
        assert check_naturality(BlackHole(), images, samples, GRID, labels)
    swap = {"1": "2", "2": "1"}
    assert not check_naturality(Imitate(dirac("1")), swap, samples, GRID, labels)
    # the uniform distribution is fixed by the swap, and then naturality holds
    assert check_naturality(Imitate(uniform(labels)), swap, samples, GRID, labels)


# --- 6. geometry golden facts --------------------------------------------------------------------


@acceptance("6", "Ext K(D) for two labels; corner-touching bodies in the 2-simplex; normalisation")
def test_criterion_6_two_labels():
    den = 8
    family = set()
    for i in range(den + 1):
        for j in range(i, den + 1):
            family.add(canonical_hull([(F(i, den), 1 - F(i, den)), (F(j, den), 1 - F(j, den))]))
    extremal = {c for c in family if is_extremal_in_KD_simplex(c, 2)}
    assert extremal == {point_polytope((1, 0)), point_polytope((0, 1)), simplex(2)}


def _on_edge(rng, k):
    """A random point on the face of the 2-simplex where coordinate k vanishes."""
    t = F(rng.randint(1, 11), 12)
    pt = [t, 1 - t]
    pt.insert(k, F(0))
    return tuple(pt)


@acceptance("6", "Ext K(D) for two labels; corner-touching bodies in the 2-simplex; normalisation")
def test_criterion_6_three_labels():
    rng = random.Random(6)
    positives = []
    while len(positives) < 10:
        if len(positives) % 2 == 0:
            body = canonical_hull([_on_edge(rng, k) for k in range(3)])
        else:
            k = rng.randrange(3)
            corner_pt = tuple(F(int(i == k)) for i in range(3))
            body = canonical_hull([corner_pt, _on_edge(rng, k)])
        if body not in positives:
            positives.append(body)
    negatives = []
    while len(negatives) < 5:
        # four boundary points, two on one edge: a quadrilateral touching every face
        k = rng.randrange(3)
        pts = [_on_edge(rng, k), _on_edge(rng, k), _on_edge(rng, (k + 1) % 3), _on_edge(rng, (k + 2) % 3)]
        body = canonical_hull(pts)
        if len(body) == 4 and body not in negatives:
            negatives.append(body)
    while len(negatives) < 10:
        pts = [tuple(F(c) for c in random_point_in_simplex(rng, 3, 9)) for _ in range(3)]
        body = canonical_hull(pts)
        if all(min(v) > 0 for v in body.vertices) and not body.is_singleton():
            negatives.append(body)
    for body in positives:
        assert touches_all_faces(body)
        assert is_extremal_in_KD_simplex(body, 3), body
    for body in negatives:
        assert not is_extremal_in_KD_simplex(body, 3), body
        if len(body) == 4:
            # the decomposition oracle: a certified nontrivial split
            b, c = decompose_2d(phi(body))
            assert minkowski_sum(b, c) == phi(body)
            assert not (is_homothetic(b, phi(body)) and is_homothetic(c, phi(body)))
        else:
            assert not touches_all_faces(body)


@acceptance("6", "Ext K(D) for two labels; corner-touching bodies in the 2-simplex; normalisation")
def test_criterion_6_normalisation():
    rng = random.Random(66)
    count = 0
    while count < 100:
        pts = [random_point_in_simplex(rng, 3, 10)[:2] for _ in range(rng.randint(2, 5))]
        body = canonical_hull(pts)
        if body.is_singleton():
            continue
        count += 1
        normal = homothety_normalize(body)
        assert touches_all_faces(phi_inv(normal))
        assert in_normal_form(normal)
        assert is_homothetic(normal, body)
        assert homothety_normalize(normal) == normal


# --- 7. visibility hull --------------------------------------------------------------------------


def _grid_points(closure, den):
    xs = [v[0] for v in closure.vertices]
    ys = [v[1] for v in closure.vertices]
    out = []
    for i in range(int(min(xs) * den), int(max(xs) * den) + 1):
        for j in range(int(min(ys) * den), int(max(ys) * den) + 1):
            out.append((F(i, den), F(j, den)))
    return out


def _in_b(pt):
    """Closed-form membership: open triangle (-1,0),(1,0),(0,1) plus the origin."""
    x, y = pt
    return (x == 0 and y == 0) or (0 < y < 1 - abs(x))


def _witness_in_vih(member, x, a_points, ps):
    """Every sampled segment from x towards a point of the set stays inside it."""
    return all(member(tuple(p * xc + (1 - p) * ac for xc, ac in zip(x, a))) for a in a_points for p in ps)


@acceptance("7", "visibility hull: origin example vs grid witness oracle, fixed points, idempotence")
def test_criterion_7_origin_example():
    tri = canonical_hull([(-1, 0), (1, 0), (0, 1)])
    b = FlaggedPolygon(tri, [False, True, False, False], [False] * 4, boundary=[(-1, 0), (0, 0), (1, 0), (0, 1)])
    v = vih_2d(b)
    expected_in = [(0, 0), (0, 1), (F(-1, 2), F(1, 2)), (F(1, 2), F(1, 2)), (F(1, 4), F(1, 4))]
    expected_out = [(-1, 0), (1, 0), (F(-1, 2), 0), (F(1, 2), 0)]
    for x in expected_in:
        assert v.contains(x), x
    for x in expected_out:
        assert not v.contains(x), x

    # witness oracle on rational grids with denominators <= 32
    a_points = [x for x in _grid_points(tri, 32) if _in_b(x)]
    assert all(b.contains(x) == _in_b(x) for x in _grid_points(tri, 16))
    ps = [F(1, 32), F(1, 4), HALF, F(31, 32)]
    probes = [c.rep for c in b.cells] + [x for x in _grid_points(tri, 8) if tri.contains(x)]
    for x in probes:
        assert v.contains(x) == _witness_in_vih(_in_b, x, a_points, ps), x


@acceptance("7", "visibility hull: origin example vs grid witness oracle, fixed points, idempotence")
def test_criterion_7_fixed_points_and_idempotence():
    rng = random.Random(7)
    tri = canonical_hull([(0, 0), (1, 0), (0, 1)])
    closed = FlaggedPolygon.closed(tri)
    assert vih_2d(closed) == closed
    single = FlaggedPolygon(point_polytope((F(1, 3), F(2, 3))), [])
    assert vih_2d(single) == single
    count = 0
    while count < 50:
        closure = random_polytope(rng, 2, 6, span=2, max_den=2)
        a = random_flagged(rng, closure)
        v = vih_2d(a)
        assert vih_2d(v) == v
        # A is inside ViH(A), which is inside the closure
        assert all(v.included(c) for c in v.cells if a.included(c))
        assert v.closure == a.closure
        count += 1


# --- 8. PA lifting ------------------------------------------------------------------------------------


@acceptance("8", "lifting is affine (100 tuples, star absorption) and Dirac round trip (<30s)")
def test_criterion_8_pa_lifting():
    start = time.perf_counter()
    rng = random.Random(8)
    saw_star = 0
    for _ in range(100):
        pa = parse_pa(random_pa_document(rng, rng.randint(2, 3), disable=0.3))
        bt = BeliefTransformer(pa, BlackHole())
        a = rng.choice(pa.actions)
        xi, zeta = random_dist(rng, pa.states, 6), random_dist(rng, pa.states, 6)
        p = rng.choice(GRID)
        lhs = bt.lift(a, mix(p, xi, zeta))
        rhs = bt.oracle.op(p, bt.lift(a, xi), bt.lift(a, zeta))
        assert lhs == rhs
        saw_star += lhs is STAR
    assert saw_star > 0
    for _ in range(10):
        pa = parse_pa(random_pa_document(rng, 3, disable=0.2))
        bt = BeliefTransformer(pa, BlackHole())
        for s in pa.states:
            for a in pa.actions:
                succ = pa.successors(s, a)
                expected = canonical_hull(d.vector(pa.states) for d in succ) if succ else STAR
                assert bt.lift(a, dirac(s)) == expected
    assert time.perf_counter() - start < 30


# --- 9. adherence laws -----------------------------------------------------------------------------------


def _finite_corpus():
    corpus = [("trivial", trivial_algebra())]
    for n in range(1, 5):
        for order in meet_semilattices(n):
            corpus.append((f"semilattice{n}", semilattice_algebra(order)))
    # semilattice construction over a 2-chain with semilattice fibers
    chain = Semilattice.chain(2)
    low = semilattice_algebra(Semilattice.chain(2))
    high = semilattice_algebra(Semilattice(["x", "y", "z"], [("x", "y"), ("x", "z")]))
    hom = {"x": 0, "y": 1, "z": 0}
    glued = semilattice_glue(chain, {0: low, 1: high}, {(0, 1): hom.__getitem__}, GRID)
    corpus.append(("glued", glued))
    # black-hole extension of a 3-chain, as a finite algebra
    base = semilattice_algebra(Semilattice.chain(3))
    ext = build_extension(base, BlackHole())
    corpus.append(("chain+blackhole", FiniteConvexAlgebra(list(base.elements) + [STAR], ext.op)))
    return corpus


@acceptance("9", "adherence reflexive, convex, cancellable-z equivalence on the finite corpus")
def test_criterion_9_adherence_laws():
    for name, alg in _finite_corpus():
        elems = alg.elements
        assert len(elems) <= 5, name
        adh = {(x, y) for x in elems for y in elems if adheres(alg, x, y)}
        for x in elems:
            assert (x, x) in adh
        # a single witness suffices: the relation does not depend on p
        for x, y in itertools.product(elems, repeat=2):
            for p in GRID:
                assert (alg.op(p, x, y) == y) == ((x, y) in adh), (name, x, y, p)
        for (x, y), (u, v) in itertools.product(adh, repeat=2):
            for p in GRID:
                assert (alg.op(p, x, u), alg.op(p, y, v)) in adh, (name, x, y, u, v, p)
        for z in elems:
            if not is_cancellable(alg, z, GRID):
                continue
            for x, y in itertools.product(elems, repeat=2):
                for p in GRID:
                    lhs = (alg.op(p, z, x), alg.op(p, z, y)) in adh
                    assert lhs == ((x, y) in adh), (name, z, x, y, p)
