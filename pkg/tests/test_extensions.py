import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GRID, HALF, REDUCED_PQ
from convexterm.algebra import adheres, check_axioms, classify_subset, free_algebra
from convexterm.dist import Dist, dirac, mix, uniform
from convexterm.extensions import (
    STAR,
    BlackHole,
    Case4,
    Imitate,
    ImitateOuter,
    Mixed,
    build_extension,
    check_naturality,
    css_adheres,
    css_combine,
    eligible_case4,
    glue,
    naturality_counterexample,
    probe_extension,
    simplex_css,
    spec_from_json,
    spec_to_json,
)
from convexterm.geometry.polytope import canonical_hull, point_polytope
from convexterm.geometry.simplex import simplex
from convexterm.sampling import body_samples, dist_samples, random_body_in_simplex

F = Fraction
LABELS = ["1", "2"]
D1, D2 = dirac("1"), dirac("2")


def _free_specs(labels):
    return [BlackHole(), Imitate(dirac(labels[0])), Imitate(uniform(labels)), Mixed(dirac(labels[0])), Mixed(dirac(labels[-1]))]


def _css_specs():
    corner = point_polytope((1, 0))
    mid = point_polytope((HALF, HALF))
    return [BlackHole(), Imitate(corner), Imitate(mid), Imitate(simplex(2)), Mixed(corner), Case4(simplex(2))]


def test_table_examples():
    free = free_algebra(LABELS)
    x = uniform(LABELS)
    assert build_extension(free, BlackHole()).op(HALF, x, STAR) is STAR
    w = Dist({"1": F(2, 3), "2": F(1, 3)})
    assert build_extension(free, Imitate(w)).op(HALF, x, STAR) == mix(HALF, x, w)
    mixed = build_extension(free, Mixed(D1))
    assert mixed.op(HALF, D1, STAR) is STAR
    assert mixed.op(HALF, D2, STAR) == x
    assert mixed.op(HALF, STAR, STAR) is STAR


def test_css_combine_examples():
    a, b = point_polytope((1, 0)), point_polytope((0, 1))
    assert css_combine(HALF, a, b) == point_polytope((HALF, HALF))
    assert css_combine(HALF, simplex(2), simplex(2)) == simplex(2)
    assert css_combine(HALF, a, simplex(2), domain=simplex(2)) == canonical_hull([(1, 0), (HALF, HALF)])
    assert css_adheres(simplex(2), simplex(2))
    assert not css_adheres(a, simplex(2))
    assert not css_adheres(a, b)


@pytest.mark.parametrize("spec", _free_specs(LABELS), ids=lambda s: s.kind)
def test_restriction_law_free(spec):
    free = free_algebra(LABELS)
    ext = build_extension(free, spec)
    samples = dist_samples(LABELS, 8)
    for p in GRID:
        for x, y in itertools.product(samples, repeat=2):
            assert ext.op(p, x, y) == mix(p, x, y)


@pytest.mark.parametrize("spec", _css_specs(), ids=lambda s: s.kind)
def test_restriction_law_and_prime_ideal_css(spec):
    css = simplex_css(LABELS)
    ext = build_extension(css, spec)
    samples = body_samples(2, 6, seed=3)
    for p in GRID:
        for x, y in itertools.product(samples, repeat=2):
            assert ext.op(p, x, y) == css_combine(p, x, y)
    pri = lambda x: not adheres(ext, x, STAR)  # noqa: E731
    assert classify_subset(css, pri, GRID, elements=samples).prime
    adh = [x for x in samples if not pri(x)]
    if any(pri(x) for x in samples):
        # a nonempty prime ideal leaves at most one singleton adhering
        assert sum(1 for x in adh if x.is_singleton()) <= 1


@pytest.mark.parametrize("spec", _free_specs(LABELS), ids=lambda s: s.kind)
def test_prime_ideal_free(spec):
    ext = build_extension(free_algebra(LABELS), spec)
    samples = dist_samples(LABELS, 8)
    pri = lambda x: not adheres(ext, x, STAR)  # noqa: E731
    assert classify_subset(ext.base, pri, GRID, elements=samples).prime


def test_specs_are_distinct():
    samples = dist_samples(LABELS, 6) + [STAR]
    free = free_algebra(LABELS)
    oracles = [build_extension(free, s) for s in _free_specs(LABELS)]
    for a, b in itertools.combinations(oracles, 2):
        assert any(
            a.op(p, x, y) != b.op(p, x, y) for p in GRID[:3] for x in samples for y in samples
        ), (a.spec, b.spec)
    css_samples = body_samples(2, 6) + [STAR]
    css = simplex_css(LABELS)
    oracles = [build_extension(css, s) for s in _css_specs()]
    for a, b in itertools.combinations(oracles, 2):
        assert any(a.op(HALF, x, y) != b.op(HALF, x, y) for x in css_samples for y in css_samples)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_singletons_are_cancellable(seed):
    rng = random.Random(seed)
    x = point_polytope(tuple(F(c) for c in random_body_in_simplex(rng, 3, 1).vertices[0]))
    a = random_body_in_simplex(rng, 3, 4, 6)
    b = random_body_in_simplex(rng, 3, 4, 6)
    assert (css_combine(HALF, x, a) == css_combine(HALF, x, b)) == (a == b)


def test_extension_axioms_css_case4_triangle():
    css = simplex_css(["1", "2", "3"])
    tri = canonical_hull([(0, HALF, HALF), (F(1, 3), 0, F(2, 3)), (F(1, 4), F(3, 4), 0)])
    ext = build_extension(css, Case4(tri))
    samples = [tri, simplex(3), point_polytope((1, 0, 0)), canonical_hull([(1, 0, 0), (0, 1, 0)]), STAR]
    assert check_axioms(ext, GRID, samples, pq_pairs=REDUCED_PQ).passed
    assert ext.op(HALF, tri, STAR) is STAR
    assert ext.op(HALF, simplex(3), STAR) == css_combine(HALF, simplex(3), tri)


def test_mixed_and_case4_preconditions():
    css = simplex_css(LABELS)
    with pytest.raises(ValueError, match="extremal"):
        build_extension(css, Mixed(point_polytope((HALF, HALF))))
    with pytest.raises(ValueError, match="eligible"):
        build_extension(css, Case4(canonical_hull([(1, 0), (HALF, HALF)])))
    with pytest.raises(ValueError):
        build_extension(free_algebra(LABELS), Case4(simplex(2)))
    with pytest.raises(ValueError):
        build_extension(free_algebra(LABELS), Imitate(dirac("3")))


def test_imitate_outer_normalisation():
    css = simplex_css(LABELS)
    assert build_extension(css, ImitateOuter(simplex(2))).spec == Imitate(simplex(2))
    with pytest.raises(ValueError):
        build_extension(css, ImitateOuter(canonical_hull([(2, -1), (0, 1)])))


def test_glue_whole_carrier_is_outer_imitation():
    css = simplex_css(LABELS)
    c = simplex(2)
    inner = build_extension(css, Imitate(c))
    samples = body_samples(2, 6)
    glued = glue(css, lambda x: True, inner, samples, GRID)
    outer = build_extension(css, ImitateOuter(c))
    for p in GRID:
        for x in samples + [STAR]:
            assert glued.op(p, x, STAR) == outer.op(p, x, STAR)


def test_glue_case4_over_segment_passes_axioms():
    css = simplex_css(LABELS)
    c = simplex(2)
    samples = body_samples(2, 6)
    glued = glue(css, lambda x: x != c, build_extension(css, Imitate(c)), samples, GRID)
    assert check_axioms(glued, GRID, samples + [STAR], pq_pairs=REDUCED_PQ).passed


def test_glue_rejections():
    free = free_algebra(LABELS)
    samples = dist_samples(LABELS, 6)
    mid = uniform(LABELS)
    inner = build_extension(free, Imitate(D1))
    with pytest.raises(ValueError, match="prime"):
        glue(free, lambda x: x != mid, inner, samples, GRID)
    with pytest.raises(ValueError, match="adherence"):
        glue(free, lambda x: x != D1, build_extension(free, BlackHole()), samples, GRID)
    with pytest.raises(ValueError, match="compatibility"):
        glue(free, lambda x: x != D1, build_extension(free, Imitate(D2)), samples, GRID)


def test_eligible_case4_examples():
    seg = simplex(2)
    assert eligible_case4(seg, seg) == {"eligible": True, "canonical_P": "X minus {C}"}
    assert not eligible_case4(canonical_hull([(1, 0), (HALF, HALF)]), seg)["eligible"]
    with pytest.raises(ValueError):
        eligible_case4(point_polytope((1, 0)), seg)
    # a triangle carrier that is not the standard simplex
    dom = canonical_hull([(0, 0), (2, 0), (0, 2)])
    assert eligible_case4(dom, dom)["eligible"]
    with pytest.raises(ValueError):
        eligible_case4(simplex(4), simplex(4))


def test_probe_examples():
    free = free_algebra(LABELS)
    samples = dist_samples(LABELS, 8)
    assert probe_extension(build_extension(free, BlackHole()), samples).case == 1
    w = Dist({"1": F(2, 3), "2": F(1, 3)})
    rep = probe_extension(build_extension(free, Imitate(w)), samples)
    assert (rep.case, rep.w) == (2, w)
    rep = probe_extension(build_extension(free, Mixed(D1)), samples)
    assert (rep.case, rep.w, rep.adherence) == (3, D1, (D1,))


def test_probe_rejects_non_extension():
    free = free_algebra(LABELS)
    weird = build_extension(free, Imitate(D1))
    broken = type(weird)(free, None, lambda p, x, y: STAR if (x is STAR) != (y is STAR) and (x == D2 or y == D2) else weird.op(p, x, y), "broken")
    with pytest.raises(ValueError):
        probe_extension(broken, dist_samples(LABELS, 6), GRID)


def test_naturality_examples():
    samples = dist_samples(LABELS, 6)
    swap = {"1": "2", "2": "1"}
    assert check_naturality(BlackHole(), swap, samples, GRID, LABELS)
    cex = naturality_counterexample(Imitate(D1), swap, samples, GRID, LABELS)
    assert cex is not None and STAR in (cex["x"], cex["y"])
    assert check_naturality(Imitate(uniform(LABELS)), swap, samples, GRID, LABELS)
    # a constant map sends everything to delta-1, which is fixed, so imitation of it is natural
    assert check_naturality(Imitate(D1), {"1": "1", "2": "1"}, samples, GRID, LABELS)
    with pytest.raises(ValueError, match="homomorphism"):
        check_naturality(BlackHole(), lambda x: D1 if x == D2 else D2, samples, GRID, LABELS)


@pytest.mark.parametrize("spec", _free_specs(LABELS), ids=lambda s: s.kind)
def test_spec_json_round_trip(spec):
    doc = spec_to_json(spec, LABELS)
    base, parsed = spec_from_json(doc)
    assert parsed == spec
    assert base.labels == tuple(LABELS)


def test_spec_json_errors():
    for doc in [{}, {"kind": "mixed", "labels": ["a"]}, {"kind": "case4", "labels": ["a", "b"]}, {"kind": "nope", "labels": ["a"]}]:
        with pytest.raises(ValueError):
            spec_from_json(doc)
    base, spec = spec_from_json({"kind": "case4", "algebra": "css", "labels": ["a", "b"], "C": {"vertices": [["1", "0"], ["0", "1"]]}})
    assert spec == Case4(simplex(2))
