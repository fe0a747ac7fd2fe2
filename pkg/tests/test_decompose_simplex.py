import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexterm.geometry.decompose import decompose_2d, is_indecomposable_2d
from convexterm.geometry.polytope import canonical_hull, is_homothetic, minkowski_sum, point_polytope, scale_translate
from convexterm.geometry.simplex import (
    homothety_normalize,
    in_corner_region,
    in_normal_form,
    phi,
    phi_inv,
    simplex,
    touches_all_faces,
)
from convexterm.sampling import random_polytope

F = Fraction


def test_unit_square_split():
    square = canonical_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    b, c = decompose_2d(square)
    assert b == canonical_hull([(0, 0), (1, 0)])
    assert c == canonical_hull([(0, 0), (0, 1)])


@pytest.mark.parametrize(
    "pts",
    [[(0, 0), (1, 0), (0, 1)], [(0, 0), (3, 1)], [(2, 2)]],
)
def test_indecomposable(pts):
    assert decompose_2d(canonical_hull(pts)) is None
    assert is_indecomposable_2d(canonical_hull(pts))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposition_soundness(seed):
    rng = random.Random(seed)
    a = random_polytope(rng, 2, 7, span=2, max_den=2)
    found = decompose_2d(a)
    if a.affine_dim() < 2 or len(a) == 3:
        assert found is None
        return
    # in the plane every polygon with at least four vertices decomposes
    b, c = found
    assert minkowski_sum(b, c) == a
    assert not (is_homothetic(b, a) and is_homothetic(c, a))


def test_embedded_quadrilateral():
    quad = canonical_hull([(F(1, 2), F(1, 2), 0), (F(1, 2), 0, F(1, 2)), (0, F(1, 4), F(3, 4)), (0, F(3, 4), F(1, 4))])
    b, c = decompose_2d(quad)
    assert minkowski_sum(b, c) == quad


def test_phi_round_trip_and_region():
    tri = canonical_hull([(0, F(1, 2), F(1, 2)), (F(1, 3), 0, F(2, 3)), (F(1, 4), F(3, 4), 0)])
    assert phi_inv(phi(tri)) == tri
    assert phi(tri) == canonical_hull([v[:-1] for v in tri.vertices])
    assert in_corner_region(phi(tri))
    assert touches_all_faces(tri)
    assert not touches_all_faces(canonical_hull([(F(1, 3),) * 3]))
    with pytest.raises(ValueError):
        touches_all_faces(canonical_hull([(1, 1, 0)]))


def test_normalize_examples():
    assert homothety_normalize(canonical_hull([(F(1, 4),), (F(3, 4),)])) == canonical_hull([(0,), (1,)])
    tri = canonical_hull([(1, 1), (3, 1), (1, 3)])
    assert homothety_normalize(tri) == canonical_hull([(0, 0), (1, 0), (0, 1)])
    with pytest.raises(ValueError):
        homothety_normalize(point_polytope((1, 1)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_normalize_properties(seed, dim):
    rng = random.Random(seed)
    a = random_polytope(rng, dim, 5)
    if a.is_singleton():
        return
    n = homothety_normalize(a)
    assert in_normal_form(n)
    assert is_homothetic(n, a)
    assert homothety_normalize(n) == n
    # invariant under positive rescaling and translation of the input
    assert homothety_normalize(scale_translate(a, F(5, 3), (1,) * dim)) == n
    if dim >= 1:
        assert in_corner_region(n)
        assert touches_all_faces(phi_inv(n))


def test_simplex_shape():
    s = simplex(3)
    assert len(s) == 3 and s.affine_dim() == 2
    with pytest.raises(ValueError):
        simplex(0)
