import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from geometry_oracle import jarvis, random_points, slow_intersection
from svest.geometry import (
    EMPTY,
    GeometryError,
    RationalPolygon,
    affine_image,
    clip,
    convex_hull,
    intersect,
    intersect_all,
)
from svest.twotank import MATRIX


def square(x0, x1):
    return RationalPolygon.box(x0, x1, x0, x1)


def test_canonical_form():
    p = RationalPolygon(((1, 1), (0, 0), (1, 0), (0, 1), (F(1, 2), 0)))
    assert p.vertices == ((0, 0), (1, 0), (1, 1), (0, 1))
    assert p.area() == 1
    assert RationalPolygon.hull([(0, 0), (2, 2), (1, 1)]).vertices == ((0, 0), (2, 2))


def test_interior_vertex_rejected():
    with pytest.raises(GeometryError):
        RationalPolygon(((0, 0), (4, 0), (0, 4), (1, 1)))


def test_translation():
    unit = square(0, 1)
    assert affine_image(unit, ((1, 0), (0, 1)), (7, 7)) == square(7, 8)


def test_twotank_point_images():
    assert affine_image(RationalPolygon.point(0, 0), MATRIX, (7, 7)) == RationalPolygon.point(7, 7)
    assert affine_image(RationalPolygon.point(7, 7), MATRIX, (7, 7)).vertices == ((F(231, 20), F(231, 20)),)


def test_singular_matrix_rejected():
    with pytest.raises(GeometryError):
        affine_image(square(0, 1), ((1, 1), (1, 1)), (0, 0))


def test_intersection_examples():
    p = square(0, 2)
    assert intersect(p, p) == p
    assert intersect(square(0, 1), square(5, 6)) is EMPTY
    assert intersect(square(0, 2), square(1, 3)) == square(1, 2)
    # touching corners give a point, touching edges a segment
    assert intersect(square(0, 1), square(1, 2)) == RationalPolygon.point(1, 1)
    assert intersect(RationalPolygon.box(0, 1, 0, 1), RationalPolygon.box(1, 2, 0, 1)).vertices == ((1, 0), (1, 1))


def test_degenerate_operands():
    seg = RationalPolygon.hull([(0, 0), (2, 2)])
    assert intersect(seg, square(1, 3)).vertices == ((1, 1), (2, 2))
    assert intersect(seg, RationalPolygon.point(1, 1)) == RationalPolygon.point(1, 1)
    assert intersect(seg, RationalPolygon.point(1, 0)).is_empty
    other = RationalPolygon.hull([(0, 2), (2, 0)])
    assert intersect(seg, other) == RationalPolygon.point(1, 1)


def test_intersect_all_and_empty():
    assert intersect_all([square(0, 3), square(1, 4), square(2, 5)]) == square(2, 3)
    assert intersect(EMPTY, square(0, 1)).is_empty
    with pytest.raises(GeometryError):
        intersect_all([])


def test_json_round_trip():
    p = RationalPolygon.hull([(F(1, 3), 0), (2, F(5, 7)), (0, 1)])
    assert RationalPolygon.from_json(p.to_json()) == p


def test_clip_keeps_boundary():
    vs = list(square(0, 2).vertices)
    out = clip(vs, (F(1), F(0), F(2)))  # x <= 2 keeps everything
    assert convex_hull(out) == square(0, 2).vertices
    assert clip(vs, (F(1), F(0), F(-1))) == []


def _points():
    return st.integers(0, 10**9).map(lambda s: random_points(random.Random(s)))


@settings(max_examples=200, deadline=None)
@given(_points())
def test_hull_matches_gift_wrapping(pts):
    mine = RationalPolygon.hull(pts)
    ref = jarvis(pts)
    assert set(mine.vertices) == set(ref)
    # counter-clockwise, starting at the smallest vertex
    if len(mine) >= 3:
        assert mine.vertices[0] == min(mine.vertices)
        assert mine.area() > 0


@settings(max_examples=200, deadline=None)
@given(_points(), _points())
def test_intersection_matches_oracle(a, b):
    p, q = RationalPolygon.hull(a), RationalPolygon.hull(b)
    mine = intersect(p, q)
    assert set(mine.vertices) == set(slow_intersection(list(p.vertices), list(q.vertices)))
    assert mine == intersect(q, p)
    for v in mine.vertices:
        assert p.contains(v) and q.contains(v)


@settings(max_examples=100, deadline=None)
@given(_points(), st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 4))
def test_affine_image_of_vertices(pts, a, b, d):
    m = ((d, a), (0, 1 + abs(b)))
    p = RationalPolygon.hull(pts)
    img = affine_image(p, m, (1, -2))
    expected = jarvis([(d * x + a * y + 1, (1 + abs(b)) * y - 2) for x, y in p.vertices])
    assert set(img.vertices) == set(expected)
