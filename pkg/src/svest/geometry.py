"""Exact rational arithmetic on convex polygons in the plane.

Polygons are stored in a canonical form: the vertices of the convex hull,
counter-clockwise, starting at the lexicographically smallest vertex, with
collinear and duplicate points removed.  Degenerate polygons (a segment or
a single point) keep their 2 or 1 vertices; the empty polygon has none.
Every coordinate is a :class:`fractions.Fraction`, so two runs of the same
computation produce identical objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Point = tuple[Fraction, Fraction]
Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
# a*x + b*y <= c
HalfPlane = tuple[Fraction, Fraction, Fraction]


class GeometryError(ValueError):
    pass


def as_point(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> tuple[Point, ...]:
    """Monotone-chain hull; strict turns only, so collinear points drop out."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


@dataclass(frozen=True)
class RationalPolygon:
    """A closed convex polygon with exact rational vertices."""

    vertices: tuple[Point, ...] = ()

    def __post_init__(self):
        pts = [as_point(p) for p in self.vertices]
        hull = convex_hull(pts)
        if len(hull) >= 3:
            for p in pts:
                if p not in hull and _strictly_inside(hull, p):
                    raise GeometryError(f"vertex {p} lies inside the hull; polygon is not convex")
        object.__setattr__(self, "vertices", hull)

    @classmethod
    def hull(cls, points: Iterable) -> "RationalPolygon":
        return _canonical(convex_hull(as_point(p) for p in points))

    @classmethod
    def box(cls, x0, x1, y0, y1) -> "RationalPolygon":
        if x0 > x1 or y0 > y1:
            return EMPTY
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    @classmethod
    def point(cls, x, y) -> "RationalPolygon":
        return cls(((x, y),))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_degenerate(self) -> bool:
        return 0 < len(self.vertices) < 3

    def __len__(self) -> int:
        return len(self.vertices)

    def __bool__(self) -> bool:
        return bool(self.vertices)

    @property
    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def area(self) -> Fraction:
        vs = self.vertices
        if len(vs) < 3:
            return Fraction(0)
        total = Fraction(0)
        for i, (x0, y0) in enumerate(vs):
            x1, y1 = vs[(i + 1) % len(vs)]
            total += x0 * y1 - x1 * y0
        return total / 2

    def contains(self, point) -> bool:
        p = as_point(point)
        return all(a * p[0] + b * p[1] <= c for a, b, c in self.halfplanes()) and not self.is_empty

    def halfplanes(self) -> list[HalfPlane]:
        """Inequalities whose common solution set is exactly this polygon."""
        vs = self.vertices
        if len(vs) == 1:
            (x, y), = vs
            one, zero = Fraction(1), Fraction(0)
            return [(one, zero, x), (-one, zero, -x), (zero, one, y), (zero, -one, -y)]
        if len(vs) == 2:
            p, q = vs
            dx, dy = q[0] - p[0], q[1] - p[1]
            return [
                _edge(p, q),
                _edge(q, p),
                (dx, dy, dx * q[0] + dy * q[1]),
                (-dx, -dy, -(dx * p[0] + dy * p[1])),
            ]
        return [_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def to_json(self) -> list:
        return [[[v.numerator, v.denominator] for v in p] for p in self.vertices]

    @classmethod
    def from_json(cls, data) -> "RationalPolygon":
        return cls(tuple((Fraction(x[0], x[1]), Fraction(y[0], y[1])) for x, y in data))

    def __repr__(self) -> str:
        inner = ", ".join(f"({x}, {y})" for x, y in self.vertices)
        return f"RationalPolygon([{inner}])"


EMPTY = RationalPolygon()


def _canonical(hull: tuple[Point, ...]) -> RationalPolygon:
    # skips __post_init__; caller guarantees ``hull`` came from convex_hull
    poly = object.__new__(RationalPolygon)
    object.__setattr__(poly, "vertices", hull)
    return poly


def _edge(p: Point, q: Point) -> HalfPlane:
    # left side of p->q
    a = q[1] - p[1]
    b = p[0] - q[0]
    return (a, b, a * p[0] + b * p[1])


def _strictly_inside(hull: Sequence[Point], p: Point) -> bool:
    n = len(hull)
    return all(_cross(hull[i], hull[(i + 1) % n], p) > 0 for i in range(n))


def clip(vertices: Sequence[Point], hp: HalfPlane) -> list[Point]:
    """Clip a convex vertex cycle against one closed half-plane."""
    a, b, c = hp
    out: list[Point] = []
    n = len(vertices)
    if n == 0:
        return out
    prev = vertices[-1]
    sp = a * prev[0] + b * prev[1] - c
    for cur in vertices:
        sc = a * cur[0] + b * cur[1] - c
        if sc <= 0:
            if sp > 0:
                t = sp / (sp - sc)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif sp <= 0:
            t = sp / (sp - sc)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, sp = cur, sc
    return out


def _bbox_disjoint(p: RationalPolygon, q: RationalPolygon) -> bool:
    px0, px1, py0, py1 = p.bbox
    qx0, qx1, qy0, qy1 = q.bbox
    return px1 < qx0 or qx1 < px0 or py1 < qy0 or qy1 < py0


def intersect(p: RationalPolygon, q: RationalPolygon) -> RationalPolygon:
    """Exact intersection of two convex polygons (possibly empty)."""
    if p.is_empty or q.is_empty or _bbox_disjoint(p, q):
        return EMPTY
    if p == q:
        return p
    # clip the polygon with more vertices by the half-planes of the smaller one
    subject, clipper = (p, q) if len(p) >= len(q) else (q, p)
    vs: list[Point] = list(subject.vertices)
    for hp in clipper.halfplanes():
        vs = clip(vs, hp)
        if not vs:
            return EMPTY
    return _canonical(convex_hull(vs))


def intersect_all(polygons: Iterable[RationalPolygon]) -> RationalPolygon:
    it = iter(polygons)
    try:
        acc = next(it)
    except StopIteration:
        raise GeometryError("intersection of no polygons is unbounded") from None
    for poly in it:
        acc = intersect(acc, poly)
    return acc


def as_matrix(m) -> Matrix:
    return ((Fraction(m[0][0]), Fraction(m[0][1])), (Fraction(m[1][0]), Fraction(m[1][1])))


def determinant(m: Matrix) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def apply_affine(m: Matrix, offset, point) -> Point:
    x, y = point
    return (m[0][0] * x + m[0][1] * y + offset[0], m[1][0] * x + m[1][1] * y + offset[1])


def affine_image(poly: RationalPolygon, matrix, offset) -> RationalPolygon:
    """Image of ``poly`` under ``x -> matrix @ x + offset``; matrix must be invertible."""
    m = as_matrix(matrix)
    if determinant(m) == 0:
        raise GeometryError("affine_image requires an invertible matrix")
    b = as_point(offset)
    return _canonical(convex_hull(apply_affine(m, b, v) for v in poly.vertices))
