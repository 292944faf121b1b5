"""Slow reference geometry: gift wrapping plus brute-force candidate points.

Shares no code with svest.geometry.
"""
import random
from fractions import Fraction as F


def orient(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def dist2(a, b):
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def jarvis(points):
    """Convex hull vertices (no collinear points), counter-clockwise."""
    pts = list(set(points))
    if len(pts) <= 1:
        return pts
    start = min(pts)
    hull = [start]
    cur = start
    while True:
        cand = None
        for q in pts:
            if q == cur:
                continue
            if cand is None:
                cand = q
                continue
            o = orient(cur, cand, q)
            # q is clockwise of cand, or collinear and farther
            if o < 0 or (o == 0 and dist2(cur, q) > dist2(cur, cand)):
                cand = q
        if cand == start or cand is None:
            break
        hull.append(cand)
        cur = cand
        if len(hull) > len(pts):
            raise AssertionError("gift wrapping did not close")
    return hull


def inside(poly, p):
    if not poly:
        return False
    if len(poly) == 1:
        return poly[0] == p
    if len(poly) == 2:
        a, b = poly
        return orient(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    return all(orient(poly[i], poly[(i + 1) % len(poly)], p) >= 0 for i in range(len(poly)))


def edges(poly):
    if len(poly) == 2:
        return [tuple(poly)]
    if len(poly) < 2:
        return []
    return [(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def segment_hits(s, t):
    (p, p2), (q, q2) = s, t
    r = (p2[0] - p[0], p2[1] - p[1])
    d = (q2[0] - q[0], q2[1] - q[1])
    den = r[0] * d[1] - r[1] * d[0]
    if den == 0:
        return []
    w = (q[0] - p[0], q[1] - p[1])
    a = (w[0] * d[1] - w[1] * d[0]) / den
    b = (w[0] * r[1] - w[1] * r[0]) / den
    if 0 <= a <= 1 and 0 <= b <= 1:
        return [(p[0] + a * r[0], p[1] + a * r[1])]
    return []


def slow_intersection(p, q):
    cands = [v for v in p if inside(q, v)] + [v for v in q if inside(p, v)]
    for s in edges(p):
        for t in edges(q):
            cands.extend(segment_hits(s, t))
    return jarvis(cands)


def random_points(rng: random.Random, n=None, span=12):
    n = n or rng.randint(1, 7)
    return [(F(rng.randint(0, span * 3), rng.randint(1, 3)), F(rng.randint(0, span * 3), rng.randint(1, 3))) for _ in range(n)]
