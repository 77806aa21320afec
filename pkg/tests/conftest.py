"""Shared independent oracles for the test suite.

None of these reuse library code paths: they are brute force or come
from a third-party implementation (qhull through scipy).
"""

from fractions import Fraction
from itertools import combinations
from math import atan2

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from ktprop._exact import det


def shoelace(points):
    """Area of the convex hull of 2D points, ordering vertices by angle."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    ring = sorted(pts, key=lambda p: atan2(float(p[1] - cy), float(p[0] - cx)))
    # interior and collinear points contribute signed zero-area slivers unless dropped
    hull = [p for p in ring if _is_extreme_2d(p, pts)]
    area = Fraction(0)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:] + hull[:1]):
        area += x1 * y2 - x2 * y1
    return abs(area) / 2


def _is_extreme_2d(p, pts):
    others = [q for q in pts if q != p]
    for a, b in combinations(others, 2):
        for c in others:
            if len({a, b, c}) < 3:
                continue
            if _in_triangle(p, a, b, c):
                return False
    for a, b in combinations(others, 2):
        if _on_open_segment(p, a, b):
            return False
    return True


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _in_triangle(p, a, b, c):
    d1, d2, d3 = _cross(a, b, p), _cross(b, c, p), _cross(c, a, p)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos) and _cross(a, b, c) != 0


def _on_open_segment(p, a, b):
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]) and p not in (a, b)


def brute_force_facets(points):
    """Supporting hyperplanes through d affinely independent points.

    Returns ``{(primitive_normal, offset): frozenset(incident points)}``.
    Exponential in the point count; fine for a dozen points.
    """
    pts = [tuple(Fraction(x) for x in p) for p in set(map(tuple, points))]
    d = len(pts[0])
    out = {}
    for combo in combinations(pts, d):
        base = combo[0]
        rows = [[a - b for a, b in zip(p, base)] for p in combo[1:]]
        # generalized cross product via cofactors
        normal = []
        for i in range(d):
            minor = [r[:i] + r[i + 1:] for r in rows]
            normal.append((-1) ** i * det(minor) if minor else Fraction(1))
        if all(x == 0 for x in normal):
            continue
        den = 1
        for x in normal:
            den = den * x.denominator // np.gcd(den, x.denominator)
        ints = [int(x * den) for x in normal]
        g = int(np.gcd.reduce([abs(x) for x in ints]))
        ints = [x // g for x in ints]
        values = [sum(a * b for a, b in zip(ints, p)) for p in pts]
        off = sum(a * b for a, b in zip(ints, base))
        if all(v <= off for v in values):
            key = (tuple(ints), off)
        elif all(v >= off for v in values):
            key = (tuple(-x for x in ints), -off)
        else:
            continue
        out[key] = frozenset(p for p, v in zip(pts, values) if v == off)
    return out


def qhull_volume(points) -> float:
    return float(ConvexHull(np.array([[float(x) for x in p] for p in points])).volume)


def qhull_vertices(points) -> set:
    arr = [tuple(Fraction(x) for x in p) for p in points]
    hull = ConvexHull(np.array([[float(x) for x in p] for p in arr]))
    return {arr[i] for i in hull.vertices}


@pytest.fixture
def square():
    from ktprop import Polytope

    return Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def triangle():
    from ktprop import Polytope

    return Polytope([(0, 0), (1, 0), (0, 1)])
