"""Exact convex hulls of integer point sets.

Facets are found with the double description method applied to the cone of
valid inequalities ``{y : y . (1, p) >= 0 for all points p}``: for a
full-dimensional point set its extreme rays are exactly the facet
inequalities.  All arithmetic is on Python ints, so results are exact.
Adjacency of rays uses the combinatorial test on zero sets, stored as
bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import mul
from typing import Sequence

from ._exact import primitive


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]  # primitive, outward
    offset: int              # normal . x <= offset on the hull
    points: int              # bitmask over input point indices lying on the facet


@dataclass(frozen=True)
class Hull:
    dim: int
    facets: tuple[Facet, ...]
    vertices: tuple[int, ...]  # indices into the input point list


def _dot(a, b) -> int:
    return sum(map(mul, a, b))


def int_pivots(rows: Sequence[Sequence[int]], limit: int | None = None) -> list[int]:
    """Indices of a maximal linearly independent subset of integer rows (greedy, in order)."""
    basis: list[tuple[list[int], int]] = []  # (reduced row, pivot column)
    chosen: list[int] = []
    for idx, row in enumerate(rows):
        v = list(row)
        for b, p in basis:
            if v[p]:
                f, g = b[p], v[p]
                v = [x * f - y * g for x, y in zip(v, b)]
        p = next((c for c, x in enumerate(v) if x), None)
        if p is None:
            continue
        basis.append((list(primitive(v)), p))
        chosen.append(idx)
        if limit is not None and len(chosen) == limit:
            break
    return chosen


def _initial_simplex(rows: Sequence[tuple[int, ...]]) -> list[int]:
    """Indices of ``len(rows[0])`` linearly independent homogenized rows."""
    width = len(rows[0])
    chosen = int_pivots(rows, width)
    if len(chosen) < width:
        raise ValueError("point set is not full-dimensional")
    return chosen


def integer_hull(points: Sequence[Sequence[int]]) -> Hull:
    """Facets and vertices of the convex hull of distinct, full-dimensional integer points."""
    given = [tuple(int(x) for x in p) for p in points]
    d = len(given[0])
    # Far-from-centroid points first: interior points then cost one pass each.
    count = len(given)
    centroid = [sum(p[i] for p in given) for i in range(d)]
    order = sorted(
        range(count),
        key=lambda i: -sum((count * given[i][c] - centroid[c]) ** 2 for c in range(d)),
    )
    pts = [given[i] for i in order]
    rows = [(1,) + p for p in pts]
    init = _initial_simplex(rows)

    rays: list[tuple[tuple[int, ...], int]] = []
    all_init = 0
    for i in init:
        all_init |= 1 << i
    for i in init:
        others = [rows[k] for k in init if k != i]
        vec = primitive(_cross(others))
        if _dot(rows[i], vec) < 0:
            vec = tuple(-x for x in vec)
        rays.append((vec, all_init & ~(1 << i)))

    need = d - 1
    init_set = set(init)
    for idx, row in enumerate(rows):
        if idx in init_set:
            continue
        bit = 1 << idx
        plus, zero, minus = [], [], []
        for vec, mask in rays:
            val = _dot(row, vec)
            if val > 0:
                plus.append((vec, mask, val))
            elif val < 0:
                minus.append((vec, mask, val))
            else:
                zero.append((vec, mask | bit))
        if not minus:
            rays = [(v, m) for v, m, _ in plus] + zero
            continue
        masks = [m for _, m in rays]
        new = [(v, m) for v, m, _ in plus] + zero
        for pv, pm, pval in plus:
            for mv, mm, mval in minus:
                common = pm & mm
                if common.bit_count() < need:
                    continue
                adjacent = True
                for other in masks:
                    if other & common == common and other != pm and other != mm:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vec = primitive([pval * b - mval * a for a, b in zip(pv, mv)])
                new.append((vec, common | bit))
        rays = new

    facets = []
    for vec, mask in rays:
        normal = primitive([-x for x in vec[1:]])
        on = (mask & -mask).bit_length() - 1
        remapped = 0
        while mask:
            low = mask & -mask
            remapped |= 1 << order[low.bit_length() - 1]
            mask ^= low
        facets.append(Facet(normal=normal, offset=_dot(normal, pts[on]), points=remapped))

    incidence = [0] * count
    for k, f in enumerate(facets):
        m = f.points
        while m:
            low = m & -m
            incidence[low.bit_length() - 1] |= 1 << k
            m ^= low
    vertices = []
    for i, inc in enumerate(incidence):
        if not any(j != i and other & inc == inc for j, other in enumerate(incidence)):
            vertices.append(i)
    return Hull(dim=d, facets=tuple(facets), vertices=tuple(vertices))


def _int_det(a: list[list[int]]) -> int:
    """Bareiss determinant of a square integer matrix."""
    a = [row[:] for row in a]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _cross(rows: Sequence[Sequence[int]]) -> list[int]:
    """Generalized cross product: a vector orthogonal to ``n-1`` rows in Z^n."""
    n = len(rows) + 1
    return [
        (-1) ** k * _int_det([list(r[:k]) + list(r[k + 1:]) for r in rows])
        for k in range(n)
    ]


def hull_2d(points: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Counter-clockwise hull vertices (monotone chain, collinear points dropped)."""
    pts = sorted(set((int(p[0]), int(p[1])) for p in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def volume_times_factorial(points: Sequence[Sequence[int]], hull: Hull | None = None) -> Fraction:
    """``d! * vol`` of the hull of full-dimensional integer points.

    Pyramid decomposition from the first vertex; each facet's contribution
    is ``(offset - normal . apex) * vol(projected facet) / |normal_j|`` with
    the projected facet volume computed recursively in one dimension less.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    d = len(pts[0])
    if d == 1:
        xs = [p[0] for p in pts]
        return Fraction(max(xs) - min(xs))
    if d == 2:
        ring = hull_2d(pts)
        twice = 0
        for (x0, y0), (x1, y1) in zip(ring, ring[1:] + ring[:1]):
            twice += x0 * y1 - x1 * y0
        return Fraction(abs(twice))
    if len(pts) == d + 1:
        base = pts[0]
        return Fraction(abs(_int_det([[a - b for a, b in zip(p, base)] for p in pts[1:]])))
    if hull is None:
        hull = integer_hull(pts)
    apex = pts[hull.vertices[0]]
    total = Fraction(0)
    for f in hull.facets:
        height = f.offset - _dot(f.normal, apex)
        if height == 0:
            continue
        total += height * facet_projected_volume(pts, f, hull.vertices)
    # sum_F height_F * m_F = d * vol;  d! vol = (d-1)! * sum
    return total * _factorial(d - 1)


def facet_projected_volume(pts, facet: Facet, vertices) -> Fraction:
    """Euclidean facet area divided by the norm of its primitive normal.

    Equals ``vol_{d-1}`` of the facet projected along a coordinate ``j``
    with ``normal[j] != 0``, divided by ``|normal[j]|``.
    """
    j = max(range(len(facet.normal)), key=lambda c: abs(facet.normal[c]))
    face_pts = [pts[i] for i in vertices if facet.points >> i & 1]
    proj = list({p[:j] + p[j + 1:] for p in face_pts})
    k = len(proj[0])
    vol_k = volume_times_factorial(proj) / _factorial(k)
    return vol_k / abs(facet.normal[j])


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
