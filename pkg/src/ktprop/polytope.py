"""Exact rational polytopes: volumes, Minkowski sums and mixed volumes.

Polytopes are stored by their irredundant vertex sets with ``Fraction``
coordinates.  Hull computations clear denominators and run on integers
(see :mod:`ktprop._hull`), so every quantity returned here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb, factorial, gcd
from operator import add
from typing import Iterable, Mapping, Sequence

from ._exact import format_fraction, lcm_denominator, rank, rational_nth_root, solve, to_fraction
from ._hull import Facet, Hull, facet_projected_volume, int_pivots, integer_hull, volume_times_factorial
from .errors import ContractError, DegenerateError
from .intersection import KTSequence

__all__ = [
    "HomothetyCheck",
    "HomothetyWitness",
    "Polytope",
    "PolytopeFacet",
    "SurfaceMeasure",
    "homothety_check",
    "homothety_detect",
    "minkowski_sum",
    "mixed_volume_polarization",
    "mixed_volume_sequence",
    "surface_area_measure",
    "volume",
]

Point = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class PolytopeFacet:
    normal: tuple[int, ...]  # primitive integer outer normal
    offset: Fraction         # normal . x <= offset on the polytope
    vertices: tuple[int, ...]  # indices into Polytope.vertices


class Polytope:
    """Convex hull of finitely many rational points in ``dim``-space."""

    def __init__(self, points: Iterable[Sequence], dim: int | None = None):
        pts = {tuple(to_fraction(x) for x in p) for p in points}
        if not pts:
            raise ContractError("a polytope needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ContractError(f"points have mixed dimensions {sorted(dims)}")
        d = dims.pop()
        if dim is not None and dim != d:
            raise ContractError(f"points live in dimension {d}, expected {dim}")
        if d < 1:
            raise ContractError("ambient dimension must be positive")
        scale = lcm_denominator(x for p in pts for x in p)
        self._setup({tuple(int(x * scale) for x in p) for p in pts}, scale)

    def _setup(self, ints: set, scale: int) -> None:
        ordered = sorted(ints)
        self.dim = len(ordered[0])
        keep, hull = _extreme_points(ordered)
        self._scale = scale
        self._ints = tuple(ordered[i] for i in keep)
        self.vertices: tuple[Point, ...] = tuple(
            tuple(Fraction(x, scale) for x in p) for p in self._ints
        )
        self._full_hull = hull

    @classmethod
    def _from_ints(cls, ints: Iterable[tuple[int, ...]], scale: int) -> "Polytope":
        """Polytope with vertices among ``p / scale`` for integer points ``p``."""
        self = cls.__new__(cls)
        self._setup(set(ints), scale)
        return self

    # construction helpers -------------------------------------------------

    @classmethod
    def cube(cls, dim: int, side=1) -> "Polytope":
        side = to_fraction(side)
        corners = [[]]
        for _ in range(dim):
            corners = [c + [x] for c in corners for x in (0, side)]
        return cls(corners)

    @classmethod
    def simplex(cls, dim: int) -> "Polytope":
        pts = [tuple(0 for _ in range(dim))]
        pts += [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
        return cls(pts)

    def translated(self, v: Sequence) -> "Polytope":
        v = tuple(to_fraction(x) for x in v)
        if len(v) != self.dim:
            raise ContractError("translation vector has the wrong dimension")
        return Polytope(tuple(a + b for a, b in zip(p, v)) for p in self.vertices)

    def scaled(self, c) -> "Polytope":
        c = to_fraction(c)
        if c < 0:
            raise ContractError("scale factor must be non-negative")
        num, den = c.numerator, c.denominator
        if num == 0:
            return Polytope._from_ints([(0,) * self.dim], 1)
        # A positive dilation keeps the vertex order and the facet normals; only offsets scale.
        out = Polytope.__new__(Polytope)
        out.dim = self.dim
        out._scale = self._scale * den
        out._ints = tuple(tuple(num * x for x in p) for p in self._ints)
        out.vertices = tuple(tuple(Fraction(x, out._scale) for x in p) for p in out._ints)
        hull = self._full_hull
        if hull is not None:
            hull = Hull(hull.dim, tuple(Facet(f.normal, f.offset * num, f.points) for f in hull.facets), hull.vertices)
        out._full_hull = hull
        if "volume" in self.__dict__:
            out.__dict__["volume"] = self.volume * c ** self.dim
        return out

    def __add__(self, other: "Polytope") -> "Polytope":
        return minkowski_sum(self, other)

    def __rmul__(self, c) -> "Polytope":
        return self.scaled(c)

    # identity ----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = hash(self.vertices)
        return h

    def __repr__(self):
        verts = ", ".join("(" + ", ".join(format_fraction(x) for x in p) + ")" for p in self.vertices)
        return f"Polytope([{verts}])"

    # geometry ------------------------------------------------------------------

    @cached_property
    def affine_dim(self) -> int:
        if self._full_hull is not None:
            return self.dim
        base = self._ints[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in self._ints[1:]]
        return rank(diffs) if diffs else 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @property
    def _hull(self) -> Hull | None:
        return self._full_hull

    @cached_property
    def facets(self) -> tuple[PolytopeFacet, ...]:
        self._require_full("facet enumeration")
        if self.dim == 1:
            (lo,), (hi,) = self.vertices[0], self.vertices[-1]
            return (PolytopeFacet((-1,), -lo, (0,)), PolytopeFacet((1,), hi, (len(self.vertices) - 1,)))
        out = []
        for f in self._hull.facets:
            idx = tuple(i for i in range(len(self.vertices)) if f.points >> i & 1)
            out.append(PolytopeFacet(f.normal, Fraction(f.offset, self._scale), idx))
        return tuple(sorted(out, key=lambda f: f.normal))

    @cached_property
    def volume(self) -> Fraction:
        if not self.is_full_dimensional:
            return Fraction(0)
        d = self.dim
        if d == 1:
            return self.vertices[-1][0] - self.vertices[0][0]
        scaled = volume_times_factorial(self._ints, self._hull) / factorial(d)
        return scaled / Fraction(self._scale) ** d

    @cached_property
    def vertex_centroid(self) -> Point:
        k = len(self.vertices)
        return tuple(sum(p[i] for p in self.vertices) / k for i in range(self.dim))

    def _require_full(self, what: str) -> None:
        if not self.is_full_dimensional:
            raise DegenerateError(
                f"{what} needs a full-dimensional polytope; this one has affine dimension "
                f"{self.affine_dim} in {self.dim}-space"
            )


def _extreme_points(ints: list[tuple[int, ...]]) -> tuple[list[int], Hull | None]:
    """Indices of hull vertices among distinct integer points.

    For full-dimensional input (``d >= 2``) the hull is returned too, with
    facet masks re-indexed onto the kept vertices.
    """
    if len(ints) == 1:
        return [0], None
    d = len(ints[0])
    base = ints[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in ints[1:]]
    cols = _pivot_columns(diffs, d)
    k = len(cols)
    if k == 1:
        # A segment: its endpoints are extreme along any injective coordinate.
        c = cols[0]
        lo = min(range(len(ints)), key=lambda i: ints[i][c])
        hi = max(range(len(ints)), key=lambda i: ints[i][c])
        return sorted({lo, hi}), None
    if k < d:
        # Coordinate projection onto the pivot columns is injective on the affine hull.
        proj = [tuple(p[c] for c in cols) for p in ints]
        return sorted(integer_hull(proj).vertices), None
    hull = integer_hull(ints)
    keep = sorted(hull.vertices)
    new_index = {old: new for new, old in enumerate(keep)}
    facets = []
    for f in hull.facets:
        mask = 0
        for old, new in new_index.items():
            if f.points >> old & 1:
                mask |= 1 << new
        facets.append(Facet(f.normal, f.offset, mask))
    return keep, Hull(d, tuple(facets), tuple(range(len(keep))))


def _pivot_columns(rows, d: int) -> list[int]:
    """Coordinates on which projection of the row span is injective."""
    picked = int_pivots(rows, d)
    transposed = [tuple(rows[i][c] for i in picked) for c in range(d)]
    return sorted(int_pivots(transposed))


def volume(P: Polytope) -> Fraction:
    """Exact Euclidean volume; zero iff ``P`` is not full-dimensional."""
    return P.volume


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise ContractError(f"Minkowski sum of polytopes in dimensions {P.dim} and {Q.dim}")
    scale = P._scale * Q._scale // gcd(P._scale, Q._scale)
    fp, fq = scale // P._scale, scale // Q._scale
    ps = [tuple(fp * x for x in p) for p in P._ints]
    qs = [tuple(fq * x for x in q) for q in Q._ints]
    return Polytope._from_ints((tuple(map(add, p, q)) for p in ps for q in qs), scale)


def mixed_volume_sequence(P: Polytope, Q: Polytope) -> KTSequence:
    """``s_k = V(P[k], Q[n-k])`` by exact interpolation of ``t -> vol(P + tQ)``.

    ``vol(P + tQ) = sum_j C(n,j) V(P[n-j], Q[j]) t^j`` is sampled at
    ``t = 0..n`` and the Vandermonde system is solved over the rationals.
    """
    if P.dim != Q.dim:
        raise ContractError(f"mixed volumes of polytopes in dimensions {P.dim} and {Q.dim}")
    n = P.dim
    samples = [P.volume] + [minkowski_sum(P, Q.scaled(t)).volume for t in range(1, n + 1)]
    vander = [[Fraction(t) ** j for j in range(n + 1)] for t in range(n + 1)]
    coeffs = solve(vander, samples)
    s = tuple(coeffs[n - k] / comb(n, n - k) for k in range(n + 1))
    return KTSequence(n, s)


def mixed_volume_polarization(bodies: Sequence[Polytope]) -> Fraction:
    """Mixed volume by the inclusion-exclusion polarization formula.

    ``n! V(P_1, ..., P_n) = sum_{S nonempty} (-1)^(n-|S|) vol(sum_{i in S} P_i)``.
    Repeated bodies share their subset sums.
    """
    bodies = list(bodies)
    n = len(bodies)
    if n == 0:
        raise ContractError("need at least one body")
    for B in bodies:
        if B.dim != n:
            raise ContractError(f"{n} bodies need ambient dimension {n}, got {B.dim}")
    distinct: list[Polytope] = []
    labels = []
    for B in bodies:
        for j, D in enumerate(distinct):
            if D == B:
                labels.append(j)
                break
        else:
            labels.append(len(distinct))
            distinct.append(B)

    key = tuple(distinct)

    def subset_volume(counts: tuple[int, ...]) -> Fraction:
        return _dilated_sum_volume(key, counts)

    acc = Fraction(0)
    for size in range(1, n + 1):
        sign = -1 if (n - size) % 2 else 1
        for subset in combinations(range(n), size):
            counts = [0] * len(distinct)
            for i in subset:
                counts[labels[i]] += 1
            acc += sign * subset_volume(tuple(counts))
    return acc / factorial(n)


@lru_cache(maxsize=1024)
def _dilated_sum_volume(bodies: tuple[Polytope, ...], counts: tuple[int, ...]) -> Fraction:
    """``vol(sum_j counts[j] * bodies[j])``; shared between polarization calls."""
    used = [(B, c) for B, c in zip(bodies, counts) if c]
    if len(used) == 1:
        B, c = used[0]
        return B.volume * Fraction(c) ** B.dim
    total = used[0][0].scaled(used[0][1])
    for B, c in used[1:]:
        total = minkowski_sum(total, B.scaled(c))
    return total.volume


@dataclass(frozen=True)
class SurfaceMeasure:
    """Facet measures keyed by primitive outer normals.

    ``atoms[u]`` is the Euclidean (d-1)-volume of the facet with primitive
    integer normal ``u`` divided by ``|u|``.  This normalization keeps the
    values rational and turns the Minkowski relation into the exact integer
    identity ``sum_u atoms[u] * u = 0``.
    """

    dim: int
    atoms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def minkowski_residual(self) -> tuple[Fraction, ...]:
        return tuple(sum((m * u[i] for u, m in self.atoms.items()), Fraction(0)) for i in range(self.dim))

    def euclidean_area(self, normal: tuple[int, ...]) -> float:
        return float(self.atoms[normal]) * sum(x * x for x in normal) ** 0.5

    def scaled(self, c) -> "SurfaceMeasure":
        c = to_fraction(c)
        return SurfaceMeasure(self.dim, {u: c * m for u, m in self.atoms.items()})

    def ratio_to(self, other: "SurfaceMeasure") -> Fraction | None:
        """``c`` with ``other = c * self`` atom by atom, or None."""
        if self.dim != other.dim or set(self.atoms) != set(other.atoms):
            return None
        items = sorted(self.atoms.items())
        u0, m0 = items[0]
        ratio = other.atoms[u0] / m0
        if ratio <= 0:
            return None
        for u, m in items[1:]:
            if other.atoms[u] * m0 != m * other.atoms[u0]:
                return None
        return ratio


def surface_area_measure(P: Polytope) -> SurfaceMeasure:
    P._require_full("a surface area measure")
    d = P.dim
    if d == 1:
        return SurfaceMeasure(1, {(-1,): Fraction(1), (1,): Fraction(1)})
    atoms = {}
    for f in P._hull.facets:
        m = facet_projected_volume(P._ints, f, P._hull.vertices)
        atoms[f.normal] = m / Fraction(P._scale) ** (d - 1)
    return SurfaceMeasure(d, dict(sorted(atoms.items())))


@dataclass(frozen=True)
class HomothetyWitness:
    """``Q = scale * P + translation`` holds on vertex sets."""

    scale: Fraction
    translation: tuple[Fraction, ...]


@dataclass(frozen=True)
class HomothetyCheck:
    witness: HomothetyWitness | None
    irrational_scale: bool = False
    reason: str = ""


def homothety_check(P: Polytope, Q: Polytope) -> HomothetyCheck:
    """Decide whether ``Q = cP + v`` with ``c > 0``, with a diagnostic.

    The candidate scale is the rational d-th root of ``vol Q / vol P``; if
    that root is irrational, no homothety with rational data exists and
    ``irrational_scale`` is set.
    """
    if P.dim != Q.dim:
        raise ContractError(f"homothety test between dimensions {P.dim} and {Q.dim}")
    P._require_full("homothety detection")
    Q._require_full("homothety detection")
    if len(P.vertices) != len(Q.vertices):
        return HomothetyCheck(None, reason="vertex counts differ")
    c = rational_nth_root(Q.volume / P.volume, P.dim)
    if c is None:
        return HomothetyCheck(None, irrational_scale=True, reason="volume ratio is not a rational d-th power")
    v = tuple(q - c * p for p, q in zip(P.vertex_centroid, Q.vertex_centroid))
    image = sorted(tuple(c * a + b for a, b in zip(p, v)) for p in P.vertices)
    if tuple(image) != Q.vertices:
        return HomothetyCheck(None, reason="candidate map does not carry vertices onto vertices")
    return HomothetyCheck(HomothetyWitness(c, v))


def homothety_detect(P: Polytope, Q: Polytope) -> HomothetyWitness | None:
    return homothety_check(P, Q).witness
