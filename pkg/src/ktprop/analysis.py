"""Khovanskii-Teissier inequalities and the proportionality criterion.

Everything here works on either model: a ring model (an intersection
oracle with class vectors) or the polytope model (pairs of polytopes, with
mixed volumes as intersection numbers).  With rational data every equality
is decided on exact defects; float tables switch to a relative tolerance
and mark the result as approximate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import mpmath

from .errors import ContractError, PreconditionError
from .intersection import (
    ClassVector,
    KTSequence,
    MultiProjModel,
    TableModel,
    cone_membership,
    kt_sequence,
)
from .polytope import (
    Polytope,
    homothety_check,
    minkowski_sum,
    mixed_volume_sequence,
    surface_area_measure,
)

__all__ = [
    "BMReport",
    "EquivalenceReport",
    "InequalityReport",
    "PolytopeModel",
    "ScanReport",
    "StatementStatus",
    "check_bm_superadditivity",
    "check_inequalities",
    "equivalence_report",
    "power_functional",
    "power_map_injectivity_scan",
    "proportional_ratio",
    "proportionality_check",
]

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PolytopeModel:
    """Toric model: classes are rational polytopes in ``dim``-space."""

    dim: int

    @property
    def n(self) -> int:
        return self.dim

    def describe(self) -> str:
        return f"polytopes in R^{self.dim}"


def _is_zero(defect, scale, tol: float | None) -> bool:
    if tol is None:
        return defect == 0
    return abs(defect) <= tol * max(abs(scale), 1e-300)


def _nonneg(defect, scale, tol: float | None) -> bool:
    if tol is None:
        return defect >= 0
    return defect >= -tol * max(abs(scale), 1e-300)


def _tolerance_for(*values, tol: float | None) -> float | None:
    if tol is not None:
        return tol
    if any(isinstance(v, float) for v in values):
        return DEFAULT_TOLERANCE
    return None


# ---------------------------------------------------------------------------
# inequality chain


@dataclass(frozen=True)
class InequalityReport:
    n: int
    s: tuple
    log_concavity_defects: tuple   # s_k^2 - s_{k-1} s_{k+1}, k = 1..n-1
    power_chain_defects: tuple     # s_k^n - s_0^{n-k} s_n^k, k = 0..n
    extreme_defect: object         # s_{n-1}^n - s_0 s_n^{n-1}
    ratios: tuple                  # s_{k+1} / s_k, k = 0..n-1
    log_concave: bool
    power_chain_holds: bool
    ratio_chain_holds: bool        # s_{n-1}/s_0 >= (s_n/s_{n-1})^{n-1}
    ratios_nonincreasing: bool
    equality_1: bool
    equality_2: bool
    equality_3: bool
    approximate: bool = False


def check_inequalities(s: KTSequence | Sequence, tol: float | None = None) -> InequalityReport:
    """Evaluate log-concavity, the power chain and the extreme-index statement.

    Requires every ``s_k > 0``.  Equality flags are set iff the corresponding
    defects are all exactly zero (or within ``tol`` in approximate mode).
    """
    if not isinstance(s, KTSequence):
        s = KTSequence(len(s) - 1, tuple(s))
    vals = s.s
    n = s.n
    for k, v in enumerate(vals):
        if not v > 0:
            raise PreconditionError(f"s_{k} = {v} is not positive; the classes are not nef and big")
    tol = _tolerance_for(*vals, tol=tol)

    lc = tuple(vals[k] ** 2 - vals[k - 1] * vals[k + 1] for k in range(1, n))
    lc_scale = [vals[k] ** 2 for k in range(1, n)]
    pc = tuple(vals[k] ** n - vals[0] ** (n - k) * vals[n] ** k for k in range(n + 1))
    pc_scale = [vals[k] ** n for k in range(n + 1)]
    extreme = vals[n - 1] ** n - vals[0] * vals[n] ** (n - 1) if n >= 1 else 0
    ratios = tuple(vals[k + 1] / vals[k] for k in range(n))

    log_concave = all(_nonneg(d, sc, tol) for d, sc in zip(lc, lc_scale))
    if n >= 1:
        lhs = vals[n - 1] / vals[0]
        rhs = (vals[n] / vals[n - 1]) ** (n - 1)
        ratio_chain = _nonneg(lhs - rhs, lhs, tol)
    else:
        ratio_chain = True
    nonincreasing = all(_nonneg(a - b, a, tol) for a, b in zip(ratios, ratios[1:]))

    return InequalityReport(
        n=n,
        s=vals,
        log_concavity_defects=lc,
        power_chain_defects=pc,
        extreme_defect=extreme,
        ratios=ratios,
        log_concave=log_concave,
        power_chain_holds=all(_nonneg(d, sc, tol) for d, sc in zip(pc, pc_scale)),
        ratio_chain_holds=ratio_chain,
        ratios_nonincreasing=nonincreasing,
        equality_1=all(_is_zero(d, sc, tol) for d, sc in zip(lc, lc_scale)),
        equality_2=all(_is_zero(d, sc, tol) for d, sc in zip(pc, pc_scale)),
        equality_3=_is_zero(extreme, vals[n - 1] ** n if n else 1, tol),
        approximate=tol is not None,
    )


# ---------------------------------------------------------------------------
# model plumbing


def _require_nef_big(model, alpha, beta) -> None:
    if isinstance(model, PolytopeModel):
        for name, P in (("alpha", alpha), ("beta", beta)):
            if not isinstance(P, Polytope):
                raise ContractError(f"{name} must be a Polytope in the polytope model")
            if P.dim != model.dim:
                raise ContractError(f"{name} lives in dimension {P.dim}, model has {model.dim}")
            if not P.is_full_dimensional:
                raise PreconditionError(
                    f"{name} is not full-dimensional (affine dimension {P.affine_dim}); "
                    "the classes must be nef and big"
                )
        return
    if isinstance(model, MultiProjModel):
        for name, a in (("alpha", alpha), ("beta", beta)):
            m = cone_membership(model, a)
            if not (m.is_nef and m.is_big):
                raise PreconditionError(f"{name} = {a.coords} is not nef and big on {model.describe()}")
        return
    if isinstance(model, TableModel):
        # Cone membership is unknown for a bare table; positivity of s is checked downstream.
        for a in (alpha, beta):
            if a.basis_dim != model.basis_dim:
                raise ContractError(f"class of dimension {a.basis_dim} does not match basis_dim={model.basis_dim}")
        return
    raise ContractError(f"unsupported model {model!r}")


def model_sequence(model, alpha, beta) -> KTSequence:
    if isinstance(model, PolytopeModel):
        return mixed_volume_sequence(alpha, beta)
    return kt_sequence(model.oracle, alpha, beta)


def model_volume_of_sum(model, alpha, beta):
    if isinstance(model, PolytopeModel):
        return minkowski_sum(alpha, beta).volume
    s = alpha + beta
    return model.oracle.evaluate([s] * model.n)


# ---------------------------------------------------------------------------
# Brunn-Minkowski type statement


@dataclass(frozen=True)
class BMReport:
    volume_sum: object          # vol(alpha + beta)
    binomial_sum: object        # sum_k C(n,k) s_k
    identity_defect: object     # volume_sum - binomial_sum; zero by multilinearity
    equality: bool              # decided through the exact power-chain defects
    root_gap: float             # vol(a+b)^(1/n) - vol(a)^(1/n) - vol(b)^(1/n), 50-digit evaluation
    approximate: bool = False

    @property
    def identity_holds(self) -> bool:
        if self.approximate:
            return abs(self.identity_defect) <= DEFAULT_TOLERANCE * max(abs(self.volume_sum), 1e-300)
        return self.identity_defect == 0


def _root_gap(total, s_n, s_0, n: int) -> float:
    with mpmath.workdps(50):
        def root(x):
            x = Fraction(x) if not isinstance(x, float) else x
            if isinstance(x, Fraction):
                x = mpmath.mpf(x.numerator) / x.denominator
            return mpmath.root(x, n)

        return float(root(total) - root(s_n) - root(s_0))


def check_bm_superadditivity(model, alpha, beta, tol: float | None = None, _sequence=None) -> BMReport:
    """``vol(a+b)^(1/n)`` against ``vol(a)^(1/n) + vol(b)^(1/n)``.

    No n-th root enters the decision: equality holds iff every power-chain
    defect vanishes.  The binomial identity ``vol(a+b) = sum C(n,k) s_k`` is
    reported separately, and a 50-digit evaluation of the root gap is
    attached as an independent cross-check.
    """
    _require_nef_big(model, alpha, beta)
    s = model_sequence(model, alpha, beta) if _sequence is None else _sequence
    n = s.n
    total = model_volume_of_sum(model, alpha, beta)
    binomial = sum(comb(n, k) * s[k] for k in range(n + 1))
    ineq = check_inequalities(s, tol)
    return BMReport(
        volume_sum=total,
        binomial_sum=binomial,
        identity_defect=total - binomial,
        equality=ineq.equality_2,
        root_gap=_root_gap(total, s[n], s[0], n),
        approximate=ineq.approximate,
    )


# ---------------------------------------------------------------------------
# proportionality


def proportional_ratio(u: Sequence, v: Sequence, tol: float | None = None):
    """``c > 0`` with ``v = c * u`` coordinatewise, else None.

    Exact mode compares all cross products ``u_i v_j = u_j v_i`` and requires
    identical supports.
    """
    if len(u) != len(v):
        raise ContractError("vectors of different lengths")
    tol = _tolerance_for(*u, *v, tol=tol)
    if tol is None:
        if [x == 0 for x in u] != [y == 0 for y in v]:
            return None
        support = [i for i, x in enumerate(u) if x != 0]
        if not support:
            return None
        i0 = support[0]
        c = Fraction(v[i0]) / Fraction(u[i0])
        if c <= 0:
            return None
        for j in support[1:]:
            if u[i0] * v[j] != u[j] * v[i0]:
                return None
        return c
    scale_u = max(abs(x) for x in u)
    scale_v = max(abs(y) for y in v)
    if scale_u == 0 or scale_v == 0:
        return None
    i0 = max(range(len(u)), key=lambda i: abs(u[i]))
    c = v[i0] / u[i0]
    if c <= 0:
        return None
    for x, y in zip(u, v):
        if abs(y - c * x) > tol * scale_v:
            return None
    return c


def proportionality_check(model, alpha, beta, tol: float | None = None):
    """Scale ``c`` with ``beta = c * alpha`` (ring) or ``beta = c * alpha + v`` (polytopes)."""
    if isinstance(model, PolytopeModel):
        witness = homothety_check(alpha, beta).witness
        return None if witness is None else witness.scale
    return proportional_ratio(alpha.coords, beta.coords, tol)


def power_functional(model, alpha: ClassVector) -> tuple:
    """The functional ``gamma -> alpha^(n-1) . gamma`` on the basis classes."""
    oracle = getattr(model, "oracle", model)
    h = oracle.basis_dim
    if alpha.basis_dim != h:
        raise ContractError(f"class of dimension {alpha.basis_dim} does not match basis_dim={h}")
    n = oracle.n
    return tuple(
        oracle.evaluate([alpha] * (n - 1) + [ClassVector.basis(h, a)]) for a in range(h)
    )


def _power_images_ratio(model, alpha, beta, tol):
    """Ratio of the (n-1)-power images, or None when they are not proportional."""
    if isinstance(model, PolytopeModel):
        return surface_area_measure(alpha).ratio_to(surface_area_measure(beta))
    return proportional_ratio(power_functional(model, alpha), power_functional(model, beta), tol)


# ---------------------------------------------------------------------------
# the six statements


STATEMENTS = (
    "(1) s_k^2 = s_{k-1} s_{k+1} for 1 <= k <= n-1",
    "(2) s_k^n = s_0^{n-k} s_n^k for 0 <= k <= n",
    "(3) s_{n-1}^n = s_0 s_n^{n-1}",
    "(4) vol(a+b)^{1/n} = vol(a)^{1/n} + vol(b)^{1/n}",
    "(5) a and b are proportional",
    "(6) a^{n-1} and b^{n-1} are proportional",
)


@dataclass(frozen=True)
class StatementStatus:
    label: str
    holds: bool
    defect: object = None
    detail: str = ""


@dataclass(frozen=True)
class EquivalenceReport:
    model: str
    n: int
    s: tuple
    statuses: tuple[StatementStatus, ...]
    consistent: bool
    approximate: bool = False
    inequalities: InequalityReport | None = field(default=None, compare=False, repr=False)
    bm: BMReport | None = field(default=None, compare=False, repr=False)

    @property
    def all_hold(self) -> bool:
        return all(st.holds for st in self.statuses)

    @property
    def all_fail(self) -> bool:
        return not any(st.holds for st in self.statuses)

    @property
    def status_vector(self) -> tuple[bool, ...]:
        return tuple(st.holds for st in self.statuses)


def equivalence_report(model, alpha, beta, tol: float | None = None) -> EquivalenceReport:
    """Evaluate the six equivalent statements for a nef and big pair."""
    _require_nef_big(model, alpha, beta)
    s = model_sequence(model, alpha, beta)
    ineq = check_inequalities(s, tol)
    tol = tol if tol is not None else (DEFAULT_TOLERANCE if ineq.approximate else None)
    bm = check_bm_superadditivity(model, alpha, beta, tol, _sequence=s)
    scale = proportionality_check(model, alpha, beta, tol)
    power_ratio = _power_images_ratio(model, alpha, beta, tol)

    lc_defect = max(ineq.log_concavity_defects, default=0)
    pc_defect = max(ineq.power_chain_defects, default=0)
    statuses = (
        StatementStatus(STATEMENTS[0], ineq.equality_1, lc_defect, "largest log-concavity defect"),
        StatementStatus(STATEMENTS[1], ineq.equality_2, pc_defect, "largest power-chain defect"),
        StatementStatus(STATEMENTS[2], ineq.equality_3, ineq.extreme_defect, "extreme-index defect"),
        StatementStatus(STATEMENTS[3], bm.equality, bm.root_gap, "root gap (50-digit evaluation)"),
        StatementStatus(
            STATEMENTS[4], scale is not None, scale,
            "scale factor" if scale is not None else "not proportional",
        ),
        StatementStatus(
            STATEMENTS[5], power_ratio is not None, power_ratio,
            "ratio of (n-1)-power images" if power_ratio is not None else "images not proportional",
        ),
    )
    holds = {st.holds for st in statuses}
    return EquivalenceReport(
        model=model.describe(),
        n=s.n,
        s=s.s,
        statuses=statuses,
        consistent=len(holds) == 1,
        approximate=ineq.approximate,
        inequalities=ineq,
        bm=bm,
    )


# ---------------------------------------------------------------------------
# injectivity of the (n-1)-power map


@dataclass(frozen=True)
class ScanReport:
    model: str
    samples: int
    seed: int
    proportional_pairs: int
    parallel_images: int
    counterexamples: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.counterexamples


SCALES = (Fraction(1, 2), Fraction(2), Fraction(3), Fraction(5, 3))


def random_polytope(rng: random.Random, dim: int, max_points: int = 12, box: int = 8) -> Polytope:
    """Hull of at most ``max_points`` random integer points in ``[0, box]^dim``, full-dimensional."""
    while True:
        count = rng.randint(dim + 1, max_points)
        P = Polytope(tuple(rng.randint(0, box) for _ in range(dim)) for _ in range(count))
        if P.is_full_dimensional:
            return P


def random_class(rng: random.Random, basis_dim: int, low: int = 1, high: int = 10) -> ClassVector:
    return ClassVector(tuple(rng.randint(low, high) for _ in range(basis_dim)))


def sample_pairs(model, count: int, seed: int):
    """Seeded sample of nef and big pairs, every other one proportional."""
    rng = random.Random(seed)
    pairs = []
    for i in range(count):
        if isinstance(model, PolytopeModel):
            a = random_polytope(rng, model.dim)
            if i % 2:
                shift = tuple(rng.randint(-3, 3) for _ in range(model.dim))
                b = a.scaled(rng.choice(SCALES)).translated(shift)
            else:
                b = random_polytope(rng, model.dim)
        else:
            a = random_class(rng, model.basis_dim)
            b = a.scaled(rng.choice(SCALES)) if i % 2 else random_class(rng, model.basis_dim)
        pairs.append((a, b))
    return pairs


def power_map_injectivity_scan(model, sample_count: int = 100, seed: int = 0) -> ScanReport:
    """Check ``images of the (n-1)-power map parallel <=> classes parallel`` on samples."""
    proportional = parallel = 0
    bad = []
    for a, b in sample_pairs(model, sample_count, seed):
        same = proportionality_check(model, a, b) is not None
        images = _power_images_ratio(model, a, b, None) is not None
        proportional += same
        parallel += images
        if same != images:
            bad.append((a, b))
    return ScanReport(
        model=model.describe(),
        samples=sample_count,
        seed=seed,
        proportional_pairs=proportional,
        parallel_images=parallel,
        counterexamples=tuple(bad),
    )
