"""Intersection numbers of (1,1)-classes on computable models.

Two concrete oracles are provided: products of projective spaces, where
``H_1^{n_1} ... H_m^{n_m} = 1`` and every other top monomial vanishes, and
user-supplied tables of top intersection numbers.  Both evaluate the
symmetric multilinear form exactly when their data is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Mapping, Sequence

from ._exact import to_fraction
from .errors import ContractError

__all__ = [
    "ClassVector",
    "ConeMembership",
    "IntersectionOracle",
    "KTSequence",
    "MultiProjModel",
    "MultiProjOracle",
    "TableModel",
    "TableOracle",
    "cone_membership",
    "eval_product",
    "kt_sequence",
    "make_multiproj_oracle",
]


def _coerce(value):
    if isinstance(value, float):
        return value
    return to_fraction(value)


@dataclass(frozen=True)
class ClassVector:
    """Coordinates of a class in a fixed basis of the class space.

    Coordinates are exact rationals; floats are kept as floats and mark the
    vector as approximate.
    """

    coords: tuple

    def __post_init__(self):
        coords = tuple(_coerce(c) for c in self.coords)
        if not coords:
            raise ContractError("a class vector needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def basis_dim(self) -> int:
        return len(self.coords)

    @property
    def exact(self) -> bool:
        return not any(isinstance(c, float) for c in self.coords)

    def __add__(self, other: "ClassVector") -> "ClassVector":
        _check_same_dim(self, other)
        return ClassVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scaled(self, c) -> "ClassVector":
        c = _coerce(c)
        return ClassVector(tuple(c * a for a in self.coords))

    @classmethod
    def basis(cls, dim: int, index: int) -> "ClassVector":
        return cls(tuple(1 if i == index else 0 for i in range(dim)))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def _check_same_dim(*vectors: ClassVector) -> None:
    dims = {v.basis_dim for v in vectors}
    if len(dims) > 1:
        raise ContractError(f"class vectors have mismatched dimensions {sorted(dims)}")


@dataclass(frozen=True)
class KTSequence:
    """The numbers ``s_k = a^k . b^(n-k)`` for ``k = 0..n``."""

    n: int
    s: tuple

    def __post_init__(self):
        if len(self.s) != self.n + 1:
            raise ContractError(f"a sequence for n={self.n} needs {self.n + 1} terms, got {len(self.s)}")
        object.__setattr__(self, "s", tuple(_coerce(x) for x in self.s))

    def __getitem__(self, k):
        return self.s[k]

    def __len__(self):
        return len(self.s)

    def __iter__(self):
        return iter(self.s)

    def reversed(self) -> "KTSequence":
        return KTSequence(self.n, tuple(reversed(self.s)))

    @property
    def exact(self) -> bool:
        return not any(isinstance(x, float) for x in self.s)


class IntersectionOracle:
    """Symmetric multilinear form on ``basis_dim``-dimensional class space.

    Subclasses implement :meth:`_evaluate` on ``n`` coordinate tuples.
    """

    n: int
    basis_dim: int

    @property
    def exact(self) -> bool:
        return True

    def evaluate(self, classes: Sequence[ClassVector]):
        classes = list(classes)
        if len(classes) != self.n:
            raise ContractError(f"expected {self.n} classes, got {len(classes)}")
        for c in classes:
            if c.basis_dim != self.basis_dim:
                raise ContractError(
                    f"class of dimension {c.basis_dim} does not match basis_dim={self.basis_dim}"
                )
        return self._evaluate([c.coords for c in classes])

    def _evaluate(self, coords: list[tuple]):
        raise NotImplementedError

    def __call__(self, *classes: ClassVector):
        return self.evaluate(classes)


class MultiProjOracle(IntersectionOracle):
    """Intersection form of ``P^{n_1} x ... x P^{n_m}`` on the hyperplane pullbacks."""

    def __init__(self, factor_dims: Sequence[int]):
        self.factor_dims = tuple(factor_dims)
        self.n = sum(self.factor_dims)
        self.basis_dim = len(self.factor_dims)

    def _evaluate(self, coords):
        # Dynamic programme over arguments; state = how many arguments went to each factor.
        dims = self.factor_dims
        states = {tuple(0 for _ in dims): Fraction(1)}
        for vec in coords:
            nxt: dict = {}
            for counts, value in states.items():
                for f, a in enumerate(vec):
                    if a == 0 or counts[f] == dims[f]:
                        continue
                    key = counts[:f] + (counts[f] + 1,) + counts[f + 1:]
                    nxt[key] = nxt.get(key, 0) + value * a
            states = nxt
        return states.get(dims, Fraction(0))

    def __repr__(self):
        return f"MultiProjOracle({self.factor_dims})"


class TableOracle(IntersectionOracle):
    """Form given by a table of top intersection numbers of basis classes.

    ``values`` maps exponent vectors ``(k_1, ..., k_h)`` with ``sum k = n``
    to ``e_1^{k_1} ... e_h^{k_h}``; missing monomials are zero.
    """

    def __init__(self, n: int, basis_dim: int, values: Mapping[tuple, object]):
        self.n = n
        self.basis_dim = basis_dim
        table = {}
        for key, value in values.items():
            key = tuple(int(k) for k in key)
            if len(key) != basis_dim or sum(key) != n or min(key) < 0:
                raise ContractError(f"bad exponent vector {key} for n={n}, basis_dim={basis_dim}")
            table[key] = _coerce(value)
        self.values = table

    @classmethod
    def from_entries(
        cls,
        n: int,
        basis_dim: int,
        entries: Iterable[tuple[Sequence[int], object]],
        tolerance: float = 1e-9,
    ) -> "TableOracle":
        """Build from ordered index tuples ``(i_1..i_n) -> value`` (0-based).

        Several orderings of the same monomial may be listed; they must agree
        exactly (rational data) or to relative ``tolerance`` (float data),
        and are then averaged.  Unlisted orderings are filled by symmetry.
        """
        groups: dict[tuple, list] = {}
        for idx, value in entries:
            idx = tuple(int(i) for i in idx)
            if len(idx) != n:
                raise ContractError(f"entry {idx} does not have {n} indices")
            if any(i < 0 or i >= basis_dim for i in idx):
                raise ContractError(f"entry {idx} has an index outside 0..{basis_dim - 1}")
            exps = tuple(idx.count(a) for a in range(basis_dim))
            groups.setdefault(exps, []).append(_coerce(value))
        values = {}
        for exps, vals in groups.items():
            if any(isinstance(v, float) for v in vals):
                lo, hi = min(vals), max(vals)
                scale = max(abs(lo), abs(hi), 1e-300)
                if hi - lo > tolerance * scale:
                    raise ContractError(f"table is not symmetric at monomial {exps}: {vals}")
                values[exps] = float(sum(vals)) / len(vals)
            else:
                if len(set(vals)) > 1:
                    raise ContractError(f"table is not symmetric at monomial {exps}: {vals}")
                values[exps] = vals[0]
        return cls(n, basis_dim, values)

    @property
    def exact(self) -> bool:
        return not any(isinstance(v, float) for v in self.values.values())

    def _evaluate(self, coords):
        h = self.basis_dim
        states = {tuple(0 for _ in range(h)): 1}
        for vec in coords:
            nxt: dict = {}
            for exps, value in states.items():
                for a, x in enumerate(vec):
                    if x == 0:
                        continue
                    key = exps[:a] + (exps[a] + 1,) + exps[a + 1:]
                    nxt[key] = nxt.get(key, 0) + value * x
            states = nxt
        total = Fraction(0) if self.exact else 0.0
        for exps, weight in states.items():
            v = self.values.get(exps)
            if v is not None:
                total += weight * v
        return total


@dataclass(frozen=True)
class MultiProjModel:
    """Product of projective spaces ``P^{n_1} x ... x P^{n_m}``."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(x) for x in self.factor_dims)
        if not dims or min(dims) < 1:
            raise ContractError(f"factor dimensions must be positive, got {self.factor_dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def n(self) -> int:
        return sum(self.factor_dims)

    @property
    def basis_dim(self) -> int:
        return len(self.factor_dims)

    @cached_property
    def oracle(self) -> MultiProjOracle:
        return MultiProjOracle(self.factor_dims)

    def describe(self) -> str:
        return " x ".join(f"P^{k}" for k in self.factor_dims)


@dataclass(frozen=True)
class TableModel:
    """A user-supplied intersection table; cone membership is not decidable here."""

    oracle: TableOracle

    @property
    def n(self) -> int:
        return self.oracle.n

    @property
    def basis_dim(self) -> int:
        return self.oracle.basis_dim

    def describe(self) -> str:
        return f"table(n={self.n}, basis_dim={self.basis_dim})"


def make_multiproj_oracle(model: MultiProjModel | Sequence[int]) -> MultiProjOracle:
    if not isinstance(model, MultiProjModel):
        model = MultiProjModel(tuple(model))
    return model.oracle


def eval_product(oracle: IntersectionOracle, classes: Sequence[ClassVector]):
    """Exact value of the multilinear form on ``oracle.n`` classes."""
    return oracle.evaluate(classes)


def kt_sequence(oracle, alpha: ClassVector, beta: ClassVector) -> KTSequence:
    """``s_k = alpha^k . beta^(n-k)`` for ``k = 0..n``."""
    oracle = getattr(oracle, "oracle", oracle)
    _check_same_dim(alpha, beta)
    n = oracle.n
    return KTSequence(n, tuple(oracle.evaluate([alpha] * k + [beta] * (n - k)) for k in range(n + 1)))


def multinomial_sequence(model: MultiProjModel, alpha: ClassVector, beta: ClassVector) -> KTSequence:
    """Closed-form ``s_k`` on a product of projective spaces.

    ``s_k = sum_{k_1+..+k_m = k} k!/prod k_i! * (n-k)!/prod (n_i-k_i)! * prod a_i^{k_i} b_i^{n_i-k_i}``
    """
    dims = model.factor_dims
    n = model.n
    out = []
    for k in range(n + 1):
        total = Fraction(0)
        for split in _compositions(k, dims):
            coeff = Fraction(factorial(k), 1)
            coeff *= factorial(n - k)
            term = Fraction(1)
            for ki, ni, a, b in zip(split, dims, alpha.coords, beta.coords):
                coeff /= factorial(ki) * factorial(ni - ki)
                term *= Fraction(a) ** ki * Fraction(b) ** (ni - ki)
            total += coeff * term
        out.append(total)
    return KTSequence(n, tuple(out))


def _compositions(total: int, caps: Sequence[int]):
    if not caps:
        if total == 0:
            yield ()
        return
    for first in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - first, caps[1:]):
            yield (first,) + rest


@dataclass(frozen=True)
class ConeMembership:
    is_nef: bool
    is_big: bool


def cone_membership(model: MultiProjModel, alpha: ClassVector) -> ConeMembership:
    """Nef and big tests on a product of projective spaces.

    There the nef and pseudo-effective cones are both the closed positive
    orthant, so nef means all coordinates are ``>= 0`` and big means all
    are ``> 0``.
    """
    if alpha.basis_dim != model.basis_dim:
        raise ContractError(
            f"class of dimension {alpha.basis_dim} does not match basis_dim={model.basis_dim}"
        )
    nef = all(c >= 0 for c in alpha.coords)
    big = all(c > 0 for c in alpha.coords)
    return ConeMembership(is_nef=nef, is_big=big)
