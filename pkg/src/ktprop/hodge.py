"""Pointwise linear algebra of (1,1)-forms, and exact Hodge-Riemann signatures.

A positive (1,1)-form at a point is a positive definite Hermitian matrix;
its (n-1)-st wedge power corresponds to the adjugate.  These routines are
floating point with fixed tolerances.  The Gram-matrix signature lives on
the algebraic side and is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ContractError, InequalityViolation, PreconditionError
from .intersection import ClassVector, IntersectionOracle

IDENTITY_RTOL = 1e-10
INEQUALITY_SLACK = 1e-12
PD_FLOOR = 1e-12

__all__ = [
    "AMGMResult",
    "GramSignature",
    "HermitianForm",
    "adjugate",
    "amgm_bound",
    "check_power_det_identity",
    "discriminant_inequality",
    "gram_matrix",
    "gram_signature",
    "recover_from_adjugate",
    "symmetric_inertia",
]


class HermitianForm:
    """An ``n x n`` Hermitian matrix."""

    def __init__(self, entries, check: bool = True):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ContractError(f"expected a square matrix, got shape {a.shape}")
        if check:
            scale = max(np.abs(a).max(), 1.0)
            if np.abs(a - a.conj().T).max() > IDENTITY_RTOL * scale:
                raise ContractError("matrix is not Hermitian")
        self.entries = (a + a.conj().T) / 2

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def diag(cls, values) -> "HermitianForm":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def identity(cls, n: int) -> "HermitianForm":
        return cls(np.eye(n))

    def det(self) -> float:
        return float(np.linalg.det(self.entries).real)

    def leading_minors(self) -> list[float]:
        return [float(np.linalg.det(self.entries[:k, :k]).real) for k in range(1, self.dim + 1)]

    def is_positive_definite(self) -> bool:
        scale = max(np.abs(self.entries).max(), 1.0)
        return all(m > PD_FLOOR * scale**k for k, m in enumerate(self.leading_minors(), start=1))

    def is_positive_semidefinite(self) -> bool:
        scale = max(np.abs(self.entries).max(), 1.0)
        return float(np.linalg.eigvalsh(self.entries).min()) >= -PD_FLOOR * scale

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __add__(self, other: "HermitianForm") -> "HermitianForm":
        return HermitianForm(self.entries + other.entries, check=False)

    def __repr__(self):
        return f"HermitianForm({self.entries!r})"


def _require_pd(name: str, A: HermitianForm) -> None:
    if not A.is_positive_definite():
        raise PreconditionError(f"{name} is not positive definite (leading minors {A.leading_minors()})")


def adjugate(A: HermitianForm) -> HermitianForm:
    """Cofactor transpose, valid for singular input as well."""
    n = A.dim
    if n < 2:
        raise ContractError("adjugate needs dimension >= 2")
    a = A.entries
    out = np.empty_like(a)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(a, j, axis=0), i, axis=1)
            out[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return HermitianForm(out, check=False)


def check_power_det_identity(A: HermitianForm, B: HermitianForm) -> float:
    """Relative residual of ``det adj A / det adj B = (det A / det B)^(n-1)``."""
    if A.dim != B.dim:
        raise ContractError("forms of different dimensions")
    _require_pd("A", A)
    _require_pd("B", B)
    n = A.dim
    lhs = adjugate(A).det() / adjugate(B).det()
    rhs = (A.det() / B.det()) ** (n - 1)
    return abs(lhs - rhs) / abs(rhs)


@dataclass(frozen=True)
class AMGMResult:
    """Both sides of the bound for ``M`` and a perturbation ``T``.

    Equality alone only says ``T`` is a multiple of ``M``.  With the
    normalization ``rhs = 1`` (trace-free ``M^{-1} T``) it forces ``T = 0``.
    """

    lhs: float         # (det(M + T) / det M)^(1/n)
    rhs: float         # 1 + tr(M^{-1} T) / n
    equality: bool     # rhs - lhs within the inequality slack
    theta_ratio: float  # |T| / |M|, Frobenius norms

    @property
    def normalized(self) -> bool:
        return abs(self.rhs - 1.0) <= INEQUALITY_SLACK

    @property
    def forced(self) -> bool:
        """False only if ``lhs = rhs = 1`` while ``T`` is not negligible."""
        return not (self.equality and self.normalized) or self.theta_ratio <= IDENTITY_RTOL


def amgm_bound(M: HermitianForm, theta: HermitianForm) -> AMGMResult:
    """Arithmetic-geometric mean bound on the eigenvalues of ``M^{-1}(M + T)``.

    Raises :class:`InequalityViolation` if ``lhs > rhs + 1e-12``.
    """
    if M.dim != theta.dim:
        raise ContractError("forms of different dimensions")
    _require_pd("M", M)
    total = M + theta
    if not total.is_positive_semidefinite():
        raise PreconditionError("M + theta is not positive semidefinite")
    n = M.dim
    # Generalized eigenvalues of (M + T, M) are real and >= 0; work with them directly.
    chol = np.linalg.cholesky(M.entries)
    inv_chol = np.linalg.inv(chol)
    scaled = inv_chol @ theta.entries @ inv_chol.conj().T
    eig = np.linalg.eigvalsh((scaled + scaled.conj().T) / 2)
    ratios = np.clip(1.0 + eig, 0.0, None)
    lhs = float(np.prod(ratios) ** (1.0 / n))
    rhs = float(1.0 + eig.sum() / n)
    if lhs > rhs + INEQUALITY_SLACK:
        raise InequalityViolation(f"AM-GM bound violated: lhs={lhs!r} > rhs={rhs!r}")
    return AMGMResult(
        lhs=lhs,
        rhs=rhs,
        equality=rhs - lhs <= INEQUALITY_SLACK,
        theta_ratio=theta.norm() / M.norm(),
    )


def recover_from_adjugate(M: HermitianForm) -> HermitianForm:
    """The positive definite ``A`` with ``adj A = M``.

    ``det A = (det M)^(1/(n-1))`` and ``A = det(A) M^{-1}``.
    """
    n = M.dim
    if n < 2:
        raise ContractError("recovery needs dimension >= 2")
    _require_pd("M", M)
    det_a = M.det() ** (1.0 / (n - 1))
    return HermitianForm(det_a * np.linalg.inv(M.entries), check=False)


# ---------------------------------------------------------------------------
# exact Gram matrices


@dataclass(frozen=True)
class GramSignature:
    positives: int
    negatives: int
    zeros: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positives, self.negatives, self.zeros)


def symmetric_inertia(matrix: Sequence[Sequence]) -> GramSignature:
    """Inertia of a rational symmetric matrix by exact congruence elimination.

    A zero diagonal with a nonzero off-diagonal entry ``a_ij`` is repaired by
    the congruence ``row_i += row_j, col_i += col_j``, which puts ``2 a_ij``
    (plus the old diagonals, both zero) on the diagonal.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    for row in a:
        if len(row) != n:
            raise ContractError("Gram matrix is not square")
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ContractError("Gram matrix is not symmetric")
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / p
            if f:
                for k in active:
                    a[i][k] -= f * a[piv][k]
            a[i][piv] = Fraction(0)
        for k in active:
            a[piv][k] = Fraction(0)
    return GramSignature(pos, neg, n - pos - neg)


def _oracle(model) -> IntersectionOracle:
    return getattr(model, "oracle", model)


def gram_matrix(model, kahler_classes: Sequence[ClassVector], basis: Sequence[ClassVector] | None = None):
    """``Q_ab = e_a . e_b . w_1 ... w_{n-2}`` on the given basis."""
    oracle = _oracle(model)
    h = oracle.basis_dim
    if len(kahler_classes) != oracle.n - 2:
        raise ContractError(f"need {oracle.n - 2} Kahler classes, got {len(kahler_classes)}")
    if basis is None:
        basis = [ClassVector.basis(h, a) for a in range(h)]
    ws = list(kahler_classes)
    return [[oracle.evaluate([ea, eb] + ws) for eb in basis] for ea in basis]


def gram_signature(
    model,
    basis: Sequence[ClassVector] | None = None,
    kahler_classes: Sequence[ClassVector] = (),
) -> GramSignature:
    """Exact inertia of the Hodge-Riemann form ``Q``.

    Expected ``(1, h-1, 0)`` for Kahler ``w_i`` on a nondegenerate model;
    a degenerate Gram matrix shows up as ``zeros > 0``.
    """
    if basis is not None and len(basis) != _oracle(model).basis_dim:
        raise ContractError("basis must have basis_dim elements")
    for w in kahler_classes:
        if not all(c > 0 for c in w.coords):
            raise PreconditionError(f"Kahler class {w.coords} is not strictly positive")
    return symmetric_inertia(gram_matrix(model, kahler_classes, basis))


def discriminant_inequality(model, alpha: ClassVector, beta: ClassVector, kahler_classes: Sequence[ClassVector]):
    """``Q(a,b)^2 - Q(a,a) Q(b,b)``, non-negative for nef ``a, b``."""
    oracle = _oracle(model)
    ws = list(kahler_classes)
    if len(ws) != oracle.n - 2:
        raise ContractError(f"need {oracle.n - 2} classes for the form, got {len(ws)}")

    def q(x, y):
        return oracle.evaluate([x, y] + ws)

    return q(alpha, beta) ** 2 - q(alpha, alpha) * q(beta, beta)
