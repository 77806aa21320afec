"""Desk-scale property suites run by ``ktprop selftest``.

Each suite yields cases from smallest to largest, so the first failure
reported is the smallest failing instance generated for that seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterator

import numpy as np

from ._exact import format_fraction
from .analysis import (
    PolytopeModel,
    check_inequalities,
    equivalence_report,
    power_map_injectivity_scan,
    random_class,
    random_polytope,
)
from .errors import InequalityViolation
from .hodge import HermitianForm, adjugate, amgm_bound, gram_signature, recover_from_adjugate
from .intersection import ClassVector, MultiProjModel, kt_sequence
from .polytope import minkowski_sum, mixed_volume_polarization, mixed_volume_sequence


@dataclass
class Case:
    ok: bool
    instance: dict


Suite = Callable[[int], Iterator[Case]]


def _poly_json(P) -> list:
    return [[format_fraction(x) for x in v] for v in P.vertices]


def _poly_pairs(seed: int, dims=(2, 3), per_dim: int = 3):
    rng = random.Random(seed)
    for d in dims:
        for _ in range(per_dim):
            yield random_polytope(rng, d, max_points=d + 3), random_polytope(rng, d, max_points=d + 3)


def oracle_equivalence(seed: int) -> Iterator[Case]:
    for P, Q in _poly_pairs(seed):
        s = mixed_volume_sequence(P, Q)
        n = P.dim
        pol = [mixed_volume_polarization([P] * k + [Q] * (n - k)) for k in range(n + 1)]
        yield Case(list(s.s) == pol, {"P": _poly_json(P), "Q": _poly_json(Q)})


def alexandrov_fenchel(seed: int) -> Iterator[Case]:
    for P, Q in _poly_pairs(seed + 1):
        r = check_inequalities(mixed_volume_sequence(P, Q))
        ok = r.log_concave and r.power_chain_holds and r.ratio_chain_holds
        yield Case(ok, {"P": _poly_json(P), "Q": _poly_json(Q)})
    rng = random.Random(seed)
    for dims in ((1, 1), (1, 1, 1), (2, 1)):
        model = MultiProjModel(dims)
        for _ in range(5):
            a, b = random_class(rng, model.basis_dim), random_class(rng, model.basis_dim)
            r = check_inequalities(kt_sequence(model.oracle, a, b))
            ok = r.log_concave and r.power_chain_holds and r.ratio_chain_holds
            yield Case(ok, {"model": list(dims), "alpha": [str(x) for x in a], "beta": [str(x) for x in b]})


def binomial_identity(seed: int) -> Iterator[Case]:
    for P, Q in _poly_pairs(seed + 2, per_dim=2):
        s = mixed_volume_sequence(P, Q)
        n = P.dim
        ok = minkowski_sum(P, Q).volume == sum(comb(n, k) * s[k] for k in range(n + 1))
        yield Case(ok, {"P": _poly_json(P), "Q": _poly_json(Q)})


def equivalence_consistency(seed: int) -> Iterator[Case]:
    rng = random.Random(seed)
    for dims in ((1, 1), (1, 1, 1), (2, 1)):
        model = MultiProjModel(dims)
        for i in range(4):
            a = random_class(rng, model.basis_dim)
            b = a.scaled(Fraction(3, 2)) if i % 2 else random_class(rng, model.basis_dim)
            r = equivalence_report(model, a, b)
            yield Case(r.consistent, {"model": list(dims), "alpha": [str(x) for x in a], "beta": [str(x) for x in b]})
    for P, Q in _poly_pairs(seed + 3, per_dim=2):
        for other in (Q, P.scaled(Fraction(1, 2)).translated([1] * P.dim)):
            r = equivalence_report(PolytopeModel(P.dim), P, other)
            yield Case(r.consistent, {"P": _poly_json(P), "Q": _poly_json(other)})


def _random_pd(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(x)
    eig = rng.uniform(0.5, 4.0, n)
    return (q * eig) @ q.conj().T


def hermitian_identities(seed: int) -> Iterator[Case]:
    rng = np.random.default_rng(seed)
    for n in range(2, 7):
        for _ in range(20):
            a = HermitianForm(_random_pd(rng, n))
            adj = adjugate(a).entries
            det = a.det()
            scale = np.abs(det) * n
            err1 = np.abs(adj @ a.entries - det * np.eye(n)).max() / scale
            err2 = abs(np.linalg.det(adj).real - det ** (n - 1)) / abs(det ** (n - 1))
            back = recover_from_adjugate(adjugate(a)).entries
            err3 = np.abs(back - a.entries).max() / np.abs(a.entries).max()
            ok = max(err1, err2, err3) <= 1e-10
            yield Case(ok, {"dim": n, "matrix": _matrix_json(a.entries)})


def amgm_draws(seed: int) -> Iterator[Case]:
    rng = np.random.default_rng(seed)
    for n in range(2, 7):
        for i in range(20):
            m = _random_pd(rng, n)
            if i % 5 == 0:
                theta = np.zeros((n, n))
            else:
                theta = _random_pd(rng, n) - rng.uniform(0.0, 0.45) * m
            try:
                r = amgm_bound(HermitianForm(m), HermitianForm(theta))
                ok = not r.equality or r.theta_ratio <= 1e-10
            except InequalityViolation:
                ok = False
            yield Case(ok, {"dim": n, "M": _matrix_json(m), "theta": _matrix_json(theta)})


def signature_scan(seed: int) -> Iterator[Case]:
    rng = random.Random(seed)
    for dims in ((2,), (1, 1), (1, 1, 1), (2, 1), (1, 1, 1, 1)):
        model = MultiProjModel(dims)
        for _ in range(3):
            ws = [random_class(rng, model.basis_dim) for _ in range(model.n - 2)]
            sig = gram_signature(model, kahler_classes=ws)
            yield Case(sig.positives == 1, {"model": list(dims), "kahler": [[str(x) for x in w] for w in ws]})


def injectivity(seed: int) -> Iterator[Case]:
    for model in (MultiProjModel((1, 1, 1)), MultiProjModel((2, 1)), PolytopeModel(2)):
        r = power_map_injectivity_scan(model, 10, seed)
        yield Case(r.ok, {"model": r.model, "seed": seed, "counterexamples": len(r.counterexamples)})


def _matrix_json(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a, dtype=complex)]


SUITES: dict[str, Suite] = {
    "oracle-equivalence": oracle_equivalence,
    "alexandrov-fenchel": alexandrov_fenchel,
    "binomial-identity": binomial_identity,
    "equivalence-consistency": equivalence_consistency,
    "hermitian-identities": hermitian_identities,
    "amgm-draws": amgm_draws,
    "signature-scan": signature_scan,
    "injectivity-scan": injectivity,
}


def selftest(seed: int = 42, suites: dict[str, Suite] | None = None, out=None) -> int:
    """Run the suites and print one summary line each; return the exit status."""
    import sys

    out = out or sys.stdout
    suites = SUITES if suites is None else suites
    failed = False
    for name, suite in suites.items():
        count = 0
        failure = None
        for case in suite(seed):
            count += 1
            if not case.ok:
                failure = case
                break
        if failure is None:
            print(f"{name}: PASS ({count} cases)", file=out)
        else:
            failed = True
            print(f"{name}: FAIL at case {count}", file=out)
            print("  counterexample: " + json.dumps(failure.instance, sort_keys=True), file=out)
    print(f"selftest seed={seed}: {'FAIL' if failed else 'PASS'}", file=out)
    return 2 if failed else 0
