"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed even without ``-s``.  Wall-clock budgets are reported on each
line but do not fail the run, since they depend on the host.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np
import pytest

from ktprop import (
    ClassVector,
    HermitianForm,
    InequalityViolation,
    MultiProjModel,
    PolytopeModel,
    adjugate,
    amgm_bound,
    check_inequalities,
    discriminant_inequality,
    equivalence_report,
    gram_signature,
    kt_sequence,
    minkowski_sum,
    mixed_volume_polarization,
    mixed_volume_sequence,
    power_map_injectivity_scan,
    recover_from_adjugate,
)
from ktprop.analysis import random_class, random_polytope

ROOT = Path(__file__).resolve().parents[1]
CORPUS_SEED = 20240611
PAIRS_PER_DIM = 50
RING_MODELS = ((1, 1), (1, 1, 1), (2, 1))


def announce(capsys, number, title, ok, detail, elapsed, budget):
    status = "PASS" if ok else "FAIL"
    timing = f"{elapsed:.1f}s / budget {budget}s" + ("  OVER BUDGET" if elapsed > budget else "")
    with capsys.disabled():
        print(f"\n[criterion {number}] {status}  {title}: {detail} ({timing})")


def _rational_polytope(rng, d):
    P = random_polytope(rng, d)
    q = rng.randint(1, 3)
    shift = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(d)]
    return P.scaled(Fraction(1, q)).translated(shift)


@pytest.fixture(scope="module")
def polytope_pairs():
    rng = random.Random(CORPUS_SEED)
    return {d: [(_rational_polytope(rng, d), _rational_polytope(rng, d)) for _ in range(PAIRS_PER_DIM)]
            for d in (2, 3, 4)}


@pytest.fixture(scope="module")
def ring_pairs():
    rng = random.Random(CORPUS_SEED + 1)
    out = {}
    for dims in RING_MODELS:
        m = MultiProjModel(dims)
        out[dims] = [(random_class(rng, m.basis_dim), random_class(rng, m.basis_dim)) for _ in range(200)]
    return out


@pytest.fixture(scope="module")
def sequences():
    """Filled by criterion 1, reused by 2 and 3."""
    return {}


def test_criterion_1_oracle_equivalence(capsys, polytope_pairs, sequences):
    start = time.perf_counter()
    mismatches = 0
    for d, pairs in polytope_pairs.items():
        for P, Q in pairs:
            s = mixed_volume_sequence(P, Q)
            pol = tuple(mixed_volume_polarization([P] * k + [Q] * (d - k)) for k in range(d + 1))
            mismatches += s.s != pol
            sequences[(P, Q)] = s
    elapsed = time.perf_counter() - start
    ok = mismatches == 0
    announce(capsys, 1, "interpolation == polarization", ok,
             f"{3 * PAIRS_PER_DIM} pairs in dims 2-4, {mismatches} mismatches", elapsed, 30)
    assert ok


def _corpus_sequences(polytope_pairs, ring_pairs, sequences):
    for pairs in polytope_pairs.values():
        for P, Q in pairs:
            yield sequences.get((P, Q)) or mixed_volume_sequence(P, Q)
    for dims, pairs in ring_pairs.items():
        m = MultiProjModel(dims)
        for a, b in pairs:
            yield kt_sequence(m, a, b)


def test_criterion_2_log_concavity(capsys, polytope_pairs, ring_pairs, sequences):
    start = time.perf_counter()
    checked = violations = 0
    for s in _corpus_sequences(polytope_pairs, ring_pairs, sequences):
        vals = s.s
        checked += 1
        violations += any(vals[k] ** 2 < vals[k - 1] * vals[k + 1] for k in range(1, s.n))
        violations += not check_inequalities(s).log_concave
    elapsed = time.perf_counter() - start
    ok = violations == 0
    announce(capsys, 2, "s_k^2 >= s_{k-1} s_{k+1}", ok, f"{checked} sequences, {violations} violations", elapsed, 10)
    assert ok


def test_criterion_3_chain_and_binomial(capsys, polytope_pairs, ring_pairs, sequences):
    start = time.perf_counter()
    failures = checked = 0
    for s in _corpus_sequences(polytope_pairs, ring_pairs, sequences):
        v, n = s.s, s.n
        checked += 1
        if all(v[k] ** 2 >= v[k - 1] * v[k + 1] for k in range(1, n)):
            failures += not (v[n - 1] / v[0] >= (v[n] / v[n - 1]) ** (n - 1))
        failures += any(v[k] ** n < v[0] ** (n - k) * v[n] ** k for k in range(n + 1))
    for pairs in polytope_pairs.values():
        for P, Q in pairs:
            s = sequences.get((P, Q)) or mixed_volume_sequence(P, Q)
            failures += minkowski_sum(P, Q).volume != sum(comb(s.n, k) * s[k] for k in range(s.n + 1))
    for dims, pairs in ring_pairs.items():
        m = MultiProjModel(dims)
        for a, b in pairs:
            s = kt_sequence(m, a, b)
            failures += m.oracle.evaluate([a + b] * m.n) != sum(comb(m.n, k) * s[k] for k in range(m.n + 1))
    elapsed = time.perf_counter() - start
    ok = failures == 0
    announce(capsys, 3, "ratio chain, power chain, binomial identity", ok,
             f"{checked} sequences, {failures} failures", elapsed, 10)
    assert ok


def _perturbed_polytope(rng, Q):
    """Push one vertex of ``Q`` away from the vertex centroid."""
    verts = list(Q.vertices)
    i = rng.randrange(len(verts))
    c = Q.vertex_centroid
    verts[i] = tuple(x + (x - y) / 7 for x, y in zip(verts[i], c))
    return type(Q)(verts)


def test_criterion_4_equivalence_consistency(capsys, polytope_pairs, ring_pairs):
    start = time.perf_counter()
    inconsistent = reports = 0
    for d, pairs in polytope_pairs.items():
        model = PolytopeModel(d)
        for P, Q in pairs:
            reports += 1
            inconsistent += not equivalence_report(model, P, Q).consistent
    for dims, pairs in ring_pairs.items():
        model = MultiProjModel(dims)
        for a, b in pairs:
            reports += 1
            inconsistent += not equivalence_report(model, a, b).consistent

    rng = random.Random(CORPUS_SEED + 2)
    scales = (Fraction(1, 2), Fraction(1), Fraction(3))
    family_bad = families = 0
    for i in range(20):
        c = scales[i % 3]
        dims = RING_MODELS[i % 3]
        m = MultiProjModel(dims)
        a = random_class(rng, m.basis_dim)
        b = a.scaled(c)
        off = ClassVector(tuple(x + (1 if j == 0 else 0) for j, x in enumerate(b.coords)))
        d = 2 + i % 3
        P = _rational_polytope(rng, d)
        Q = P.scaled(c).translated([Fraction(rng.randint(-4, 4), 3) for _ in range(d)])
        for model, x, y, z in ((m, a, b, off), (PolytopeModel(d), P, Q, _perturbed_polytope(rng, Q))):
            families += 2
            good = equivalence_report(model, x, y)
            bad = equivalence_report(model, x, z)
            family_bad += not (good.consistent and good.all_hold)
            family_bad += not (bad.consistent and bad.all_fail)
    elapsed = time.perf_counter() - start
    ok = inconsistent == 0 and family_bad == 0
    announce(capsys, 4, "six statements agree", ok,
             f"{reports} corpus reports ({inconsistent} inconsistent), {families} constructed cases "
             f"({family_bad} wrong)", elapsed, 20)
    assert ok


def test_criterion_5_injectivity_scan(capsys):
    start = time.perf_counter()
    models = [MultiProjModel(d) for d in ((1, 1), (1, 1, 1), (2, 1), (1, 1, 1, 1))]
    models += [PolytopeModel(2), PolytopeModel(3)]
    bad = 0
    parts = []
    for model in models:
        r = power_map_injectivity_scan(model, 100, CORPUS_SEED)
        bad += len(r.counterexamples)
        parts.append(f"{r.model}: {len(r.counterexamples)}")
    elapsed = time.perf_counter() - start
    ok = bad == 0
    announce(capsys, 5, "power map injective up to scale", ok,
             f"100 pairs per model, counterexamples {', '.join(parts)}", elapsed, 10)
    assert ok


def _random_pd(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(x)
    return (q * rng.uniform(0.2, 5.0, n)) @ q.conj().T


def test_criterion_6_hermitian_identities(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(CORPUS_SEED)
    worst_identity = worst_round_trip = 0.0
    violations = bad_equality = equality_hits = 0
    for n in range(2, 7):
        for i in range(1000):
            a = HermitianForm(_random_pd(rng, n))
            adj = adjugate(a).entries
            det = a.det()
            err1 = np.abs(adj @ a.entries - det * np.eye(n)).max() / (abs(det) * np.abs(a.entries).max())
            err2 = abs(np.linalg.det(adj).real - det ** (n - 1)) / abs(det ** (n - 1))
            back = recover_from_adjugate(adjugate(a)).entries
            err3 = np.abs(back - a.entries).max() / np.abs(a.entries).max()
            worst_identity = max(worst_identity, err1, err2)
            worst_round_trip = max(worst_round_trip, err3)

            theta = np.zeros((n, n)) if i % 10 == 0 else _random_pd(rng, n) - rng.uniform(0, 0.19) * a.entries
            try:
                r = amgm_bound(a, HermitianForm(theta))
            except InequalityViolation:
                violations += 1
                continue
            if r.equality:
                equality_hits += 1
                bad_equality += r.theta_ratio > 1e-10
    elapsed = time.perf_counter() - start
    ok = worst_identity <= 1e-10 and worst_round_trip <= 1e-10 and violations == 0 and bad_equality == 0
    announce(capsys, 6, "adjugate identities, round trip, AM-GM", ok,
             f"5000 matrices, identity err {worst_identity:.1e}, round-trip err {worst_round_trip:.1e}, "
             f"{violations} violations, {equality_hits} equality cases ({bad_equality} with large theta)",
             elapsed, 30)
    assert ok


def test_criterion_7_signature(capsys):
    start = time.perf_counter()
    rng = random.Random(CORPUS_SEED)
    wrong_signature = negative = mismatched = compared = 0
    for dims in ((2,), (1, 1), (1, 1, 1), (2, 1), (1, 1, 1, 1)):
        m = MultiProjModel(dims)
        for _ in range(10):
            ws = [random_class(rng, m.basis_dim) for _ in range(m.n - 2)]
            wrong_signature += gram_signature(m, kahler_classes=ws).positives != 1
            a, b = random_class(rng, m.basis_dim, 0), random_class(rng, m.basis_dim, 0)
            negative += discriminant_inequality(m, a, b, ws) < 0
            a, b = random_class(rng, m.basis_dim), random_class(rng, m.basis_dim)
            lc = check_inequalities(kt_sequence(m, a, b)).log_concavity_defects
            for k in range(1, m.n):
                # with w = a^(k-1) b^(n-k-1): Q(a,b) = s_k, Q(a,a) = s_{k+1}, Q(b,b) = s_{k-1}
                compared += 1
                defect = discriminant_inequality(m, a, b, [a] * (k - 1) + [b] * (m.n - k - 1))
                mismatched += defect != lc[k - 1]
    elapsed = time.perf_counter() - start
    ok = wrong_signature == 0 and negative == 0 and mismatched == 0
    announce(capsys, 7, "one positive index, discriminant", ok,
             f"50 Kahler tuples ({wrong_signature} wrong), {negative} negative discriminants, "
             f"{compared} defect comparisons ({mismatched} mismatched)", elapsed, 20)
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "ktprop", *map(str, args)], capture_output=True, cwd=ROOT)


def test_criterion_8_cli_determinism(capsys):
    start = time.perf_counter()
    first, second = _cli("selftest", "--seed", "42"), _cli("selftest", "--seed", "42")
    same = first.stdout == second.stdout and first.returncode == second.returncode == 0

    prop = _cli("run", ROOT / "problems" / "p1xp1_proportional.ktp")
    prop_ok = prop.returncode == 0 and prop.stdout.decode().count("  holds  ") == 6
    seq = _cli("run", ROOT / "problems" / "square_vs_triangle.ktp")
    seq_ok = seq.returncode == 0 and "s = (1/2, 1, 1)" in seq.stdout.decode()
    bad = _cli("run", ROOT / "problems" / "malformed_vertex.ktp")
    bad_ok = bad.returncode == 1 and b"malformed_vertex.ktp:7:" in bad.stderr and b"1/0" in bad.stderr
    elapsed = time.perf_counter() - start
    ok = same and prop_ok and seq_ok and bad_ok
    announce(capsys, 8, "deterministic CLI", ok,
             f"selftest identical={same}, proportional={prop_ok}, sequence={seq_ok}, malformed={bad_ok}",
             elapsed, 30)
    assert ok
