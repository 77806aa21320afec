from fractions import Fraction
from itertools import product, permutations

import pytest
from hypothesis import given, settings, strategies as st

from ktprop import (
    ClassVector,
    ContractError,
    MultiProjModel,
    TableModel,
    TableOracle,
    cone_membership,
    eval_product,
    kt_sequence,
    make_multiproj_oracle,
)
from ktprop.intersection import multinomial_sequence


def brute_product(factor_dims, classes):
    """Expand the product over all index tuples; e_{i1}..e_{in} is 1 iff each H_f appears n_f times."""
    total = Fraction(0)
    for idx in product(range(len(factor_dims)), repeat=len(classes)):
        if all(idx.count(f) == nf for f, nf in enumerate(factor_dims)):
            term = Fraction(1)
            for c, i in zip(classes, idx):
                term *= Fraction(c.coords[i])
            total += term
    return total


H1, H2 = ClassVector((1, 0)), ClassVector((0, 1))


def test_normalization_and_ring_relation():
    o = make_multiproj_oracle((1, 1))
    assert eval_product(o, [H1, H2]) == 1
    assert eval_product(o, [H1, H1]) == 0


def test_three_factor_diagonal():
    o = make_multiproj_oracle((1, 1, 1))
    h = ClassVector((1, 1, 1))
    assert eval_product(o, [h, h, h]) == 6


def test_single_factor_projective_plane():
    o = make_multiproj_oracle((2,))
    h = ClassVector((1,))
    assert o(h, h) == 1


def test_model_shape():
    m = MultiProjModel((1, 1))
    assert (m.n, m.basis_dim) == (2, 2)
    assert m.oracle is m.oracle


@pytest.mark.parametrize("alpha, beta, expected", [
    ((1, 1), (2, 2), (8, 4, 2)),
    ((1, 2), (2, 1), (4, 5, 4)),
])
def test_kt_sequence_examples(alpha, beta, expected):
    s = kt_sequence(make_multiproj_oracle((1, 1)), ClassVector(alpha), ClassVector(beta))
    assert s.s == tuple(Fraction(x) for x in expected)


def test_kt_sequence_equal_classes_is_constant():
    m = MultiProjModel((2, 1))
    a = ClassVector((2, 3))
    s = kt_sequence(m, a, a)
    assert len(set(s.s)) == 1
    assert s[0] == m.oracle.evaluate([a] * 3)


def test_dimension_mismatch_is_a_contract_error():
    o = make_multiproj_oracle((1, 1))
    with pytest.raises(ContractError):
        o.evaluate([H1])
    with pytest.raises(ContractError):
        o.evaluate([H1, ClassVector((1, 1, 1))])
    with pytest.raises(ContractError):
        MultiProjModel((0, 1))


@pytest.mark.parametrize("coords, nef, big", [((0, 1), True, False), ((1, 1), True, True), ((-1, 2), False, False)])
def test_cone_membership(coords, nef, big):
    m = cone_membership(MultiProjModel((1, 1)), ClassVector(coords))
    assert (m.is_nef, m.is_big) == (nef, big)


dims_strategy = st.sampled_from([(1, 1), (2,), (1, 1, 1), (2, 1), (1, 2), (3,), (2, 2)])
coord = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@settings(max_examples=80, deadline=None)
@given(dims_strategy, st.data())
def test_oracle_matches_brute_force_expansion(dims, data):
    h, n = len(dims), sum(dims)
    classes = [ClassVector(tuple(data.draw(coord) for _ in range(h))) for _ in range(n)]
    o = make_multiproj_oracle(dims)
    value = o.evaluate(classes)
    assert value == brute_product(dims, classes)
    # symmetry under reordering of the arguments
    for perm in list(permutations(classes))[:6]:
        assert o.evaluate(list(perm)) == value


@settings(max_examples=60, deadline=None)
@given(dims_strategy, st.data())
def test_sequence_matches_closed_form_and_reverses(dims, data):
    h = len(dims)
    m = MultiProjModel(dims)
    pos = st.integers(min_value=1, max_value=10)
    a = ClassVector(tuple(data.draw(pos) for _ in range(h)))
    b = ClassVector(tuple(data.draw(pos) for _ in range(h)))
    s = kt_sequence(m, a, b)
    assert s == multinomial_sequence(m, a, b)
    assert kt_sequence(m, b, a).s == s.reversed().s


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_multilinearity(data):
    dims = (2, 1)
    o = make_multiproj_oracle(dims)
    vec = lambda: ClassVector((data.draw(coord), data.draw(coord)))
    a, b, c, d = vec(), vec(), vec(), vec()
    lam = data.draw(coord)
    lhs = o.evaluate([a + b.scaled(lam), c, d])
    assert lhs == o.evaluate([a, c, d]) + lam * o.evaluate([b, c, d])


def test_table_oracle_reproduces_multiproj():
    # P^1 x P^1 as a table: H1 H2 = 1, listed in both orders.
    t = TableOracle.from_entries(2, 2, [((0, 1), 1), ((1, 0), 1)])
    m = MultiProjModel((1, 1))
    a, b = ClassVector((1, 2)), ClassVector((3, 1))
    assert kt_sequence(TableModel(t), a, b) == kt_sequence(m, a, b)


def test_table_oracle_rejects_asymmetry_and_bad_indices():
    with pytest.raises(ContractError):
        TableOracle.from_entries(2, 2, [((0, 1), 1), ((1, 0), 2)])
    with pytest.raises(ContractError):
        TableOracle.from_entries(2, 2, [((0, 2), 1)])
    with pytest.raises(ContractError):
        TableOracle.from_entries(2, 2, [((0,), 1)])


def test_table_oracle_float_mode_averages_within_tolerance():
    t = TableOracle.from_entries(2, 2, [((0, 1), 1.0), ((1, 0), 1.0 + 1e-12)])
    assert not t.exact
    assert abs(t.evaluate([H1, H2]) - 1.0) < 1e-11
    with pytest.raises(ContractError):
        TableOracle.from_entries(2, 2, [((0, 1), 1.0), ((1, 0), 1.1)])


def test_class_vector_coerces_literals_and_keeps_floats():
    assert ClassVector(("1/2", 3)).coords == (Fraction(1, 2), Fraction(3))
    assert ClassVector((0.5, 1)).exact is False
