import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cuweb.errors import (
    BadNeutral,
    IncompatibleSumOrder,
    NonAssociative,
    NonCommutative,
    NotPartialOrder,
    NotPositivelyOrdered,
)
from cuweb.fixtures import max_chain, random_base, random_join_semilattice
from cuweb.order import (
    AXIOMS,
    INF,
    check_axiom,
    is_violation,
    product_monoid,
    sequence_way_below,
    trivial_monoid,
    truncated_naturals,
    validate_monoid,
    way_below,
)

seeds = st.integers(min_value=0, max_value=10**6)


def brute_holds(S, axiom):
    """Axiom by scanning every tuple with the plain formula (multiples up to |S| + 1)."""
    E = list(S.elements)
    arity = {"PC": 2, "PD": 1, "S0": 2, "WC": 3, "PWC": 2, "O5": 3, "O6": 4}
    if axiom in arity:
        tuples = itertools.product(E, repeat=arity[axiom])
    else:
        tuples = ((x, y, k) for x in E for y in E for k in range(1, S.size + 2))
    return not any(is_violation(S, axiom, w) for w in tuples)


def test_truncated_naturals_layout():
    T = truncated_naturals(2)
    assert T.names == ("0", "1", "2", INF)
    assert T.add(1, 1) == 2 and T.add(1, 2) == 3 and T.add(3, 0) == 3
    assert T.leq(2, 3) and not T.leq(3, 2)
    assert T.positively_ordered


def test_trivial_monoid():
    Z = trivial_monoid()
    assert Z.size == 1 and Z.leq(0, 0) and Z.way_below(0, 0)


def test_product_indexing():
    T0, T1 = truncated_naturals(0), truncated_naturals(1)
    P = product_monoid(T1, T0)
    assert P.size == 6
    assert P.names[1 * 2 + 1] == f"(1,{INF})"
    assert P.labels[3] == (1, 1)


def test_validate_rejects_incompatible_order():
    # {0,1} with 1+1=0 and 0<=1: adding 1 to 0<=1 gives 1<=0
    with pytest.raises(IncompatibleSumOrder) as err:
        validate_monoid(["0", "1"], [[0, 1], [1, 0]], [[1, 1], [0, 1]], 0)
    assert err.value.witness is not None


def test_validate_rejects_noncommutative():
    with pytest.raises(NonCommutative) as err:
        validate_monoid(3, [[0, 1, 2], [1, 1, 1], [2, 2, 2]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 0)
    assert err.value.witness == (1, 2)


def test_validate_rejects_bad_neutral():
    with pytest.raises(BadNeutral):
        validate_monoid(2, [[1, 0], [0, 1]], [[1, 0], [0, 1]], 0)


def test_validate_rejects_nonassociative():
    # commutative with neutral 0 but (1+1)+2 != 1+(1+2)
    add = [[0, 1, 2], [1, 2, 0], [2, 0, 0]]
    with pytest.raises(NonAssociative):
        validate_monoid(3, add, [[i == j for j in range(3)] for i in range(3)], 0)


def test_validate_rejects_non_partial_order():
    add = [[0, 1], [1, 1]]
    with pytest.raises(NotPartialOrder):
        validate_monoid(2, add, [[1, 1], [1, 1]], 0)


def test_validate_rejects_demanded_positivity():
    # two-element group with the discrete order is a valid ordered monoid, not positive
    with pytest.raises(NotPositivelyOrdered):
        validate_monoid(2, [[0, 1], [1, 0]], [[1, 0], [0, 1]], 0, positively_ordered=True)
    G = validate_monoid(2, [[0, 1], [1, 0]], [[1, 0], [0, 1]], 0)
    assert not G.positively_ordered


def test_way_below_equals_order_in_finite_models():
    for S in (truncated_naturals(2), max_chain(3), product_monoid(truncated_naturals(1), truncated_naturals(0))):
        assert way_below(S) == [[S.leq(a, b) for b in S.elements] for a in S.elements]


def test_t1_axiom_profile():
    T = truncated_naturals(1)
    expected = {"PC": True, "PD": True, "S0": True, "WC": False, "PWC": False,
                "O5": True, "O6": True, "AU": False, "AD": False}
    for tag in AXIOMS:
        v = check_axiom(T, tag)
        assert v.holds == expected[tag], tag
        if not v.holds:
            assert is_violation(T, tag, v.witness)


def test_wc_witness_on_t1_is_genuine():
    T = truncated_naturals(1)
    v = check_axiom(T, "WC")
    assert is_violation(T, "WC", v.witness)
    # (∞, ∞, 1) is another violation: ∞+1 << 1+1 = ∞ but ∞ is not below 1
    assert is_violation(T, "WC", (2, 2, 1))


def test_max_chain_is_unperforated():
    # idempotent chain: n*x = x, so (n+1)x <= ny reduces to x <= y
    assert check_axiom(max_chain(3), "AU").holds


def test_unknown_axiom():
    with pytest.raises(ValueError):
        check_axiom(truncated_naturals(0), "XYZ")


@given(seeds)
def test_sequence_oracle_agrees(seed):
    S = random_base(random.Random(seed), 6)
    assert sequence_way_below(S) == [[S.leq(a, b) for b in S.elements] for a in S.elements]


@given(seeds, st.sampled_from(AXIOMS))
def test_check_axiom_matches_bruteforce(seed, axiom):
    S = random_base(random.Random(seed), 5)
    v = check_axiom(S, axiom)
    assert v.holds == brute_holds(S, axiom)
    if not v.holds:
        assert is_violation(S, axiom, v.witness)


@given(seeds)
def test_random_bases_are_valid(seed):
    S = random_base(random.Random(seed), 6)
    for a, b, c in itertools.product(S.elements, repeat=3):
        assert S.add(S.add(a, b), c) == S.add(a, S.add(b, c))
        if S.leq(a, b):
            assert S.leq(S.add(a, c), S.add(b, c))
    assert S.positively_ordered


@given(st.integers(0, 10**6))
def test_random_join_semilattices_are_union_closed(seed):
    S = random_join_semilattice(random.Random(seed))
    assert all(S.add(x, x) == x for x in S.elements)
