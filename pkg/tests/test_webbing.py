import random

import pytest
from hypothesis import given, strategies as st

from cuweb import abgroups as ab
from cuweb.errors import FiberNotEnumerable, NotPositivelyOrdered
from cuweb.fixtures import (
    all_fixture_systems,
    divisibility_counterexample,
    named_fixtures,
    random_base,
    random_morphism,
    random_system,
    w5_system,
)
from cuweb.order import check_axiom, is_violation, truncated_naturals, validate_monoid
from cuweb.systems import compose_morphisms, constant_system
from cuweb.webbing import (
    check_preservation,
    check_web_functoriality,
    morphism_defect,
    web,
    web_morphism,
    web_way_below_matches_sequences,
)

seeds = st.integers(min_value=0, max_value=10**6)


def test_w5_carrier_and_sums():
    W = web(w5_system())
    assert [W.name(x) for x in W.elements] == ["(0,0)", "(1,0)", "(1,1)", "(∞,0)", "(∞,1)"]
    one = W.parse("(1,1)")
    # 1+1 = ∞ in the base and 1+1 = 0 in Z/2 after pushing to ∞
    assert W.name(W.add(one, one)) == "(∞,0)"
    assert W.leq(one, W.parse("(∞,1)")) and not W.leq(one, W.parse("(∞,0)"))


def test_w5_pairwise_order_by_hand():
    W = web(w5_system())
    below = {
        "(0,0)": {"(0,0)", "(1,0)", "(∞,0)"},
        "(1,0)": {"(1,0)", "(∞,0)"},
        "(1,1)": {"(1,1)", "(∞,1)"},
        "(∞,0)": {"(∞,0)"},
        "(∞,1)": {"(∞,1)"},
    }
    for x in W.elements:
        assert {W.name(y) for y in W.elements if W.leq(x, y)} == below[W.name(x)]


def test_web_refuses_non_positive_base():
    G = validate_monoid(2, [[0, 1], [1, 0]], [[1, 0], [0, 1]], 0)
    with pytest.raises(NotPositivelyOrdered):
        web(constant_system(G))


def test_z_fibers_need_a_window():
    Zsys = constant_system(truncated_naturals(1), ab.Z)
    with pytest.raises(FiberNotEnumerable):
        web(Zsys)
    W = web(Zsys, window=2)
    assert not W.complete and W.size == 1 + 5 + 5


def test_au_witness_on_w5():
    W = web(w5_system())
    v = check_axiom(W, "AU")
    assert not v.holds
    assert (W.name(v.witness[0]), W.name(v.witness[1]), v.witness[2]) == ("(1,1)", "(∞,0)", 1)


@pytest.mark.parametrize("name", sorted(named_fixtures()))
def test_way_below_formula_on_named_fixtures(name):
    assert web_way_below_matches_sequences(web(named_fixtures()[name])).holds


@given(seeds)
def test_web_theorem_on_random_systems(seed):
    rng = random.Random(seed)
    W = web(random_system(rng, random_base(rng, 6)), verify=False)
    for tag in ("PC", "PD", "S0"):
        assert check_axiom(W, tag).holds
    assert W.way_below(W.zero, W.zero)


@given(seeds)
def test_webbed_morphisms_preserve_structure(seed):
    rng = random.Random(seed)
    fx = [G for G in named_fixtures().values() if G.base.size <= 5]
    A, B, C = (rng.choice(fx) for _ in range(3))
    f = random_morphism(rng, A, B)
    g = random_morphism(rng, B, C)
    assert morphism_defect(web_morphism(f, verify=False)) is None
    assert check_web_functoriality(f, g).holds
    h = compose_morphisms(g, f)
    assert morphism_defect(web_morphism(h, verify=False)) is None


@given(seeds, st.sampled_from(["WC->PWC", "O5"]))
def test_preservation_holds(seed, tag):
    rng = random.Random(seed)
    v = check_preservation(random_system(rng, random_base(rng, 5)), tag)
    assert not v.violation


def test_conclusion_witnesses_are_genuine():
    for G in all_fixture_systems(seed=1, extra=10).values():
        W = web(G)
        for tag in ("PWC", "O5", "AD"):
            v = check_axiom(W, tag)
            if not v.holds:
                assert is_violation(W, tag, v.witness)


def test_almost_divisibility_is_not_preserved_by_stable_systems():
    # constant Z/2 over {0, ∞}: stable, base almost divisible, web is not.
    # x' = x = (∞,1), n = 1 needs w with w ≤ x and x ≤ 2w, but 2w has fiber 0.
    v = check_preservation(divisibility_counterexample(), "AD")
    assert v.hypothesis.holds and v.stability.holds
    assert v.violation
    W = web(divisibility_counterexample())
    x = W.parse("(∞,1)")
    assert is_violation(W, "AD", (x, x, 1))
