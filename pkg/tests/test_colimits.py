import random

import pytest
from hypothesis import given, strategies as st

from cuweb import abgroups as ab
from cuweb.colimits import (
    SHAPES,
    Cocone,
    check_L1L2,
    check_universal_property,
    check_webbing_continuity,
    colimit,
    colimit_web_cocone,
    padded_candidate,
    random_diagram,
    single_diagram,
    validate_diagram,
    web_diagram,
)
from cuweb.errors import IncoherentArrows, NotACocone, NotDirected
from cuweb.fixtures import named_fixtures, quotient_chain_system, z2sys
from cuweb.systems import collapse_morphism, compose_morphisms, identity_morphism, validate_morphism

seeds = st.integers(min_value=0, max_value=10**6)


def test_index_must_be_directed():
    G = z2sys(1)
    with pytest.raises(NotDirected):
        validate_diagram(("a", "b"), (), {"a": G, "b": G}, {})
    with pytest.raises(NotDirected):
        validate_diagram(("a", "b"), (("a", "b"), ("b", "a")), {"a": G, "b": G}, {})


def test_arrows_must_be_coherent():
    # diamond whose two routes a->d disagree: identity versus the zero edge
    A = z2sys(1)
    idm = identity_morphism(A)
    zero = validate_morphism(A, A, [0, 1, 2], [ab.zero_hom(G, G) for G in A.fibers])
    nodes = ("a", "b", "c", "d")
    pairs = (("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"))
    arrows = {("a", "b"): idm, ("a", "c"): zero, ("b", "d"): idm, ("c", "d"): idm,
              ("a", "d"): idm}
    with pytest.raises(IncoherentArrows):
        validate_diagram(nodes, pairs, {i: A for i in nodes}, arrows)
    with pytest.raises(IncoherentArrows):
        validate_diagram(("a", "b"), (("a", "b"),), {"a": A, "b": A}, {})


def test_colimit_is_top_object():
    D = random_diagram(random.Random(5), shape="chain3")
    c = colimit(D)
    assert D.top == "c" and c.target is D.objects["c"]


def test_universal_property_with_collapse_candidate():
    D = random_diagram(random.Random(7), shape="vee")
    top = D.objects[D.top]
    coll = collapse_morphism(top)
    cand = Cocone(coll.target, {i: compose_morphisms(coll, D.arrow(i, D.top)) for i in D.nodes})
    v = check_universal_property(D, cand)
    assert v.holds and v.details["unique"]


def test_universal_property_rejects_non_cocones():
    A = quotient_chain_system()
    D = validate_diagram(("a", "b"), (("a", "b"),), {"a": A, "b": A}, {("a", "b"): identity_morphism(A)})
    zero = validate_morphism(A, A, [0, 1, 2], [ab.zero_hom(G, G) for G in A.fibers])
    bad = Cocone(A, {"a": zero, "b": identity_morphism(A)})
    with pytest.raises(NotACocone):
        check_universal_property(D, bad)


@pytest.mark.parametrize("name", sorted(named_fixtures()))
def test_single_node_diagrams(name):
    D = single_diagram(named_fixtures()[name])
    wd = web_diagram(D)
    assert check_L1L2(wd, colimit_web_cocone(wd)).holds
    assert not check_L1L2(wd, padded_candidate(wd)).holds
    assert check_webbing_continuity(D).holds


@given(seeds, st.sampled_from(sorted(SHAPES)))
def test_random_diagrams(seed, shape):
    D = random_diagram(random.Random(seed), shape=shape)
    wd = web_diagram(D)
    v = check_L1L2(wd, colimit_web_cocone(wd))
    assert v.holds, v.witness
    pad = check_L1L2(wd, padded_candidate(wd))
    assert not pad.holds and "L1" in pad.details["failed"]
    assert check_webbing_continuity(D).holds
