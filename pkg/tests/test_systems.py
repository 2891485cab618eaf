import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cuweb import abgroups as ab
from cuweb.errors import (
    FunctorialityFailure,
    MissingEdge,
    NaturalitySquareFailure,
    NontrivialFiberAtZero,
    NotComposable,
    NotIdentityOnDiagonal,
    NotMonoidMorphism,
    NotOrderPreserving,
)
from cuweb.fixtures import (
    FIBER_POOL,
    named_fixtures,
    random_base,
    random_morphism,
    random_system,
    z2sys,
)
from cuweb.order import truncated_naturals
from cuweb.systems import (
    check_stability,
    collapse_morphism,
    compose_morphisms,
    constant_system,
    identity_morphism,
    morphisms_equal,
    validate_morphism,
    validate_system,
)

seeds = st.integers(min_value=0, max_value=10**6)


def functorial_by_elements(base, fibers, edges) -> bool:
    """Element-wise functoriality, written independently of the matrix checks."""
    if not fibers[base.zero].is_trivial:
        return False
    E = base.elements
    for s, t in itertools.product(E, repeat=2):
        if base.leq(s, t) and (s, t) not in edges and s != t:
            return False
    def push(s, t, g):
        if s == t and (s, t) not in edges:
            return g
        return edges[(s, t)](g)
    for s in E:
        for g in ab.elements(fibers[s]).items:
            if push(s, s, g) != g:
                return False
            for t, u in itertools.product(E, repeat=2):
                if base.leq(s, t) and base.leq(t, u) and push(t, u, push(s, t, g)) != push(s, u, g):
                    return False
    return True


def test_w5_layout():
    G = z2sys(1)
    assert [str(F) for F in G.fibers] == ["0", "Z/2", "Z/2"]
    assert G.push(1, 2, (1,)) == (1,)
    assert z2sys(0).push(1, 2, (1,)) == (0,)


def test_validation_errors():
    T1 = truncated_naturals(1)
    Z2 = ab.cyclic(2)
    with pytest.raises(NontrivialFiberAtZero):
        validate_system(T1, [Z2, Z2, Z2], {})
    with pytest.raises(MissingEdge) as err:
        validate_system(T1, [ab.TRIVIAL, Z2, Z2], {(0, 1): ab.zero_hom(ab.TRIVIAL, Z2), (0, 2): ab.zero_hom(ab.TRIVIAL, Z2)})
    assert err.value.witness == (1, 2)
    with pytest.raises(NotIdentityOnDiagonal):
        validate_system(T1, [ab.TRIVIAL, Z2, Z2], {
            (0, 1): ab.zero_hom(ab.TRIVIAL, Z2), (0, 2): ab.zero_hom(ab.TRIVIAL, Z2),
            (1, 2): [[1]], (1, 1): [[0]],
        })


def test_functoriality_failure_witness():
    T2 = truncated_naturals(2)
    Z2 = ab.cyclic(2)
    edges = {(s, t): ab.zero_hom(ab.TRIVIAL, Z2) for s in [0] for t in (1, 2, 3)}
    edges.update({(1, 2): [[1]], (2, 3): [[1]], (1, 3): [[0]]})
    with pytest.raises(FunctorialityFailure) as err:
        validate_system(T2, [ab.TRIVIAL, Z2, Z2, Z2], edges)
    assert err.value.witness == (1, 2, 3)


@given(seeds)
def test_validation_matches_elementwise_oracle(seed):
    rng = random.Random(seed)
    base = random_base(rng, 5)
    fibers = [rng.choice(FIBER_POOL) for _ in base.elements]
    if rng.random() < 0.7:
        fibers[base.zero] = ab.TRIVIAL
    edges = {}
    for s, t in itertools.product(base.elements, repeat=2):
        if base.leq(s, t) and (s != t or rng.random() < 0.3):
            edges[(s, t)] = rng.choice(ab.all_homs(fibers[s], fibers[t]))
    try:
        validate_system(base, fibers, edges)
        accepted = True
    except (NontrivialFiberAtZero, MissingEdge, NotIdentityOnDiagonal, FunctorialityFailure):
        accepted = False
    assert accepted == functorial_by_elements(base, fibers, edges)


@given(seeds)
def test_random_systems_are_functorial(seed):
    rng = random.Random(seed)
    G = random_system(rng, random_base(rng, 6))
    assert functorial_by_elements(G.base, G.fibers, G.edges)


def test_morphism_validation_errors():
    T1 = truncated_naturals(1)
    A = constant_system(T1, ab.cyclic(2))
    with pytest.raises(NotMonoidMorphism):
        validate_morphism(A, A, [0, 1, 1], [ab.identity_hom(G) for G in A.fibers])
    with pytest.raises(NotMonoidMorphism):
        validate_morphism(A, A, [1, 1, 2], [ab.identity_hom(G) for G in A.fibers])
    # the negation-free swap of edges: a fiber map that breaks a naturality square
    B = z2sys(1)
    eta = [ab.identity_hom(ab.TRIVIAL), ab.identity_hom(ab.cyclic(2)), ab.zero_hom(ab.cyclic(2), ab.cyclic(2))]
    with pytest.raises(NaturalitySquareFailure) as err:
        validate_morphism(B, B, [0, 1, 2], eta)
    assert err.value.witness == (1, 2)


def test_order_preservation_is_checked():
    from cuweb.order import validate_monoid

    # same idempotent sum on {0, a}; the target carries the discrete order
    up = validate_monoid(["0", "a"], [[0, 1], [1, 1]], [[1, 1], [0, 1]], 0)
    flat = validate_monoid(["0", "a"], [[0, 1], [1, 1]], [[1, 0], [0, 1]], 0)
    A, B = constant_system(up), constant_system(flat)
    with pytest.raises(NotOrderPreserving) as err:
        validate_morphism(A, B, [0, 1], [ab.identity_hom(ab.TRIVIAL)] * 2)
    assert err.value.witness == (0, 1)
    assert validate_morphism(B, A, [0, 1], [ab.identity_hom(ab.TRIVIAL)] * 2)


def test_identity_and_collapse():
    for G in named_fixtures().values():
        idm = identity_morphism(G)
        assert morphisms_equal(compose_morphisms(idm, idm), idm)
        c = collapse_morphism(G)
        assert set(c.alpha) == {0}


def test_compose_requires_matching_objects():
    A, B = z2sys(1), z2sys(1)
    with pytest.raises(NotComposable):
        compose_morphisms(identity_morphism(B), identity_morphism(A))


@given(seeds)
def test_composites_of_valid_morphisms_are_valid(seed):
    rng = random.Random(seed)
    fx = [G for G in named_fixtures().values() if G.base.size <= 5]
    A = rng.choice(fx)
    B = rng.choice(fx)
    C = rng.choice(fx)
    f = random_morphism(rng, A, B)
    g = random_morphism(rng, B, C)
    h = compose_morphisms(g, f)
    again = validate_morphism(A, C, h.alpha, h.eta)
    assert morphisms_equal(again, h)


def test_stability():
    assert check_stability(constant_system(truncated_naturals(2), ab.cyclic(3))).holds
    v = check_stability(z2sys(0))
    assert not v.holds and v.witness == (1, 2)
