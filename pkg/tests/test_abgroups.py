import itertools

import pytest
from hypothesis import given, strategies as st

from cuweb import abgroups as ab
from cuweb.abgroups import FinAbGroup
from cuweb.errors import DomainMismatch, NotComposable, NotWellDefined, Unbounded

finite_groups = st.lists(st.integers(min_value=1, max_value=4), max_size=2).map(lambda f: FinAbGroup(tuple(f)))


def test_basic_arithmetic():
    A = FinAbGroup((2, 0))
    assert A.add((1, 5), (1, -7)) == (0, -2)
    assert A.neg((1, 3)) == (1, -3)
    assert A.scale(3, (1, 2)) == (1, 6)
    assert A.rank == 2 and not A.is_finite and A.order is None
    assert str(A) == "Z/2+Z" and str(ab.TRIVIAL) == "0"


def test_elements_and_windows():
    assert len(ab.elements(FinAbGroup((2, 3))).items) == 6
    with pytest.raises(Unbounded):
        ab.elements(ab.Z)
    enum = ab.elements(ab.Z, 2)
    assert enum.items == ((-2,), (-1,), (0,), (1,), (2,)) and enum.partial


def test_hom_well_definedness():
    # Z/2 -> Z/4 sending 1 to 1 would need 2*1 = 0 in Z/4
    with pytest.raises(NotWellDefined):
        ab.hom(ab.cyclic(2), ab.cyclic(4), [[1]])
    h = ab.hom(ab.cyclic(2), ab.cyclic(4), [[2]])
    assert h((1,)) == (2,)
    # torsion cannot map nontrivially into Z
    with pytest.raises(NotWellDefined):
        ab.hom(ab.cyclic(3), ab.Z, [[1]])


def test_hom_shape_errors():
    with pytest.raises(DomainMismatch):
        ab.hom(ab.cyclic(2), ab.cyclic(2), [[1, 1]])


def test_compose_checks_domains():
    f = ab.identity_hom(ab.cyclic(2))
    g = ab.identity_hom(ab.cyclic(3))
    with pytest.raises(DomainMismatch):
        ab.compose(g, f)


def test_canonical_matrices_make_equality_exact():
    a = ab.hom(ab.cyclic(4), ab.cyclic(2), [[1]])
    b = ab.hom(ab.cyclic(4), ab.cyclic(2), [[3]])
    assert ab.homs_equal(a, b)


@pytest.mark.parametrize("matrix,expected", [([[1]], True), ([[-1]], True), ([[2]], False), ([[0]], False)])
def test_isomorphisms_of_z(matrix, expected):
    assert ab.is_isomorphism(ab.hom(ab.Z, ab.Z, matrix)) is expected


def test_isomorphism_mixed():
    A = FinAbGroup((0, 2))
    shear = ab.hom(A, A, [[1, 0], [1, 1]])
    assert ab.is_isomorphism(shear)
    assert not ab.is_isomorphism(ab.hom(A, A, [[1, 0], [0, 0]]))
    assert not ab.is_isomorphism(ab.hom(ab.Z, FinAbGroup((0, 0)), [[1], [0]]))


def test_colimit_chain():
    Z4, Z2 = ab.cyclic(4), ab.cyclic(2)
    top, canon = ab.colimit_chain([ab.hom(Z4, Z2, [[1]]), ab.identity_hom(Z2)])
    assert top == Z2 and len(canon) == 3
    assert canon[0]((3,)) == (1,)
    with pytest.raises(NotComposable):
        ab.colimit_chain([ab.identity_hom(Z4), ab.identity_hom(Z2)])


@given(finite_groups, finite_groups)
def test_all_homs_are_homomorphisms(A, B):
    for h in ab.all_homs(A, B):
        for g, k in itertools.product(ab.elements(A).items, repeat=2):
            assert h(A.add(g, k)) == B.add(h(g), h(k))


@given(finite_groups, finite_groups, finite_groups, st.data())
def test_composition_is_associative(A, B, C, data):
    f = data.draw(st.sampled_from(ab.all_homs(A, B)))
    g = data.draw(st.sampled_from(ab.all_homs(B, C)))
    h = data.draw(st.sampled_from(ab.all_homs(C, A)))
    assert ab.homs_equal(ab.compose(h, ab.compose(g, f)), ab.compose(ab.compose(h, g), f))
    for x in ab.elements(A).items:
        assert ab.compose(g, f)(x) == g(f(x))


@given(finite_groups, st.data())
def test_isomorphism_agrees_with_kernel_test(A, data):
    h = data.draw(st.sampled_from(ab.all_homs(A, A)))
    kernel_trivial = all(h(g) != A.zero() for g in ab.elements(A).items if g != A.zero())
    assert ab.is_isomorphism(h) == kernel_trivial
