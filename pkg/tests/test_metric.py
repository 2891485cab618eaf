import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cuweb.circle import ArcOpenSet, atoms, lambda_n
from cuweb.errors import NotWebbedMorphism, ResolutionTooLarge, ResolutionUnavailable
from cuweb.metric import (
    CircleMorphism,
    check_diagram_proposition,
    diagram_proposition_table,
    check_relaxed_triangle,
    check_table_morphism,
    compare_bruteforce,
    compare_on,
    compare_table,
    discrete_semimetric,
    identity,
    metric_d,
    metric_d_bruteforce,
    metric_d_table,
    metric_report,
    reflect_masks,
    reflection,
    rotation,
    sample_morphisms,
    strict_compare_on,
    tabulate,
    zero_morphism,
)

SAMPLE = sample_morphisms(2)
morphisms = st.sampled_from(SAMPLE)


def member(U: ArcOpenSet, pos: Fraction) -> bool:
    t = (pos % 1) * U.N
    if t.denominator == 1:
        return int(t) in U.points
    return int(t) + 1 in U.arcs


def positions(m):
    N = 1 << m
    return [Fraction(2 * k + e, 2 * N) for k in range(N) for e in (0, 1)]


def rotation_dd_oracle(theta: Fraction, max_n: int):
    """Rotation against the identity compares at n exactly when theta <= 1/2**n."""
    for n in range(max_n + 1):
        if theta > Fraction(1, 1 << n):
            return None if n == 0 else Fraction(1, 1 << (n - 1))
    return "bracket"


@pytest.mark.parametrize("f", sample_morphisms(3), ids=lambda f: f.name)
def test_images_match_geometry(f):
    for n in range(3):
        R = f.resolution(n)
        sets = lambda_n(n)
        eng = f.image_masks(np.array([U.mask for U in sets], dtype=np.uint64), n, R)
        for U, e in zip(sets, eng):
            V = f.image_set(U, R)
            assert V.mask == int(e)
            for p in positions(R):
                if f.kind == "zero":
                    expect = False
                elif f.kind == "rotation":
                    expect = member(U, p - Fraction(f.p, 1 << f.m))
                elif f.kind == "reflection":
                    expect = member(U, -p)
                else:
                    expect = member(U, p)
                assert member(V, p) == expect


@given(st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=20), st.integers(0, 5))
def test_reflect_masks_bitwise(words, n):
    A = atoms(n)
    m = np.array([w & ((1 << A) - 1) for w in words], dtype=np.uint64)
    want = [sum(1 << (-a % A) for a in range(A) if int(w) >> a & 1) for w in m]
    assert [int(v) for v in reflect_masks(m, n)] == want


@pytest.mark.parametrize("strict", [False, True])
def test_compare_routes_agree(strict):
    for a, b in itertools.product(SAMPLE, repeat=2):
        for n in range(3):
            fast = compare_on(a, b, n, 1, strict).holds
            slow = compare_bruteforce(a, b, n, 1, strict).holds
            assert fast == slow, (a.name, b.name, n)


def test_bruteforce_guard():
    with pytest.raises(ResolutionTooLarge):
        compare_bruteforce(identity(), identity(), 3, 1)


@given(morphisms, morphisms)
def test_dd_symmetric(a, b):
    assert discrete_semimetric(a, b, 3) == discrete_semimetric(b, a, 3)


@given(morphisms, morphisms, st.integers(0, 2))
def test_finer_comparison_implies_coarser(a, b, n):
    if compare_on(a, b, n + 1, 1).holds:
        assert compare_on(a, b, n, 1).holds
    if strict_compare_on(a, b, n, 1).holds:
        assert compare_on(a, b, n, 1).holds


@pytest.mark.parametrize("f", sample_morphisms(3), ids=lambda f: f.name)
def test_dd_self_is_bracket(f):
    dd = discrete_semimetric(f, f, 3)
    assert not dd.exact and dd.lower == 0 and dd.upper == Fraction(1, 8)


def test_dd_infinite_cases():
    assert not discrete_semimetric(identity(), identity(-1), 3).finite
    assert not discrete_semimetric(identity(), zero_morphism(), 3).finite
    assert not discrete_semimetric(identity(), identity(2), 3).finite
    # ]0,1/2[ reflects to ]1/2,1[, outside the quarter-turn neighbourhood of the former
    assert discrete_semimetric(identity(), reflection(), 3).upper == Fraction(1, 2)


@pytest.mark.parametrize("p,m", [(1, 1), (1, 2), (3, 3), (1, 3), (5, 3), (3, 2)])
def test_rotation_dd_against_oracle(p, m):
    theta = Fraction(p, 1 << m)
    theta = min(theta, 1 - theta)
    dd = discrete_semimetric(rotation(p, m), identity(), 4)
    want = rotation_dd_oracle(theta, 4)
    if want == "bracket":
        assert not dd.exact
    elif want is None:
        assert not dd.finite
    else:
        assert dd.exact and dd.upper == want


def test_frozen_rotation_values():
    r38 = metric_report(rotation(3, 3), identity(), max_n=3)
    assert r38.dd.upper == Fraction(1, 2) and r38.dd.exact
    assert (r38.d.lower, r38.d.upper) == (Fraction(1, 4), Fraction(3, 8))
    assert r38.certified
    r14 = metric_report(rotation(1, 2), identity(), max_n=3)
    assert r14.dd.upper == Fraction(1, 4)
    assert (r14.d.lower, r14.d.upper) == (Fraction(1, 8), Fraction(1, 4))
    js = r14.to_json()
    assert js["dd"] == {"lower": "1/4", "upper": "1/4", "exact": True}


@pytest.mark.parametrize("a,b", [(rotation(1, 3), identity()), (rotation(3, 3), identity()),
                                 (reflection(), identity()), (identity(), identity())],
                         ids=lambda f: f.name)
def test_metric_d_matches_plain_route(a, b):
    for G in (1, 2):
        d = metric_d(a, b, G, 1)
        N = 1 << G
        ok = [metric_d_bruteforce(a, b, G, 1, j) for j in range(1, N // 2 + 1)]
        if d.finite:
            j = int(d.upper * N)
            assert ok[j - 1] and not any(ok[: j - 1])
        else:
            assert not any(ok)


def test_rotation_distance_sandwich():
    # d sits below the rotation angle and dd at its dyadic ceiling
    for p, m in [(1, 3), (3, 3), (1, 2), (1, 1)]:
        theta = Fraction(p, 1 << m)
        r = metric_report(rotation(p, m), identity(), max_n=3)
        assert r.d.upper <= theta <= r.dd.upper <= 2 * r.d.upper


@given(morphisms, morphisms, morphisms)
def test_relaxed_triangle(a, b, c):
    assert check_relaxed_triangle(a, b, c, max_n=2).holds


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_diagram_proposition(n):
    for a, b in itertools.product(SAMPLE, repeat=2):
        v = check_diagram_proposition(a, b, n)
        assert v.holds, v.witness


def test_diagram_proposition_guards():
    odd = CircleMorphism("identity", fiber_values=((1, 1),))
    with pytest.raises(NotWebbedMorphism):
        check_diagram_proposition(odd, identity(), 1)
    with pytest.raises(ValueError):
        check_diagram_proposition(identity(), identity(), 1, B=0)


def test_table_morphisms():
    f = rotation(1, 2)
    t = tabulate(f, 2)
    assert check_table_morphism(t).holds
    for n in range(3):
        for g in (identity(), rotation(3, 3)):
            assert compare_on(t, g, n, 1).holds == compare_on(f, g, n, 1).holds
    with pytest.raises(ResolutionUnavailable):
        compare_on(t, identity(), 3, 1)
    # send the empty set at resolution 0 to the full target circle
    full = (1 << (2 << t.table_resolution)) - 1
    rows = [(k, s, full if (k, s) == (0, 0) else v) for (k, s, v) in t.table]
    bad = CircleMorphism("table", table=tuple(rows), table_resolution=t.table_resolution, table_cap=2)
    assert check_table_morphism(bad).witness == ("empty", 0)


def test_unknown_kind():
    with pytest.raises(ValueError):
        CircleMorphism("shear")


@pytest.mark.parametrize("strict", [False, True])
def test_compare_table_matches_pairwise(strict):
    S = sample_morphisms(3)
    for n in range(3):
        tab = compare_table(S, n, 2, strict)
        assert all(v == compare_on(S[i], S[k], n, 2, strict).holds for (i, k), v in tab.items())


def test_metric_d_table_matches_pairwise():
    S = sample_morphisms(2)
    tab = metric_d_table(S, 2, (0, 1, 3))
    for B, row in tab.items():
        assert all(b == metric_d(S[i], S[k], 2, B) for (i, k), b in row.items())


@given(morphisms, morphisms)
def test_windows_agree_for_linear_fibers(a, b):
    # fiber maps are linear, so a window of 1 already decides the fiber part
    dds = {discrete_semimetric(a, b, 3, B) for B in (1, 2, 3, 4)}
    assert len(dds) == 1


def test_diagram_table_matches_pairwise():
    S = sample_morphisms(2)
    for n in range(4):
        tab = diagram_proposition_table(S, n)
        for (i, k), v in tab.items():
            w = check_diagram_proposition(S[i], S[k], n)
            assert (v.holds, v.details) == (w.holds, w.details)
