"""Named fixtures and random generators for systems, morphisms and diagrams.

Random systems come in three flavours:

* ``constant``: one group on every nonzero element with identity edges
  (always stable);
* ``chain``: fibers factor through a monotone map onto a chain of groups;
* ``general``: edges chosen on covering pairs and composed, retrying when
  two routes disagree.
"""
from __future__ import annotations

import itertools
import random
from typing import Sequence

from . import abgroups as ab
from .abgroups import FinAbGroup
from .order import FiniteOrderedMonoid, product_monoid, trivial_monoid, truncated_naturals, validate_monoid
from .systems import (
    GroupSystem,
    SystemMorphism,
    constant_system,
    trivial_system,
    validate_morphism,
    validate_system,
)

FIBER_POOL = (
    FinAbGroup(()),
    FinAbGroup((2,)),
    FinAbGroup((3,)),
    FinAbGroup((4,)),
    FinAbGroup((2, 2)),
)


def z2sys(edge: int = 1) -> GroupSystem:
    """Z/2 on 1 and ∞ over {0,1,∞}; the edge 1 -> ∞ is multiplication by ``edge``."""
    S = truncated_naturals(1)
    Z2 = ab.cyclic(2)
    return validate_system(S, [ab.TRIVIAL, Z2, Z2], {
        (0, 1): ab.zero_hom(ab.TRIVIAL, Z2),
        (0, 2): ab.zero_hom(ab.TRIVIAL, Z2),
        (1, 2): [[edge]],
    })


def w5_system() -> GroupSystem:
    return z2sys(1)


def product_system() -> GroupSystem:
    """Trivial fibers over {0,1,∞}²."""
    T1 = truncated_naturals(1)
    return constant_system(product_monoid(T1, T1))


def quotient_chain_system() -> GroupSystem:
    """Z/4 on 1, Z/2 on ∞, reduction between them."""
    S = truncated_naturals(1)
    Z4, Z2 = ab.cyclic(4), ab.cyclic(2)
    return validate_system(S, [ab.TRIVIAL, Z4, Z2], {
        (0, 1): ab.zero_hom(ab.TRIVIAL, Z4),
        (0, 2): ab.zero_hom(ab.TRIVIAL, Z2),
        (1, 2): [[1]],
    })


def divisibility_counterexample() -> GroupSystem:
    """Z/2 on ∞ over {0,∞}: stable, base almost divisible, web is not."""
    return constant_system(truncated_naturals(0), ab.cyclic(2))


def named_fixtures() -> dict[str, GroupSystem]:
    """Finite fixtures used across the test-suite (webs of at most 16 elements)."""
    T0, T1 = truncated_naturals(0), truncated_naturals(1)
    return {
        "trivial": trivial_system(),
        "W5": w5_system(),
        "Z2SYS-zero-edge": z2sys(0),
        "T1": constant_system(T1),
        "T2": constant_system(truncated_naturals(2)),
        "T3-Z3": constant_system(truncated_naturals(3), ab.cyclic(3)),
        "product": product_system(),
        "Z4-to-Z2": quotient_chain_system(),
        "T0-Klein": constant_system(T0, FinAbGroup((2, 2))),
        "T0xT0-Z2": constant_system(product_monoid(T0, T0), ab.cyclic(2)),
        "T0-Z2": divisibility_counterexample(),
        "T1xT0-Z3": constant_system(product_monoid(T1, T0), ab.cyclic(3)),
        "max-chain-Z2": constant_system(max_chain(2), ab.cyclic(2)),
    }


# ---------------------------------------------------------------------------
# bases


def max_chain(m: int) -> FiniteOrderedMonoid:
    """{0..m} with sum = max: an idempotent chain."""
    els = range(m + 1)
    return validate_monoid(
        [str(i) for i in els], [[max(a, b) for b in els] for a in els], [[a <= b for b in els] for a in els], 0,
        positively_ordered=True,
    )


def join_semilattice(family: Sequence[frozenset]) -> FiniteOrderedMonoid:
    """Union-closed family of sets containing the empty set; sum = union."""
    fam = sorted({frozenset(x) for x in family}, key=lambda x: (len(x), sorted(x)))
    idx = {x: i for i, x in enumerate(fam)}
    names = ["{" + ",".join(str(v) for v in sorted(x)) + "}" for x in fam]
    add = [[idx[a | b] for b in fam] for a in fam]
    leq = [[a <= b for b in fam] for a in fam]
    return validate_monoid(names, add, leq, idx[frozenset()], positively_ordered=True)


def random_join_semilattice(rng: random.Random, max_size: int = 6) -> FiniteOrderedMonoid:
    k = rng.randint(1, 3)
    universe = list(range(k))
    fam = {frozenset()}
    for _ in range(rng.randint(1, 4)):
        closed = fam | {frozenset(x for x in universe if rng.random() < 0.5)}
        changed = True
        while changed:
            changed = False
            for a, b in itertools.combinations(list(closed), 2):
                if a | b not in closed:
                    closed.add(a | b)
                    changed = True
        if len(closed) > max_size:
            break
        fam = closed
    return join_semilattice(sorted(fam, key=sorted))


def random_base(rng: random.Random, max_size: int = 6) -> FiniteOrderedMonoid:
    kind = rng.choice(["trunc", "trunc", "product", "join", "maxchain"])
    if kind == "trunc":
        return truncated_naturals(rng.randint(0, max_size - 2))
    if kind == "product":
        a = rng.randint(0, 1)
        b = 0 if a == 1 else rng.randint(0, 1)
        return product_monoid(truncated_naturals(a), truncated_naturals(b))
    if kind == "maxchain":
        return max_chain(rng.randint(0, max_size - 1))
    return random_join_semilattice(rng, max_size)


# ---------------------------------------------------------------------------
# systems


def _random_hom(rng: random.Random, A: FinAbGroup, B: FinAbGroup) -> ab.GroupHom:
    return rng.choice(ab.all_homs(A, B))


def _strict_between(S: FiniteOrderedMonoid, s: int, t: int) -> list[int]:
    return [u for u in S.elements if u not in (s, t) and S.leq(s, u) and S.leq(u, t)]


def random_system(rng: random.Random, base: FiniteOrderedMonoid, mode: str | None = None,
                  pool: Sequence[FinAbGroup] = FIBER_POOL) -> GroupSystem:
    mode = mode or rng.choice(["constant", "chain", "general", "general"])
    S = base
    if mode == "constant":
        return constant_system(S, rng.choice(pool))
    if mode == "chain":
        return _chain_system(rng, S, pool)
    for _ in range(20):
        out = _general_system(rng, S, pool)
        if out is not None:
            return out
    return _chain_system(rng, S, pool)


def _linear_extension(S: FiniteOrderedMonoid) -> list[int]:
    return sorted(S.elements, key=lambda s: sum(S.leq(u, s) for u in S.elements))


def _chain_system(rng: random.Random, S: FiniteOrderedMonoid, pool) -> GroupSystem:
    k = rng.randint(1, 3)
    groups = [ab.TRIVIAL] + [rng.choice(pool) for _ in range(k)]
    links = [_random_hom(rng, groups[i], groups[i + 1]) for i in range(k)]
    level = {}
    for s in _linear_extension(S):
        lo = max([level[u] for u in level if S.leq(u, s)], default=0)
        level[s] = 0 if s == S.zero else rng.randint(lo, k)

    def chain_map(i: int, j: int) -> ab.GroupHom:
        h = ab.identity_hom(groups[i])
        for m in range(i, j):
            h = ab.compose(links[m], h)
        return h

    fibers = [groups[level[s]] for s in S.elements]
    edges = {(s, t): chain_map(level[s], level[t]) for s in S.elements for t in S.elements if S.leq(s, t)}
    return validate_system(S, fibers, edges)


def _general_system(rng: random.Random, S: FiniteOrderedMonoid, pool) -> GroupSystem | None:
    fibers = [ab.TRIVIAL if s == S.zero else rng.choice(pool) for s in S.elements]
    pairs = [(s, t) for s in S.elements for t in S.elements if s != t and S.leq(s, t)]
    pairs.sort(key=lambda p: len(_strict_between(S, *p)))
    edges: dict = {(s, s): ab.identity_hom(fibers[s]) for s in S.elements}
    for s, t in pairs:
        mids = _strict_between(S, s, t)
        if not mids:
            edges[(s, t)] = _random_hom(rng, fibers[s], fibers[t])
            continue
        routes = [ab.compose(edges[(u, t)], edges[(s, u)]) for u in mids]
        if any(not ab.homs_equal(r, routes[0]) for r in routes[1:]):
            return None
        edges[(s, t)] = routes[0]
    return validate_system(S, fibers, edges)


# ---------------------------------------------------------------------------
# morphisms


def monoid_morphisms(S: FiniteOrderedMonoid, T: FiniteOrderedMonoid, limit: int = 200_000) -> list[tuple[int, ...]]:
    """All order-preserving monoid maps S -> T by brute force."""
    others = [s for s in S.elements if s != S.zero]
    if T.size ** len(others) > limit:
        raise ValueError("too many candidate maps")
    out = []
    for choice in itertools.product(T.elements, repeat=len(others)):
        alpha = [0] * S.size
        alpha[S.zero] = T.zero
        for s, v in zip(others, choice):
            alpha[s] = v
        if _is_morphism(S, T, alpha):
            out.append(tuple(alpha))
    return out


def _is_morphism(S, T, alpha) -> bool:
    for a in S.elements:
        for b in S.elements:
            if alpha[S.add(a, b)] != T.add(alpha[a], alpha[b]):
                return False
            if S.leq(a, b) and not T.leq(alpha[a], alpha[b]):
                return False
            if S.way_below(a, b) and not T.way_below(alpha[a], alpha[b]):
                return False
    return True


def random_eta(rng: random.Random, source: GroupSystem, target: GroupSystem, alpha: Sequence[int]) -> list[ab.GroupHom]:
    """Random natural family over ``alpha`` by randomized backtracking.

    The zero family is always natural, so the search cannot fail.
    """
    S = source.base
    order = _linear_extension(S)
    candidates = {}
    for s in order:
        homs = ab.all_homs(source.fiber(s), target.fiber(alpha[s]))
        rng.shuffle(homs)
        candidates[s] = homs
    chosen: dict[int, ab.GroupHom] = {}

    def consistent(s: int, h: ab.GroupHom) -> bool:
        for u, k in chosen.items():
            if S.leq(u, s):
                lhs = ab.compose(h, source.edge(u, s))
                rhs = ab.compose(target.edge(alpha[u], alpha[s]), k)
                if not ab.homs_equal(lhs, rhs):
                    return False
            if S.leq(s, u):
                lhs = ab.compose(k, source.edge(s, u))
                rhs = ab.compose(target.edge(alpha[s], alpha[u]), h)
                if not ab.homs_equal(lhs, rhs):
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        s = order[i]
        for h in candidates[s]:
            if consistent(s, h):
                chosen[s] = h
                if search(i + 1):
                    return True
                del chosen[s]
        return False

    if not search(0):
        raise AssertionError("no natural family found; the zero family should always work")
    return [chosen[s] for s in S.elements]


def random_morphism(rng: random.Random, source: GroupSystem, target: GroupSystem) -> SystemMorphism:
    alphas = monoid_morphisms(source.base, target.base)
    alpha = rng.choice(alphas)
    return validate_morphism(source, target, alpha, random_eta(rng, source, target, alpha))


def random_fixture_system(rng: random.Random, max_base: int = 6) -> GroupSystem:
    return random_system(rng, random_base(rng, max_base))


def all_fixture_systems(seed: int = 0, extra: int = 20, max_web: int = 16) -> dict[str, GroupSystem]:
    """Named fixtures plus random ones whose web fits in ``max_web`` elements."""
    out = dict(named_fixtures())
    rng = random.Random(seed)
    k = 0
    while k < extra:
        G = random_fixture_system(rng, 5)
        size = sum(f.order for f in G.fibers)
        if size <= max_web:
            out[f"random-{k}"] = G
            k += 1
    return out


def trivial_base_system() -> GroupSystem:
    return trivial_system(trivial_monoid())
