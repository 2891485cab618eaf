"""Systems of abelian groups over a finite ordered monoid, and their morphisms.

A system assigns a group to every base element and a homomorphism to every
comparable pair ``s <= t``.  Edges are stored for all comparable pairs, so
validation is pure table checking.  Homomorphisms are compared through their
canonical matrices, which is exact also for Z factors: two maps agree iff
they agree on the basis vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import abgroups as ab
from .abgroups import FinAbGroup, GroupHom
from .errors import (
    DomainMismatch,
    FunctorialityFailure,
    MissingEdge,
    NaturalitySquareFailure,
    NontrivialFiberAtZero,
    NotComposable,
    NotIdentityOnDiagonal,
    NotMonoidMorphism,
    NotOrderPreserving,
)
from .order import AxiomVerdict, FiniteOrderedMonoid, trivial_monoid


@dataclass(frozen=True, eq=False)
class GroupSystem:
    base: FiniteOrderedMonoid
    fibers: tuple[FinAbGroup, ...]
    edges: Mapping[tuple[int, int], GroupHom]

    def fiber(self, s: int) -> FinAbGroup:
        return self.fibers[s]

    def edge(self, s: int, t: int) -> GroupHom:
        return self.edges[(s, t)]

    def push(self, s: int, t: int, g) -> tuple[int, ...]:
        """Image of ``g`` in ``G(t)`` along ``s <= t``."""
        return ab.apply(self.edges[(s, t)], g)

    @property
    def finite_fibers(self) -> bool:
        return all(G.is_finite for G in self.fibers)

    def __repr__(self) -> str:
        return "GroupSystem(" + ", ".join(f"{self.base.names[s]}:{G}" for s, G in enumerate(self.fibers)) + ")"


def _as_hom(A: FinAbGroup, B: FinAbGroup, h) -> GroupHom:
    if isinstance(h, GroupHom):
        if h.domain != A or h.codomain != B:
            raise DomainMismatch(f"edge {h.domain}->{h.codomain} where {A}->{B} expected")
        return h
    return ab.hom(A, B, h)


def validate_system(
    base: FiniteOrderedMonoid,
    fibers: Sequence[FinAbGroup] | Mapping[int, FinAbGroup],
    edges: Mapping[tuple[int, int], GroupHom | Sequence[Sequence[int]]],
) -> GroupSystem:
    """Check fiber at zero, identities on the diagonal and functoriality."""
    n = base.size
    if isinstance(fibers, Mapping):
        fibers = [fibers[s] for s in range(n)]
    fibers = tuple(G if isinstance(G, FinAbGroup) else FinAbGroup(tuple(G)) for G in fibers)
    if len(fibers) != n:
        raise ValueError("one fiber per base element required")
    if not fibers[base.zero].is_trivial:
        raise NontrivialFiberAtZero(f"fiber at zero is {fibers[base.zero]}", (base.zero,))
    table: dict[tuple[int, int], GroupHom] = {}
    for s in range(n):
        for t in range(n):
            if not base.leq(s, t):
                continue
            if (s, t) not in edges:
                if s == t:
                    table[(s, t)] = ab.identity_hom(fibers[s])
                    continue
                raise MissingEdge(f"no edge for {base.names[s]} <= {base.names[t]}", (s, t))
            table[(s, t)] = _as_hom(fibers[s], fibers[t], edges[(s, t)])
    for s in range(n):
        if not ab.homs_equal(table[(s, s)], ab.identity_hom(fibers[s])):
            raise NotIdentityOnDiagonal(f"edge at {base.names[s]} is not the identity", (s,))
    for s in range(n):
        for t in range(n):
            if not base.leq(s, t):
                continue
            for u in range(n):
                if base.leq(t, u) and not ab.homs_equal(ab.compose(table[(t, u)], table[(s, t)]), table[(s, u)]):
                    raise FunctorialityFailure(
                        f"edge({base.names[t]},{base.names[u]}) ∘ edge({base.names[s]},{base.names[t]}) "
                        f"!= edge({base.names[s]},{base.names[u]})",
                        (s, t, u),
                    )
    return GroupSystem(base, fibers, table)


def constant_system(base: FiniteOrderedMonoid, G: FinAbGroup = ab.TRIVIAL) -> GroupSystem:
    """Fiber ``G`` away from zero with identity edges; trivial at zero."""
    fibers = [ab.TRIVIAL if s == base.zero else G for s in range(base.size)]
    edges = {}
    for s in range(base.size):
        for t in range(base.size):
            if base.leq(s, t):
                if s == base.zero:
                    edges[(s, t)] = ab.zero_hom(fibers[s], fibers[t])
                else:
                    edges[(s, t)] = ab.identity_hom(G)
    return validate_system(base, fibers, edges)


def trivial_system(base: FiniteOrderedMonoid | None = None) -> GroupSystem:
    return constant_system(base if base is not None else trivial_monoid())


@dataclass(frozen=True, eq=False)
class SystemMorphism:
    source: GroupSystem
    target: GroupSystem
    alpha: tuple[int, ...]
    eta: tuple[GroupHom, ...]

    def __call__(self, s: int, g):
        return self.alpha[s], ab.apply(self.eta[s], g)


def validate_morphism(
    source: GroupSystem,
    target: GroupSystem,
    alpha: Sequence[int],
    eta: Sequence[GroupHom | Sequence[Sequence[int]]] | Mapping[int, GroupHom | Sequence[Sequence[int]]],
) -> SystemMorphism:
    """Check that ``alpha`` is a monoid map preserving <= and <<, and naturality of ``eta``."""
    S, T = source.base, target.base
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != S.size or any(not 0 <= a < T.size for a in alpha):
        raise ValueError("alpha must map every source element into the target base")
    if alpha[S.zero] != T.zero:
        raise NotMonoidMorphism("zero is not preserved", (S.zero,))
    for a in range(S.size):
        for b in range(S.size):
            if alpha[S.add(a, b)] != T.add(alpha[a], alpha[b]):
                raise NotMonoidMorphism(f"alpha({S.names[a]}+{S.names[b]}) != alpha({S.names[a]})+alpha({S.names[b]})", (a, b))
            if S.leq(a, b) and not T.leq(alpha[a], alpha[b]):
                raise NotOrderPreserving(f"{S.names[a]} <= {S.names[b]} not preserved", (a, b))
            if S.way_below(a, b) and not T.way_below(alpha[a], alpha[b]):
                raise NotOrderPreserving(f"{S.names[a]} << {S.names[b]} not preserved", (a, b))
    if isinstance(eta, Mapping):
        eta = [eta[s] for s in range(S.size)]
    if len(eta) != S.size:
        raise ValueError("one fiber map per source element required")
    eta = tuple(_as_hom(source.fiber(s), target.fiber(alpha[s]), h) for s, h in enumerate(eta))
    for s in range(S.size):
        for t in range(S.size):
            if not S.leq(s, t):
                continue
            left = ab.compose(eta[t], source.edge(s, t))
            right = ab.compose(target.edge(alpha[s], alpha[t]), eta[s])
            if not ab.homs_equal(left, right):
                raise NaturalitySquareFailure(f"square at ({S.names[s]},{S.names[t]}) does not commute", (s, t))
    return SystemMorphism(source, target, alpha, eta)


def identity_morphism(system: GroupSystem) -> SystemMorphism:
    n = system.base.size
    return SystemMorphism(system, system, tuple(range(n)), tuple(ab.identity_hom(G) for G in system.fibers))


def collapse_morphism(system: GroupSystem, target: GroupSystem | None = None) -> SystemMorphism:
    """The morphism onto the trivial system over ``{0}``."""
    target = target if target is not None else trivial_system()
    if target.base.size != 1:
        raise ValueError("collapse target must live over the one-point monoid")
    return validate_morphism(
        system, target, [target.base.zero] * system.base.size,
        [ab.zero_hom(G, target.fiber(target.base.zero)) for G in system.fibers],
    )


def compose_morphisms(second: SystemMorphism, first: SystemMorphism) -> SystemMorphism:
    """``second ∘ first``: base maps compose, fiber maps as ``ν_{α(s)} ∘ η_s``."""
    if first.target is not second.source:
        raise NotComposable("target of the first morphism is not the source of the second")
    alpha = tuple(second.alpha[a] for a in first.alpha)
    eta = tuple(ab.compose(second.eta[first.alpha[s]], first.eta[s]) for s in range(first.source.base.size))
    return SystemMorphism(first.source, second.target, alpha, eta)


def morphisms_equal(m1: SystemMorphism, m2: SystemMorphism) -> bool:
    return m1.alpha == m2.alpha and all(ab.homs_equal(a, b) for a, b in zip(m1.eta, m2.eta))


def check_stability(system: GroupSystem) -> AxiomVerdict:
    """Whether every edge ``s <= k*s`` is a group isomorphism.

    ``k*s`` is iterated until it repeats, which covers every k.
    """
    S = system.base
    for s in S.elements:
        seen = set()
        k, ks = 1, s
        while ks not in seen:
            seen.add(ks)
            if S.leq(s, ks) and not ab.is_isomorphism(system.edge(s, ks)):
                return AxiomVerdict("STABLE", False, (s, k))
            k, ks = k + 1, S.add(ks, s)
    return AxiomVerdict("STABLE", True)
