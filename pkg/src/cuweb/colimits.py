"""Colimits of finite directed diagrams of group systems.

A finite directed index poset has a maximum, so the colimit of such a
diagram is the object at the top with the arrows into it as cocone.  The
work in this module is verification: the universal property (with an
exhaustive uniqueness search on small inputs), the (L1)/(L2)
characterization of limit cocones on the webbed diagram, and continuity of
webbing, i.e. that the comparison map from the colimit of webs to the web
of the colimit is a surjective order-embedding.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from . import abgroups as ab
from .errors import IncoherentArrows, NaturalitySquareFailure, NotACocone, NotDirected
from .fixtures import monoid_morphisms, random_base, random_morphism, random_system
from .order import Verdict
from .structure import maximal_elements, positive_cone
from .systems import (
    GroupSystem,
    SystemMorphism,
    compose_morphisms,
    identity_morphism,
    morphisms_equal,
    validate_morphism,
)
from .webbing import WebMorphism, web

UNIQUENESS_GUARD = 20_000


@dataclass(eq=False)
class SystemDiagram:
    nodes: tuple
    leq: Mapping[tuple, bool]
    objects: Mapping[Any, GroupSystem]
    arrows: Mapping[tuple, SystemMorphism]
    top: Any = None

    def le(self, i, j) -> bool:
        return bool(self.leq[(i, j)])

    def arrow(self, i, j) -> SystemMorphism:
        return self.arrows[(i, j)]


def validate_diagram(nodes: Sequence, leq_pairs: Sequence[tuple], objects: Mapping, arrows: Mapping) -> SystemDiagram:
    """Check the index is a directed partial order and the arrows are coherent.

    ``leq_pairs`` lists the strict relations; reflexive and transitive
    closure is taken.  Missing identity arrows are filled in.
    """
    nodes = tuple(nodes)
    leq = {(i, j): i == j for i in nodes for j in nodes}
    for i, j in leq_pairs:
        leq[(i, j)] = True
    changed = True
    while changed:
        changed = False
        for i, j, k in itertools.product(nodes, repeat=3):
            if leq[(i, j)] and leq[(j, k)] and not leq[(i, k)]:
                leq[(i, k)] = True
                changed = True
    for i in nodes:
        for j in nodes:
            if i != j and leq[(i, j)] and leq[(j, i)]:
                raise NotDirected(f"index is not antisymmetric at {i}, {j}", (i, j))
    for i in nodes:
        for j in nodes:
            if not any(leq[(i, k)] and leq[(j, k)] for k in nodes):
                raise NotDirected(f"{i} and {j} have no upper bound", (i, j))
    tops = [t for t in nodes if all(leq[(i, t)] for i in nodes)]
    if len(tops) != 1:
        raise NotDirected("finite directed index without a maximum")
    full = dict(arrows)
    for i in nodes:
        if (i, i) not in full:
            full[(i, i)] = identity_morphism(objects[i])
    for (i, j), m in full.items():
        if not leq[(i, j)]:
            raise IncoherentArrows(f"arrow {i}->{j} against the index order", (i, j))
    for i in nodes:
        for j in nodes:
            if not leq[(i, j)]:
                continue
            if (i, j) not in full:
                raise IncoherentArrows(f"missing arrow {i}->{j}", (i, j))
            m = full[(i, j)]
            if m.source is not objects[i] or m.target is not objects[j]:
                raise IncoherentArrows(f"arrow {i}->{j} has the wrong ends", (i, j))
        if not morphisms_equal(full[(i, i)], identity_morphism(objects[i])):
            raise IncoherentArrows(f"arrow {i}->{i} is not the identity", (i, i))
    for i, j, k in itertools.product(nodes, repeat=3):
        if leq[(i, j)] and leq[(j, k)]:
            if not morphisms_equal(compose_morphisms(full[(j, k)], full[(i, j)]), full[(i, k)]):
                raise IncoherentArrows(f"arrows {i}->{j}->{k} and {i}->{k} disagree", (i, j, k))
    return SystemDiagram(nodes, leq, dict(objects), full, tops[0])


@dataclass
class Cocone:
    target: GroupSystem
    maps: dict


def colimit(diagram: SystemDiagram) -> Cocone:
    """The object at the maximum with the arrows into it."""
    m = diagram.top
    return Cocone(diagram.objects[m], {i: diagram.arrow(i, m) for i in diagram.nodes})


def is_cocone(diagram: SystemDiagram, cocone: Cocone) -> tuple | None:
    for i in diagram.nodes:
        if cocone.maps[i].source is not diagram.objects[i] or cocone.maps[i].target is not cocone.target:
            return ("ends", i)
    for i in diagram.nodes:
        for j in diagram.nodes:
            if diagram.le(i, j):
                if not morphisms_equal(compose_morphisms(cocone.maps[j], diagram.arrow(i, j)), cocone.maps[i]):
                    return ("commute", i, j)
    return None


def all_system_morphisms(source: GroupSystem, target: GroupSystem, guard: int = UNIQUENESS_GUARD) -> list[SystemMorphism] | None:
    """Every system morphism, or None if the search space exceeds ``guard``."""
    if not (source.finite_fibers and target.finite_fibers):
        return None
    S = source.base
    try:
        alphas = monoid_morphisms(S, target.base, limit=guard)
    except ValueError:
        return None
    out = []
    for alpha in alphas:
        choices = [ab.all_homs(source.fiber(s), target.fiber(alpha[s])) for s in S.elements]
        total = 1
        for c in choices:
            total *= len(c)
        if total > guard:
            return None
        for eta in itertools.product(*choices):
            try:
                out.append(validate_morphism(source, target, alpha, eta))
            except NaturalitySquareFailure:
                pass
    return out


def check_universal_property(diagram: SystemDiagram, candidate: Cocone, guard: int = UNIQUENESS_GUARD) -> Verdict:
    """Mediating morphism from the colimit to ``candidate``, with uniqueness.

    The mediating morphism is the candidate's map at the top node; it is
    checked to factor every leg.  Uniqueness is certified by listing all
    system morphisms between the two objects when that list is small.
    """
    bad = is_cocone(diagram, candidate)
    if bad is not None:
        raise NotACocone("candidate does not commute with the diagram", bad)
    col = colimit(diagram)
    med = candidate.maps[diagram.top]
    for i in diagram.nodes:
        if not morphisms_equal(compose_morphisms(med, col.maps[i]), candidate.maps[i]):
            return Verdict("universal-property", False, (i,), {"mediating": med})
    everything = all_system_morphisms(col.target, candidate.target, guard)
    if everything is None:
        return Verdict("universal-property", True, details={"mediating": med, "unique": None}, certified=False)
    compatible = [
        m for m in everything
        if all(morphisms_equal(compose_morphisms(m, col.maps[i]), candidate.maps[i]) for i in diagram.nodes)
    ]
    unique = len(compatible) == 1 and morphisms_equal(compatible[0], med)
    return Verdict("universal-property", unique, None if unique else ("count", len(compatible)),
                   {"mediating": med, "unique": unique, "searched": len(everything)})


# ---------------------------------------------------------------------------
# webbed diagrams and (L1)/(L2)


@dataclass(eq=False)
class WebbedDiagram:
    diagram: SystemDiagram
    webs: dict
    maps: dict  # (i, j) -> WebMorphism


def web_diagram(diagram: SystemDiagram, window: int | None = None) -> WebbedDiagram:
    webs = {}
    for i in diagram.nodes:
        obj = diagram.objects[i]
        # nodes sharing an object share its web
        webs[i] = next((webs[k] for k in webs if diagram.objects[k] is obj), None) or web(obj, window)
    maps = {(i, j): WebMorphism(m, webs[i], webs[j]) for (i, j), m in diagram.arrows.items()}
    return WebbedDiagram(diagram, webs, maps)


@dataclass
class WebCocone:
    target: Any  # structure
    maps: dict  # i -> callable into target


def colimit_web_cocone(wd: WebbedDiagram) -> WebCocone:
    top = wd.diagram.top
    return WebCocone(wd.webs[top], {i: wd.maps[(i, top)] for i in wd.diagram.nodes})


class Padded:
    """A structure with an absorbing element adjoined above everything."""

    TOP = ("⊤",)

    def __init__(self, parent):
        self.parent = parent
        self.elements = tuple(parent.elements) + (self.TOP,)
        self.zero = parent.zero
        self.complete = getattr(parent, "complete", True)

    def add(self, x, y):
        if x == self.TOP or y == self.TOP:
            return self.TOP
        return self.parent.add(x, y)

    def leq(self, x, y) -> bool:
        if y == self.TOP:
            return True
        if x == self.TOP:
            return False
        return self.parent.leq(x, y)

    def way_below(self, x, y) -> bool:
        if y == self.TOP:
            return True
        if x == self.TOP:
            return False
        return self.parent.way_below(x, y)

    def name(self, x) -> str:
        return "⊤" if x == self.TOP else self.parent.name(x)


def padded_candidate(wd: WebbedDiagram) -> WebCocone:
    """The limit cocone with an extra top adjoined to its target; maps unchanged."""
    c = colimit_web_cocone(wd)
    return WebCocone(Padded(c.target), c.maps)


def check_L1L2(wd: WebbedDiagram, cocone: WebCocone) -> Verdict:
    """Evaluate (L1) and (L2) exhaustively on finite carriers."""
    D = wd.diagram
    T = cocone.target
    images = [(i, x, cocone.maps[i](x)) for i in D.nodes for x in wd.webs[i].elements]
    l1_witness = None
    for sp in T.elements:
        for s in T.elements:
            if not T.way_below(sp, s):
                continue
            if not any(T.way_below(sp, y) and T.way_below(y, s) for _, _, y in images):
                l1_witness = (sp, s)
                break
        if l1_witness:
            break
    l2_witness = None
    for i in D.nodes:
        W = wd.webs[i]
        sig = cocone.maps[i]
        above = [j for j in D.nodes if D.le(i, j)]
        for s in W.elements:
            for t in W.elements:
                if not T.leq(sig(s), sig(t)):
                    continue
                for sp in W.elements:
                    if not W.way_below(sp, s):
                        continue
                    if not any(wd.webs[j].way_below(wd.maps[(i, j)](sp), wd.maps[(i, j)](t)) for j in above):
                        l2_witness = (i, sp, s, t)
                        break
                if l2_witness:
                    break
            if l2_witness:
                break
        if l2_witness:
            break
    holds = l1_witness is None and l2_witness is None
    failed = [name for name, w in (("L1", l1_witness), ("L2", l2_witness)) if w is not None]
    return Verdict("L1L2", holds, l1_witness or l2_witness, {"failed": failed, "L1": l1_witness is None, "L2": l2_witness is None})


def check_webbing_continuity(diagram: SystemDiagram, window: int | None = None) -> Verdict:
    """Build the comparison map from the colimit of webs to the web of the colimit.

    The map is assembled from the universal property, i.e. from the rule
    ``gamma(lambda_i(x)) = web(canonical_i)(x)`` over every node and element;
    it must be well defined, surjective and an order-embedding.  Positive
    cones and maximal groups of both sides are compared as well.
    """
    wd = web_diagram(diagram, window)
    lim = colimit_web_cocone(wd)
    col = colimit(diagram)
    target = web(col.target, window)
    gamma: dict = {}
    for i in diagram.nodes:
        cross = WebMorphism(col.maps[i], wd.webs[i], target)
        for x in wd.webs[i].elements:
            y = lim.maps[i](x)
            v = cross(x)
            if gamma.setdefault(y, v) != v:
                return Verdict("continuity", False, ("not-well-defined", y))
    missing = [y for y in lim.target.elements if y not in gamma]
    if missing:
        return Verdict("continuity", False, ("not-covered", missing[0]))
    surjective = set(gamma.values()) == set(target.elements)
    S, T = lim.target, target
    embedding = all(S.leq(a, b) == T.leq(gamma[a], gamma[b]) for a in S.elements for b in S.elements)
    cones = len(positive_cone(S).elements) == len(positive_cone(T).elements)
    MS, MT = maximal_elements(S), maximal_elements(T)
    maxes = (MS is None) == (MT is None) and (MS is None or MS.size == MT.size)
    holds = surjective and embedding and cones and maxes
    return Verdict("continuity", holds, None if holds else ("gamma",), {
        "surjective": surjective, "order_embedding": embedding, "positive_cones": cones, "maximal_groups": maxes,
    })


# ---------------------------------------------------------------------------
# random diagrams

SHAPES = {
    "single": (("a",), ()),
    "chain2": (("a", "b"), (("a", "b"),)),
    "chain3": (("a", "b", "c"), (("a", "b"), ("b", "c"))),
    "chain4": (("a", "b", "c", "d"), (("a", "b"), ("b", "c"), ("c", "d"))),
    "diamond": (("a", "b", "c", "d"), (("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"))),
    "vee": (("a", "b", "c"), (("a", "c"), ("b", "c"))),
    "tree": (("a", "b", "c", "d"), (("a", "b"), ("b", "d"), ("c", "d"))),
}


def random_diagram(rng: random.Random, max_base: int = 5, shape: str | None = None) -> SystemDiagram:
    """Random coherent diagram: nodes are sent monotonically onto a chain of systems.

    The chain ``X_0 -> X_1 -> ...`` uses random morphisms; the arrow between
    two nodes is the composite between their levels, so coherence holds by
    construction and is re-validated.
    """
    shape = shape or rng.choice(sorted(SHAPES))
    nodes, pairs = SHAPES[shape]
    # longest-path levels give a monotone map onto the chain
    depth = {i: 0 for i in nodes}
    for _ in nodes:
        for i, j in pairs:
            depth[j] = max(depth[j], depth[i] + 1)
    k = max(depth.values())
    chain = [random_system(rng, random_base(rng, max_base))]
    links = []
    for _ in range(k):
        nxt = random_system(rng, random_base(rng, max_base))
        links.append(random_morphism(rng, chain[-1], nxt))
        chain.append(nxt)
    level = {i: depth[i] for i in nodes}
    objects = {i: chain[level[i]] for i in nodes}

    def composite(a: int, b: int) -> SystemMorphism:
        m = identity_morphism(chain[a])
        for l in range(a, b):
            m = compose_morphisms(links[l], m)
        return m

    arrows = {}
    closure = _closure(nodes, pairs)
    for i in nodes:
        for j in nodes:
            if closure[(i, j)]:
                arrows[(i, j)] = composite(level[i], level[j])
    return validate_diagram(nodes, pairs, objects, arrows)


def _closure(nodes, pairs) -> dict:
    leq = {(i, j): i == j for i in nodes for j in nodes}
    for p in pairs:
        leq[p] = True
    for k in nodes:
        for i in nodes:
            for j in nodes:
                if leq[(i, k)] and leq[(k, j)]:
                    leq[(i, j)] = True
    return leq


def single_diagram(system: GroupSystem) -> SystemDiagram:
    return validate_diagram(("a",), (), {"a": system}, {})
