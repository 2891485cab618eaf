"""The webbing construction.

From a system ``G`` over a positively ordered monoid ``S`` we build the set
of pairs ``(s, g)`` with ``g`` in ``G(s)``, ordered by

    (s, g) <= (t, h)  iff  s <= t and G(s<=t)(g) = h

and added by pushing both fiber elements to the fiber of ``s + t``.  The same
recipe turns a system morphism ``(alpha, eta)`` into the map
``(s, g) -> (alpha(s), eta_s(g))``.

Fibers containing Z are enumerated on a window ``[-B, B]``; the result is
then marked incomplete and checkers report "holds on window".
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import abgroups as ab
from .errors import FiberNotEnumerable, NotPositivelyOrdered, TheoremViolation
from .order import AxiomVerdict, Verdict, check_axiom, sequence_way_below
from .systems import GroupSystem, SystemMorphism, check_stability, compose_morphisms

Pair = tuple  # (base index, fiber tuple)


def format_fiber(g: tuple) -> str:
    if len(g) == 0:
        return "0"
    if len(g) == 1:
        return str(g[0])
    return "(" + ",".join(str(v) for v in g) + ")"


class WebbedSemigroup:
    """Materialized web of a group system (or of a window of it).

    Elements are pairs ``(s, g)``; any valid pair can be passed to ``add``,
    ``leq`` and ``way_below`` even if it lies outside the window.
    """

    def __init__(self, system: GroupSystem, window: int | None = None):
        self.system = system
        self.base = system.base
        self.window = window
        pairs = []
        partial = False
        for s in system.base.elements:
            try:
                enum = ab.elements(system.fiber(s), window)
            except ab.Unbounded as exc:
                raise FiberNotEnumerable(f"fiber at {system.base.names[s]} is infinite; pass a window", (s,)) from exc
            partial = partial or enum.partial
            pairs.extend((s, g) for g in enum.items)
        self.elements: tuple[Pair, ...] = tuple(pairs)
        self.complete = not partial
        self.zero: Pair = (system.base.zero, system.fiber(system.base.zero).zero())
        self.index = {x: i for i, x in enumerate(self.elements)}
        self._add: dict = {}

    @property
    def size(self) -> int:
        return len(self.elements)

    def add(self, x: Pair, y: Pair) -> Pair:
        key = (x, y)
        out = self._add.get(key)
        if out is None:
            (s, g), (t, h) = x, y
            u = self.base.add(s, t)
            G = self.system.fiber(u)
            out = (u, G.add(self.system.push(s, u, g), self.system.push(t, u, h)))
            self._add[key] = out
        return out

    def leq(self, x: Pair, y: Pair) -> bool:
        (s, g), (t, h) = x, y
        return self.base.leq(s, t) and self.system.push(s, t, g) == h

    def way_below(self, x: Pair, y: Pair) -> bool:
        (s, g), (t, h) = x, y
        return self.base.way_below(s, t) and self.system.push(s, t, g) == h

    def contains(self, x: Pair) -> bool:
        s, g = x
        return 0 <= s < self.base.size and self.system.fiber(s).contains(g)

    def multiple(self, k: int, x: Pair) -> Pair:
        acc = self.zero
        for _ in range(k):
            acc = self.add(acc, x)
        return acc

    def name(self, x: Pair) -> str:
        return f"({self.base.names[x[0]]},{format_fiber(x[1])})"

    def parse(self, text: str) -> Pair:
        """Inverse of :meth:`name` for elements in the carrier."""
        for x in self.elements:
            if self.name(x) == text:
                return x
        raise KeyError(text)

    def __repr__(self) -> str:
        return "WebbedSemigroup{" + ", ".join(self.name(x) for x in self.elements) + "}"


def web(system: GroupSystem, window: int | None = None, verify: bool = True) -> WebbedSemigroup:
    """Build the web and verify (PC), (PD), (S0) and compactness of zero."""
    if not system.base.positively_ordered:
        raise NotPositivelyOrdered("webbing needs a positively ordered base")
    W = WebbedSemigroup(system, window)
    if verify:
        for tag in ("PC", "PD", "S0"):
            v = check_axiom(W, tag)
            if not v.holds:
                raise TheoremViolation(f"web fails {tag}", v.witness)
        if not W.way_below(W.zero, W.zero):
            raise TheoremViolation("neutral element of the web is not compact", (W.zero,))
    return W


def web_way_below(W: WebbedSemigroup) -> list[list[bool]]:
    """Way-below over the carrier from the pairwise formula."""
    return [[W.way_below(x, y) for y in W.elements] for x in W.elements]


def web_way_below_matches_sequences(W: WebbedSemigroup) -> Verdict:
    """Compare the formula with way-below from increasing sequences."""
    formula = web_way_below(W)
    oracle = sequence_way_below(W)
    for i, x in enumerate(W.elements):
        for j, y in enumerate(W.elements):
            if formula[i][j] != oracle[i][j]:
                return Verdict("way_below", False, (x, y), {"formula": formula[i][j]})
    return Verdict("way_below", True)


class WebMorphism:
    """``(s, g) -> (alpha(s), eta_s(g))`` between two webs."""

    def __init__(self, morphism: SystemMorphism, source: WebbedSemigroup, target: WebbedSemigroup):
        self.morphism = morphism
        self.source = source
        self.target = target

    def __call__(self, x: Pair) -> Pair:
        s, g = x
        return self.morphism.alpha[s], ab.apply(self.morphism.eta[s], g)

    def table(self) -> dict:
        return {x: self(x) for x in self.source.elements}


def web_morphism(
    morphism: SystemMorphism,
    source: WebbedSemigroup | None = None,
    target: WebbedSemigroup | None = None,
    window: int | None = None,
    verify: bool = True,
) -> WebMorphism:
    """Apply the webbing functor to a system morphism.

    With ``verify`` the result is checked to preserve zero, sums, order and
    way-below on the source carrier; a failure would be an implementation
    bug and raises :class:`TheoremViolation`.
    """
    source = source if source is not None else web(morphism.source, window)
    target = target if target is not None else web(morphism.target, window)
    f = WebMorphism(morphism, source, target)
    if verify:
        bad = morphism_defect(f)
        if bad is not None:
            raise TheoremViolation(f"webbed morphism fails {bad[0]}", bad[1:])
    return f


def morphism_defect(f) -> tuple | None:
    """First failure of zero/sum/order/way-below preservation, or None."""
    S, T = f.source, f.target
    if f(S.zero) != T.zero:
        return ("zero", S.zero)
    for x in S.elements:
        fx = f(x)
        for y in S.elements:
            fy = f(y)
            if f(S.add(x, y)) != T.add(fx, fy):
                return ("add", x, y)
            if S.leq(x, y) and not T.leq(fx, fy):
                return ("leq", x, y)
            if S.way_below(x, y) and not T.way_below(fx, fy):
                return ("way_below", x, y)
    return None


def check_web_functoriality(m1: SystemMorphism, m2: SystemMorphism, window: int | None = None) -> Verdict:
    """Web of ``m2 ∘ m1`` against the composite of the webbed maps, pointwise."""
    composite = compose_morphisms(m2, m1)
    W1 = web(m1.source, window, verify=False)
    W2 = web(m1.target, window, verify=False)
    W3 = web(m2.target, window, verify=False)
    f1 = WebMorphism(m1, W1, W2)
    f2 = WebMorphism(m2, W2, W3)
    f = WebMorphism(composite, W1, W3)
    for x in W1.elements:
        if f(x) != f2(f1(x)):
            return Verdict("functoriality", False, (x,), {"composite": f(x), "stepwise": f2(f1(x))})
    return Verdict("functoriality", True, details={"checked": W1.size})


PRESERVATION_TAGS = {
    "WC->PWC": ("WC", "PWC", False),
    "O5": ("O5", "O5", False),
    "AD": ("AD", "AD", True),
}


@dataclass(frozen=True)
class PreservationVerdict:
    tag: str
    hypothesis: AxiomVerdict
    stability: AxiomVerdict | None
    conclusion: AxiomVerdict

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis.holds and (self.stability is None or self.stability.holds)

    @property
    def violation(self) -> bool:
        """Hypotheses hold on the base but the conclusion fails on the web."""
        return self.hypothesis_holds and not self.conclusion.holds


def check_preservation(system: GroupSystem, tag: str, window: int | None = None, strict: bool = False) -> PreservationVerdict:
    """Evaluate a hypothesis on the base and the matching conclusion on the web.

    Tags: ``"WC->PWC"``, ``"O5"``, ``"AD"`` (the latter also requires the
    system to be stable).  With ``strict`` a violation raises.
    """
    if tag not in PRESERVATION_TAGS:
        raise ValueError(f"unknown preservation tag {tag!r}; expected one of {sorted(PRESERVATION_TAGS)}")
    hyp_tag, concl_tag, needs_stability = PRESERVATION_TAGS[tag]
    hyp = check_axiom(system.base, hyp_tag)
    stab = check_stability(system) if needs_stability else None
    concl = check_axiom(web(system, window), concl_tag)
    out = PreservationVerdict(tag, hyp, stab, concl)
    if strict and out.violation:
        raise TheoremViolation(f"{tag}: hypothesis holds on the base but the web fails", concl.witness)
    return out


def webs_in(elements: Iterable[Pair], W: WebbedSemigroup) -> bool:
    return all(W.contains(x) for x in elements)
