"""Positive cone, maximal elements, ideals, quotients and exact sequences.

Everything here works on finite structures following the ordered-structure
protocol (monoids, webs, and sub-structures of either).  Maps between
structures are any callables with ``source`` and ``target`` attributes;
:class:`StructMap` wraps a plain function.

Exactness follows the pair-set formalism: for ``f: A -> B``,

    im f  = {(b1, b2) : b1 <= f(a) + b2 for some a}
    ker f = {(a1, a2) : f(a1) <= f(a2)}

and ``A -> B -> C`` is exact at ``B`` when ``ker g == im f``.  The outer
positions of ``0 -> A -> B -> C -> 0`` use the maps from and to the trivial
structure: exact at ``A`` means ``ker f`` is the order of ``A``, exact at
``C`` means ``im g`` is all of ``C x C``.

In a finite carrier every increasing sequence is eventually constant, so
closure under suprema of increasing sequences is automatic and ideals are
just the positively directed, order-hereditary, positively stable
submonoids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .abgroups import is_isomorphism
from .errors import IdealNotKilled, NoMaximalElements, NotAnIdeal, NotPositive, NotSinglyGenerated, TheoremViolation
from .order import FiniteOrderedMonoid, Verdict, validate_monoid


def element_name(S, x) -> str:
    name = getattr(S, "name", None)
    return name(x) if name is not None else str(x)


class SubStructure:
    """A subset of a structure closed under the parent's sum."""

    def __init__(self, parent, elements: Iterable, zero=None, label: str = ""):
        self.parent = parent
        members = set(elements)
        self.elements = tuple(x for x in parent.elements if x in members)
        self.zero = parent.zero if zero is None else zero
        self.complete = getattr(parent, "complete", True)
        self.label = label
        self._members = frozenset(self.elements)

    def add(self, x, y):
        return self.parent.add(x, y)

    def leq(self, x, y) -> bool:
        return self.parent.leq(x, y)

    def way_below(self, x, y) -> bool:
        return self.parent.way_below(x, y)

    def name(self, x) -> str:
        return element_name(self.parent, x)

    def contains(self, x) -> bool:
        return x in self._members

    @property
    def size(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return "{" + ", ".join(self.name(x) for x in self.elements) + "}"


class MaxGroup:
    """Maximal elements as an abelian group, ordered discretely.

    The neutral element is the largest positive element, not the zero of the
    parent.  Every element is compact for the discrete order.
    """

    def __init__(self, parent, elements: Sequence, neutral):
        self.parent = parent
        self.elements = tuple(elements)
        self.zero = neutral
        self.complete = getattr(parent, "complete", True)

    def add(self, x, y):
        return self.parent.add(x, y)

    def leq(self, x, y) -> bool:
        return x == y

    def way_below(self, x, y) -> bool:
        return x == y

    def name(self, x) -> str:
        return element_name(self.parent, x)

    def inverse(self, x):
        for y in self.elements:
            if self.parent.add(x, y) == self.zero:
                return y
        raise TheoremViolation("maximal element without inverse", (x,))

    @property
    def size(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return "MaxGroup{" + ", ".join(self.name(x) for x in self.elements) + "}"


class TrivialStructure:
    """The one-element structure, used at the ends of short sequences."""

    elements = ("0",)
    zero = "0"
    complete = True

    def add(self, x, y):
        return "0"

    def leq(self, x, y) -> bool:
        return True

    def way_below(self, x, y) -> bool:
        return True

    def name(self, x) -> str:
        return "0"


ZERO = TrivialStructure()


@dataclass
class StructMap:
    source: Any
    target: Any
    fn: Callable
    label: str = ""

    def __call__(self, x):
        return self.fn(x)


def inclusion(sub, parent) -> StructMap:
    return StructMap(sub, parent, lambda x: x, "inclusion")


def zero_in(T) -> StructMap:
    return StructMap(ZERO, T, lambda x: T.zero, "0")


def zero_out(S) -> StructMap:
    return StructMap(S, ZERO, lambda x: "0", "0")


def map_defect(f) -> tuple | None:
    """First failure of f being an ordered monoid map preserving <<, or None."""
    S, T = f.source, f.target
    if f(S.zero) != T.zero:
        return ("zero", S.zero)
    img = {x: f(x) for x in S.elements}
    for x in S.elements:
        for y in S.elements:
            if f(S.add(x, y)) != T.add(img[x], img[y]):
                return ("add", x, y)
            if S.leq(x, y) and not T.leq(img[x], img[y]):
                return ("leq", x, y)
            if S.way_below(x, y) and not T.way_below(img[x], img[y]):
                return ("way_below", x, y)
    return None


def maps_equal(f, g) -> tuple | None:
    """First element where ``f`` and ``g`` differ on the common source."""
    for x in f.source.elements:
        if f(x) != g(x):
            return (x,)
    return None


def compose_maps(g, f) -> StructMap:
    return StructMap(f.source, g.target, lambda x: g(f(x)), f"{getattr(g, 'label', '')}∘{getattr(f, 'label', '')}")


# ---------------------------------------------------------------------------
# positive cone and maximal elements


def positive_cone(S) -> SubStructure:
    """``{x : 0 <= x}``.  For a web, checked to be a copy of the base."""
    P = SubStructure(S, [x for x in S.elements if S.leq(S.zero, x)], label="+")
    system = getattr(S, "system", None)
    if system is not None:
        base = system.base
        expected = {(s, system.push(base.zero, s, S.zero[1])) for s in base.elements}
        if set(P.elements) != expected:
            raise TheoremViolation("positive cone of a web is not the image of the base")
    return P


def maximal_set(S) -> list:
    return [x for x in S.elements if all(y == x for y in S.elements if S.leq(x, y))]


def maximal_elements(S) -> MaxGroup | None:
    """Maximal elements with their group structure, or None if there are none.

    Checks the standard facts exhaustively: the positive cone has a largest
    element exactly when maximal elements exist, that element is the group
    neutral, the set is an absorbing group, and every ``x`` has a unique
    ``p_x`` among the maximal elements with ``x + p_x`` equal to the neutral.
    """
    mx = maximal_set(S)
    P = [x for x in S.elements if S.leq(S.zero, x)]
    tops = [e for e in P if all(S.leq(y, e) for y in P)]
    if not mx:
        if tops:
            raise TheoremViolation("positive cone has a largest element but no maximal elements exist")
        return None
    if len(tops) != 1:
        raise TheoremViolation("maximal elements exist but the positive cone has no largest element")
    e = tops[0]
    if e not in mx:
        raise TheoremViolation("largest positive element is not maximal", (e,))
    mset = set(mx)
    for x in S.elements:
        for m in mx:
            if S.add(x, m) not in mset:
                raise TheoremViolation("maximal elements are not absorbing", (x, m))
        partners = [p for p in mx if S.add(x, p) == e]
        if len(partners) != 1:
            raise TheoremViolation("no unique p_x with x + p_x = e", (x,))
    for m in mx:
        if S.add(m, e) != m:
            raise TheoremViolation("largest positive element is not neutral on maximal elements", (m,))
    return MaxGroup(S, mx, e)


def require_max(S) -> MaxGroup:
    M = maximal_elements(S)
    if M is None:
        raise NoMaximalElements("structure has no maximal elements")
    return M


# ---------------------------------------------------------------------------
# pair sets and exactness


def image_set(f) -> frozenset:
    T = f.target
    imgs = {f(x) for x in f.source.elements}
    return frozenset(
        (t1, t2) for t1 in T.elements for t2 in T.elements if any(T.leq(t1, T.add(a, t2)) for a in imgs)
    )


def kernel_set(f) -> frozenset:
    S, T = f.source, f.target
    img = {x: f(x) for x in S.elements}
    return frozenset((a, b) for a in S.elements for b in S.elements if T.leq(img[a], img[b]))


def is_exact_at(f, g) -> bool:
    """Exactness of ``A -f-> B -g-> C`` at ``B``."""
    return kernel_set(g) == image_set(f)


@dataclass
class SequenceVerdict:
    positions: list[str]
    exact: list[bool]
    split: bool | None = None
    witnesses: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.exact) and self.split is not False


def short_exact(f, g, names: Sequence[str] = ("A", "B", "C"), section=None) -> SequenceVerdict:
    """Exactness of ``0 -> A -f-> B -g-> C -> 0`` at all three spots."""
    A, C = f.source, g.target
    checks = [
        (zero_in(A), f),
        (f, g),
        (g, zero_out(C)),
    ]
    exact = [is_exact_at(a, b) for a, b in checks]
    split = None
    witnesses = {}
    if section is not None:
        bad = maps_equal(compose_maps(g, section), StructMap(C, C, lambda x: x))
        split = bad is None
        if bad:
            witnesses["section"] = bad
    return SequenceVerdict(list(names), exact, split, witnesses)


def is_split_exact(f, g, section) -> bool:
    return short_exact(f, g, section=section).holds


def is_order_embedding(f) -> bool:
    S, T = f.source, f.target
    return all(S.leq(a, b) == T.leq(f(a), f(b)) for a in S.elements for b in S.elements)


def is_surjective(f) -> bool:
    return {f(x) for x in f.source.elements} == set(f.target.elements)


def is_order_hereditary(T, subset) -> bool:
    sub = set(subset)
    return all(y in sub for x in sub for y in T.elements if T.leq(y, x))


def check_exactness_characterizations(f) -> Verdict:
    """Order-embedding iff left exact; surjective iff right exact with hereditary image."""
    emb = is_order_embedding(f)
    left = is_exact_at(zero_in(f.source), f)
    surj = is_surjective(f)
    right = is_exact_at(f, zero_out(f.target))
    hered = is_order_hereditary(f.target, {f(x) for x in f.source.elements})
    ok = (emb == left) and (surj == (right and hered))
    return Verdict("exactness-characterizations", ok, details={
        "order_embedding": emb, "left_exact": left, "surjective": surj,
        "right_exact": right, "image_hereditary": hered,
    })


# ---------------------------------------------------------------------------
# split sequence


@dataclass
class SplitSequence:
    positive: SubStructure
    maximal: MaxGroup
    i: StructMap
    j: StructMap
    q: StructMap
    verdict: SequenceVerdict


def split_sequence(S) -> SplitSequence:
    """``0 -> S_+ -i-> S -j-> S_max -> 0`` with ``j(s) = s + e`` and section ``q``."""
    M = require_max(S)
    P = positive_cone(S)
    e = M.zero
    i = StructMap(P, S, lambda x: x, "i")
    j = StructMap(S, M, lambda x: S.add(x, e), "j")
    q = StructMap(M, S, lambda x: x, "q")
    for f in (i, j):
        bad = map_defect(f)
        if bad is not None:
            raise TheoremViolation(f"{f.label} is not a morphism", bad)
    verdict = short_exact(i, j, ("S+", "S", "Smax"), section=q)
    return SplitSequence(P, M, i, j, q, verdict)


def restrict_morphism(f) -> tuple[StructMap, StructMap]:
    """``(alpha_+, alpha_max)`` with ``alpha_max(x) = alpha(x) + e_{T_max}``."""
    S, T = f.source, f.target
    MS, MT = require_max(S), require_max(T)
    PS, PT = positive_cone(S), positive_cone(T)
    for x in PS.elements:
        if not PT.contains(f(x)):
            raise TheoremViolation("positive element mapped outside the positive cone", (x,))
    plus = StructMap(PS, PT, f, "alpha+")
    mx = StructMap(MS, MT, lambda x: T.add(f(x), MT.zero), "alpha_max")
    for g in (plus, mx):
        bad = map_defect(g)
        if bad is not None:
            raise TheoremViolation(f"{g.label} is not a morphism", bad)
    return plus, mx


# ---------------------------------------------------------------------------
# ideals


class _Masks:
    def __init__(self, S):
        self.S = S
        self.E = list(S.elements)
        self.n = len(self.E)
        self.idx = {x: i for i, x in enumerate(self.E)}
        n, E = self.n, self.E
        self.L = [[S.leq(a, b) for b in E] for a in E]
        self.sum = [[self.idx.get(S.add(a, b), -1) for b in E] for a in E]
        self.zero = self.idx[S.zero]
        self.below = [sum(1 << i for i in range(n) if self.L[i][j] and i != j) for j in range(n)]
        self.positive_partner = [
            sum(1 << p for p in range(n) if self.sum[s][p] >= 0 and self.L[self.zero][self.sum[s][p]]) for s in range(n)
        ]
        # summands[u]: everything that appears in some decomposition u = s + t
        self.summands = [0] * n
        for s in range(n):
            for t in range(n):
                u = self.sum[s][t]
                if u >= 0:
                    self.summands[u] |= (1 << s) | (1 << t)

    def to_set(self, mask: int) -> frozenset:
        return frozenset(self.E[i] for i in range(self.n) if mask >> i & 1)

    def to_mask(self, subset) -> int:
        return sum(1 << self.idx[x] for x in subset)

    def ideal_failure(self, mask: int) -> str | None:
        n = self.n
        if not mask >> self.zero & 1:
            return "does not contain zero"
        members = [i for i in range(n) if mask >> i & 1]
        for i in members:
            if self.below[i] & ~mask:
                return "not order-hereditary"
        for a in members:
            for b in members:
                u = self.sum[a][b]
                if u < 0 or not mask >> u & 1:
                    return "not closed under sums"
        for a in members:
            if not self.positive_partner[a] & mask:
                return "not positively directed"
        for u in members:
            if self.summands[u] & ~mask:
                return "not positively stable"
        return None

    def down_sets(self) -> list[int]:
        """All order-hereditary subsets, via a linear extension."""
        order = sorted(range(self.n), key=lambda i: bin(self.below[i]).count("1"))
        out = []

        def rec(k: int, mask: int):
            if k == len(order):
                out.append(mask)
                return
            i = order[k]
            rec(k + 1, mask)
            if not self.below[i] & ~mask:
                rec(k + 1, mask | (1 << i))

        rec(0, 0)
        return out


def ideal_failure(S, subset) -> str | None:
    return _Masks(S).ideal_failure(_Masks(S).to_mask(subset))


def is_ideal(S, subset) -> Verdict:
    reason = ideal_failure(S, subset)
    return Verdict("ideal", reason is None, details={"reason": reason} if reason else {})


def infinite_multiple(S, x):
    """Stabilized value of ``n*x``; raises if it does not stabilize."""
    seen = [x]
    acc = S.add(x, x)
    while acc not in seen:
        seen.append(acc)
        if len(seen) > len(S.elements) + 1:
            raise ValueError("multiples do not stabilize in the carrier")
        acc = S.add(acc, x)
    if acc != seen[-1]:
        raise ValueError("multiples cycle without stabilizing")
    return acc


def ideal_generated_by(S, x) -> frozenset:
    """``I_x = {y : y + z <= ∞x for some z}`` for positive ``x``."""
    if not S.leq(S.zero, x):
        raise NotPositive(f"{element_name(S, x)} is not positive", (x,))
    big = infinite_multiple(S, x)
    return frozenset(y for y in S.elements if any(S.leq(S.add(y, z), big) for z in S.elements))


def enumerate_ideals(S) -> list[frozenset]:
    m = _Masks(S)
    return [m.to_set(d) for d in m.down_sets() if m.ideal_failure(d) is None]


def singly_generated(S, I: frozenset) -> Any | None:
    """A positive generator of ``I`` if there is one (its largest positive element)."""
    positives = [x for x in S.elements if x in I and S.leq(S.zero, x)]
    for x in positives:
        if ideal_generated_by(S, x) == I:
            return x
    return None


@dataclass
class IdealLattice:
    ideals: list[frozenset]
    hasse: list[tuple[int, int]]
    generators: list[Any]
    positive_ideals: list[frozenset]
    star: dict[int, int]
    verdict: Verdict

    @property
    def singly_generated(self) -> list[int]:
        return [k for k, g in enumerate(self.generators) if g is not None]


def _hasse(sets: list[frozenset]) -> list[tuple[int, int]]:
    out = []
    for a, A in enumerate(sets):
        for b, B in enumerate(sets):
            if a != b and A < B and not any(A < C < B for C in sets):
                out.append((a, b))
    return out


def star_ideal(S, J: Iterable) -> frozenset:
    """``J* = {s : s + t in J for some t}`` for an ideal ``J`` of the positive cone."""
    J = set(J)
    return frozenset(s for s in S.elements if any(S.add(s, t) in J for t in S.elements))


def ideal_lattice(S) -> IdealLattice:
    """Ideals of ``S`` and of ``S_+``, with the bijection ``J -> J*`` checked.

    Both lattices are enumerated independently; the verdict certifies that
    ``J*`` is an ideal of ``S``, that intersecting with ``S_+`` inverts it,
    that the correspondence is an inclusion-preserving bijection, and that it
    matches singly generated ideals on both sides.
    """
    ideals = enumerate_ideals(S)
    P = positive_cone(S)
    pos_ideals = enumerate_ideals(P)
    gens = [singly_generated(S, I) for I in ideals]
    pos_gens = [singly_generated(P, J) for J in pos_ideals]
    where = {I: k for k, I in enumerate(ideals)}
    star: dict[int, int] = {}
    failures = []
    pos_set = set(P.elements)
    for k, J in enumerate(pos_ideals):
        Js = star_ideal(S, J)
        if Js not in where:
            failures.append(("star-not-ideal", k))
            continue
        star[k] = where[Js]
        if frozenset(x for x in Js if x in pos_set) != J:
            failures.append(("inverse", k))
        if (pos_gens[k] is None) != (gens[where[Js]] is None):
            failures.append(("singly-generated", k))
    if sorted(star.values()) != list(range(len(ideals))):
        failures.append(("not-bijective",))
    for a in star:
        for b in star:
            if (pos_ideals[a] <= pos_ideals[b]) != (ideals[star[a]] <= ideals[star[b]]):
                failures.append(("order", a, b))
    verdict = Verdict("lattice-isomorphism", not failures, failures[0] if failures else None,
                      {"ideals": len(ideals), "positive_ideals": len(pos_ideals)})
    return IdealLattice(ideals, _hasse(ideals), gens, pos_ideals, star, verdict)


# ---------------------------------------------------------------------------
# quotients


@dataclass
class Quotient:
    monoid: FiniteOrderedMonoid
    classes: list[frozenset]
    representatives: list[Any]
    projection: StructMap
    ideal: frozenset
    exactness: SequenceVerdict


def quotient(S, I) -> Quotient:
    """``S/I`` from the preorder ``x <=_I y iff x <= y + z`` for some ``z`` in ``I``.

    Classes are labelled by their least element in carrier order.  The
    result is validated as an ordered monoid and ``0 -> I -> S -> S/I -> 0``
    is checked for exactness.
    """
    I = frozenset(I)
    reason = ideal_failure(S, I)
    if reason is not None:
        raise NotAnIdeal(f"not an ideal: {reason}")
    E = list(S.elements)
    Ilist = [z for z in E if z in I]
    pre = {(x, y): any(S.leq(x, S.add(y, z)) for z in Ilist) for x in E for y in E}
    cls_of: dict = {}
    reps: list = []
    for x in E:
        for k, r in enumerate(reps):
            if pre[(x, r)] and pre[(r, x)]:
                cls_of[x] = k
                break
        else:
            cls_of[x] = len(reps)
            reps.append(x)
    classes = [frozenset(x for x in E if cls_of[x] == k) for k in range(len(reps))]
    add = [[cls_of[S.add(a, b)] for b in reps] for a in reps]
    for a in E:
        for b in E:
            if cls_of[S.add(a, b)] != add[cls_of[a]][cls_of[b]]:
                raise TheoremViolation("quotient sum is not well defined", (a, b))
    leq = [[pre[(a, b)] for b in reps] for a in reps]
    names = [element_name(S, r) for r in reps]
    Q = validate_monoid(names, add, leq, cls_of[S.zero], labels=reps)
    pi = StructMap(S, Q, lambda x: cls_of[x], "pi")
    bad = map_defect(pi)
    if bad is not None:
        raise TheoremViolation("projection is not a morphism", bad)
    sub = SubStructure(S, I, label="I")
    verdict = short_exact(inclusion(sub, S), pi, ("I", "S", "S/I"))
    return Quotient(Q, classes, reps, pi, I, verdict)


@dataclass
class Factorization:
    induced: StructMap
    surjective: bool
    original_surjective: bool


def factor_through_quotient(f, I) -> Factorization:
    """Induced map on ``S/I`` when ``f`` kills ``I``."""
    S, T = f.source, f.target
    for z in I:
        if f(z) != T.zero:
            raise IdealNotKilled(f"{element_name(S, z)} is not sent to zero", (z,))
    Q = quotient(S, I)
    values = {}
    for x in S.elements:
        k = Q.projection(x)
        if k in values and values[k] != f(x):
            raise TheoremViolation("induced map is not well defined", (x,))
        values[k] = f(x)
    induced = StructMap(Q.monoid, T, lambda k: values[k], "induced")
    bad = map_defect(induced)
    if bad is not None:
        raise TheoremViolation("induced map is not a morphism", bad)
    surj = set(values.values()) == set(T.elements)
    return Factorization(induced, surj, is_surjective(f))


# ---------------------------------------------------------------------------
# morphism diagram


def _max_of_ideal(S, I: frozenset) -> tuple[SubStructure, MaxGroup]:
    sub = SubStructure(S, I, label="I")
    M = maximal_elements(sub)
    if M is None:
        raise NotSinglyGenerated("ideal has no maximal elements")
    return sub, M


def ideal_morphism_diagram(f, I) -> Verdict:
    """Check the ladder linking the split sequences of ``I``, ``I_alpha``, ``S``, ``T``.

    ``I_alpha`` is the ideal generated by the image of the largest positive
    element of ``I``.  Squares built from ``i``, ``j``, the restrictions of
    ``f`` and the inclusions are compared pointwise; the sections ``q`` only
    enter through the split condition of each row.
    """
    S, T = f.source, f.target
    I = frozenset(I)
    if ideal_failure(S, I) is not None:
        raise NotAnIdeal("not an ideal")
    if singly_generated(S, I) is None:
        raise NotSinglyGenerated("ideal is not singly generated")
    subI, MI = _max_of_ideal(S, I)
    Ia = ideal_generated_by(T, f(MI.zero))
    subJ, MJ = _max_of_ideal(T, Ia)
    MS, MT = require_max(S), require_max(T)
    failures: list = []
    rows = {}
    for label, X in (("I", subI), ("I_alpha", subJ), ("S", S), ("T", T)):
        seq = split_sequence(X)
        rows[label] = seq
        if not seq.verdict.holds:
            failures.append(("row", label))
    for x in I:
        if not subJ.contains(f(x)):
            failures.append(("restriction", x))
    f_I = StructMap(subI, subJ, f, "alpha|")
    f_Imax = StructMap(MI, MJ, lambda x: T.add(f(x), MJ.zero), "alpha|max")
    f_max = StructMap(MS, MT, lambda x: T.add(f(x), MT.zero), "alpha_max")
    inc_max_S = StructMap(MI, MS, lambda x: S.add(x, MS.zero))
    inc_max_T = StructMap(MJ, MT, lambda x: T.add(x, MT.zero))
    squares = {
        # alpha against i and j in the I-row and the S-row
        "I:i": (lambda x: f(rows["I"].i(x)), lambda x: rows["I_alpha"].i(f(x)), rows["I"].positive.elements),
        "I:j": (lambda x: f_Imax(rows["I"].j(x)), lambda x: rows["I_alpha"].j(f_I(x)), subI.elements),
        "S:i": (lambda x: f(rows["S"].i(x)), lambda x: rows["T"].i(f(x)), rows["S"].positive.elements),
        "S:j": (lambda x: f_max(rows["S"].j(x)), lambda x: rows["T"].j(f(x)), S.elements),
        # inclusions against i and j
        "incl:I->S:j": (lambda x: inc_max_S(rows["I"].j(x)), lambda x: rows["S"].j(x), subI.elements),
        "incl:J->T:j": (lambda x: inc_max_T(rows["I_alpha"].j(x)), lambda x: rows["T"].j(x), subJ.elements),
        # alpha and its restrictions against the inclusions
        "alpha:whole": (lambda x: f_I(x), lambda x: f(x), subI.elements),
        "alpha:max": (lambda x: inc_max_T(f_Imax(x)), lambda x: f_max(inc_max_S(x)), MI.elements),
    }
    for name, (left, right, dom) in squares.items():
        for x in dom:
            if left(x) != right(x):
                failures.append(("square", name, x))
                break
    for g in (f_I, f_Imax, f_max):
        bad = map_defect(g)
        if bad is not None:
            failures.append(("morphism", g.label, bad))
    return Verdict("ideal-morphism-diagram", not failures, failures[0] if failures else None,
                   {"I_alpha": sorted(Ia, key=list(T.elements).index), "rows": {k: v.verdict.exact for k, v in rows.items()}})


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Block:
    ideal: frozenset  # base ideal
    top: int  # largest element of the base ideal
    members: list
    product_form: bool


def decompose(W) -> list[Block]:
    """Split a web into blocks by the base ideal generated by the first coordinate.

    Each block is compared with ``(elements generating the ideal) x G(top)``
    through ``(s, g) -> (s, G(s <= top)(g))``; ``product_form`` records
    whether that map is a bijection.
    """
    system = W.system
    base = system.base
    blocks: dict[frozenset, Block] = {}
    gen_of = {s: ideal_generated_by(base, s) for s in base.elements}
    for I in dict.fromkeys(gen_of[s] for s in base.elements):
        top = infinite_multiple(base, next(s for s in base.elements if gen_of[s] == I))
        members = [x for x in W.elements if gen_of[x[0]] == I]
        base_part = [s for s in base.elements if gen_of[s] == I]
        product = all(is_isomorphism(system.edge(s, top)) for s in base_part)
        blocks[I] = Block(I, top, members, product)
    covered = [x for b in blocks.values() for x in b.members]
    if sorted(covered, key=W.elements.index) != list(W.elements):
        raise TheoremViolation("blocks do not partition the carrier")
    return list(blocks.values())

