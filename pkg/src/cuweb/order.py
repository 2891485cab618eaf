"""Finite positively ordered monoids and order-theoretic axiom checkers.

A finite monoid is stored as tables over the index set ``0..n-1``; names are
metadata only.  In a finite carrier every increasing sequence is eventually
constant, so suprema exist and the way-below relation coincides with the
order.  :func:`sequence_way_below` recomputes way-below from the sequence
definition so that this coincidence is checked rather than assumed.

The axiom checkers work on any object following the :class:`OrderedStructure`
protocol.  Structures whose carrier is only a window of an infinite object
(``complete == False``) still get exhaustive checks over the window, but the
verdict is flagged as not certified.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Protocol, Sequence

import numpy as np

from .errors import (
    BadNeutral,
    IncompatibleSumOrder,
    InfeasibleEnumeration,
    NonAssociative,
    NonCommutative,
    NotPartialOrder,
    NotPositivelyOrdered,
)

INF = "∞"

AXIOMS = ("PC", "PD", "S0", "WC", "PWC", "O5", "O6", "AU", "AD")


class OrderedStructure(Protocol):
    """What the checkers need: a carrier with sum, order and way-below."""

    elements: tuple
    zero: Hashable
    complete: bool

    def add(self, x, y): ...

    def leq(self, x, y) -> bool: ...

    def way_below(self, x, y) -> bool: ...


@dataclass(frozen=True, eq=False)
class FiniteOrderedMonoid:
    """Validated finite ordered monoid on the index set ``0..n-1``.

    ``wb_table`` overrides the way-below relation.  It is only used by models
    that stand for an infinite object (the circle base); for genuinely finite
    monoids it is left as ``None`` and way-below equals the order.
    """

    names: tuple[str, ...]
    add_table: tuple[tuple[int, ...], ...]
    leq_table: tuple[tuple[bool, ...], ...]
    zero: int
    positively_ordered: bool
    wb_table: tuple[tuple[bool, ...], ...] | None = None
    labels: tuple | None = None
    complete: bool = field(default=True)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(len(self.names)))

    @property
    def size(self) -> int:
        return len(self.names)

    def add(self, x: int, y: int) -> int:
        return self.add_table[x][y]

    def leq(self, x: int, y: int) -> bool:
        return self.leq_table[x][y]

    def way_below(self, x: int, y: int) -> bool:
        if self.wb_table is None:
            return self.leq_table[x][y]
        return self.wb_table[x][y]

    def name(self, x: int) -> str:
        return self.names[x]

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def multiple(self, k: int, x: int) -> int:
        acc = self.zero
        for _ in range(k):
            acc = self.add_table[acc][x]
        return acc

    def infinite_multiple(self, x: int) -> int:
        """Stabilized value of ``n*x``; for positive ``x`` the sequence increases."""
        seen = []
        acc = x
        while acc not in seen:
            seen.append(acc)
            acc = self.add_table[acc][x]
        return acc

    @cached_property
    def leq_array(self) -> np.ndarray:
        return np.array(self.leq_table, dtype=bool).reshape(self.size, self.size)

    @cached_property
    def add_array(self) -> np.ndarray:
        return np.array(self.add_table, dtype=np.int64).reshape(self.size, self.size)

    def has_top(self) -> int | None:
        for t in self.elements:
            if all(self.leq_table[x][t] for x in self.elements):
                return t
        return None

    def __repr__(self) -> str:
        return f"FiniteOrderedMonoid({list(self.names)!r})"


def _as_bool_rows(table: Sequence[Sequence[Any]], n: int, what: str) -> tuple[tuple[bool, ...], ...]:
    if len(table) != n or any(len(row) != n for row in table):
        raise ValueError(f"{what} table must be {n}x{n}")
    return tuple(tuple(bool(v) for v in row) for row in table)


def validate_monoid(
    names: Sequence[str] | int,
    add: Sequence[Sequence[int]],
    leq: Sequence[Sequence[Any]],
    zero: int,
    positively_ordered: bool | None = None,
    way_below: Sequence[Sequence[Any]] | None = None,
    labels: Sequence | None = None,
) -> FiniteOrderedMonoid:
    """Check every monoid and order axiom exhaustively and build the structure.

    ``positively_ordered=None`` infers the flag; ``True`` demands it.
    Each failure raises with the violating tuple as witness.
    """
    if isinstance(names, int):
        names = [str(i) for i in range(names)]
    names = tuple(str(x) for x in names)
    n = len(names)
    if n == 0:
        raise ValueError("empty carrier")
    if len(add) != n or any(len(row) != n for row in add):
        raise ValueError(f"add table must be {n}x{n}")
    A = np.array(add, dtype=np.int64).reshape(n, n)
    if A.min() < 0 or A.max() >= n:
        raise ValueError("add table has values outside the carrier")
    if not 0 <= zero < n:
        raise ValueError("zero outside the carrier")
    L = np.array(_as_bool_rows(leq, n, "leq"), dtype=bool).reshape(n, n)

    # commutativity
    bad = np.argwhere(A != A.T)
    if len(bad):
        a, b = map(int, bad[0])
        raise NonCommutative(f"{names[a]}+{names[b]} != {names[b]}+{names[a]}", (a, b))
    # neutral
    for a in range(n):
        if A[zero, a] != a:
            raise BadNeutral(f"{names[zero]}+{names[a]} != {names[a]}", (zero, a))
    # associativity, chunked over the first argument
    for a in range(n):
        left = A[A[a]]  # left[b, c] = (a+b)+c
        right = A[a][A]  # right[b, c] = a+(b+c)
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = map(int, bad[0])
            raise NonAssociative(f"({names[a]}+{names[b]})+{names[c]} != {names[a]}+({names[b]}+{names[c]})", (a, b, c))
    # partial order
    for a in range(n):
        if not L[a, a]:
            raise NotPartialOrder(f"{names[a]} <= {names[a]} fails", (a,))
    bad = np.argwhere(L & L.T & ~np.eye(n, dtype=bool))
    if len(bad):
        a, b = map(int, bad[0])
        raise NotPartialOrder(f"antisymmetry fails at {names[a]}, {names[b]}", (a, b))
    Li = L.astype(np.int64)
    trans = (Li @ Li) > 0
    bad = np.argwhere(trans & ~L)
    if len(bad):
        a, c = map(int, bad[0])
        b = int(np.argmax(L[a] & L[:, c]))
        raise NotPartialOrder(f"transitivity fails at {names[a]} <= {names[b]} <= {names[c]}", (a, b, c))
    # compatibility: a <= b implies a+c <= b+c suffices, given transitivity
    for c in range(n):
        col = A[:, c]
        shifted = L[np.ix_(col, col)]
        bad = np.argwhere(L & ~shifted)
        if len(bad):
            a, b = map(int, bad[0])
            raise IncompatibleSumOrder(
                f"{names[a]} <= {names[b]} but {names[a]}+{names[c]} not <= {names[b]}+{names[c]}", (a, b, c, c)
            )
    is_pos = bool(L[zero].all())
    if positively_ordered is None:
        positively_ordered = is_pos
    elif positively_ordered and not is_pos:
        s = int(np.argmin(L[zero]))
        raise NotPositivelyOrdered(f"{names[zero]} <= {names[s]} fails", (s,))
    wb = None
    if way_below is not None:
        wb = _as_bool_rows(way_below, n, "way_below")
    return FiniteOrderedMonoid(
        names=names,
        add_table=tuple(tuple(int(v) for v in row) for row in A),
        leq_table=tuple(tuple(bool(v) for v in row) for row in L),
        zero=int(zero),
        positively_ordered=bool(positively_ordered),
        wb_table=wb,
        labels=tuple(labels) if labels is not None else None,
    )


def trivial_monoid() -> FiniteOrderedMonoid:
    return validate_monoid(["0"], [[0]], [[1]], 0, positively_ordered=True)


def truncated_naturals(M: int) -> FiniteOrderedMonoid:
    """{0,...,M,∞} with sums past M sent to ∞; ∞ is index M+1."""
    if M < 0:
        raise ValueError("M must be >= 0")
    inf = M + 1
    names = [str(i) for i in range(M + 1)] + [INF]

    def plus(a: int, b: int) -> int:
        if a == inf or b == inf or a + b > M:
            return inf
        return a + b

    add = [[plus(a, b) for b in range(M + 2)] for a in range(M + 2)]
    leq = [[a <= b for b in range(M + 2)] for a in range(M + 2)]
    return validate_monoid(names, add, leq, 0, positively_ordered=True)


def product_monoid(S: FiniteOrderedMonoid, T: FiniteOrderedMonoid) -> FiniteOrderedMonoid:
    """Componentwise product; element (a, b) has index a*|T| + b."""
    m = T.size
    pairs = [(a, b) for a in S.elements for b in T.elements]
    names = [f"({S.names[a]},{T.names[b]})" for a, b in pairs]
    add = [[S.add(a, c) * m + T.add(b, d) for (c, d) in pairs] for (a, b) in pairs]
    leq = [[S.leq(a, c) and T.leq(b, d) for (c, d) in pairs] for (a, b) in pairs]
    wb = None
    if S.wb_table is not None or T.wb_table is not None:
        wb = [[S.way_below(a, c) and T.way_below(b, d) for (c, d) in pairs] for (a, b) in pairs]
    return validate_monoid(
        names, add, leq, S.zero * m + T.zero,
        positively_ordered=S.positively_ordered and T.positively_ordered or None,
        way_below=wb, labels=pairs,
    )


def is_monoid_morphism(S: FiniteOrderedMonoid, T: FiniteOrderedMonoid, alpha: Sequence[int]) -> tuple | None:
    """Return a witness if ``alpha`` is not an order-preserving monoid map, else None."""
    if alpha[S.zero] != T.zero:
        return ("zero", S.zero)
    for a in S.elements:
        for b in S.elements:
            if alpha[S.add(a, b)] != T.add(alpha[a], alpha[b]):
                return ("add", a, b)
            if S.leq(a, b) and not T.leq(alpha[a], alpha[b]):
                return ("leq", a, b)
            if S.way_below(a, b) and not T.way_below(alpha[a], alpha[b]):
                return ("way_below", a, b)
    return None


# ---------------------------------------------------------------------------
# way-below from the sequence definition

CHAIN_LIMIT = 2_000_000


def sequence_way_below(S: OrderedStructure, limit: int = CHAIN_LIMIT) -> list[list[bool]]:
    """Way-below over the carrier computed from increasing sequences.

    x << y iff every increasing sequence whose supremum dominates y has a
    term dominating x.  In a finite poset the increasing sequences are, up
    to repetition, the finite strict chains followed by a constant tail, and
    the supremum is the last term; all such chains are enumerated.
    """
    E = list(S.elements)
    n = len(E)
    L = [[S.leq(a, b) for b in E] for a in E]
    down = [sum(1 << i for i in range(n) if L[i][j]) for j in range(n)]
    strictly_above = [[j for j in range(n) if j != i and L[i][j]] for i in range(n)]
    full = (1 << n) - 1
    # bad[c] collects x's escaping some chain that ends at c
    bad = [0] * n
    count = 0
    stack = [(i, down[i]) for i in range(n)]
    while stack:
        last, covered = stack.pop()
        count += 1
        if count > limit:
            raise InfeasibleEnumeration(f"more than {limit} chains")
        bad[last] |= full & ~covered
        for j in strictly_above[last]:
            stack.append((j, covered | down[j]))
    wb = [[True] * n for _ in range(n)]
    for y in range(n):
        escaping = 0
        for c in range(n):
            if L[y][c]:
                escaping |= bad[c]
        for x in range(n):
            if escaping >> x & 1:
                wb[x][y] = False
    return wb


def way_below(S: FiniteOrderedMonoid) -> list[list[bool]]:
    """Way-below table of a finite monoid; asserts it equals the order."""
    wb = sequence_way_below(S)
    for x in S.elements:
        for y in S.elements:
            if wb[x][y] != S.leq(x, y):
                raise AssertionError(f"way-below differs from order at ({x}, {y})")
    return wb


# ---------------------------------------------------------------------------
# axiom checkers


@dataclass(frozen=True)
class AxiomVerdict:
    """Outcome of an exhaustive check.

    ``witness`` is a failing tuple when ``holds`` is false.  ``certified`` is
    false when the carrier is only a window or a search was capped, in which
    case ``holds`` means "holds on what was searched".
    """

    axiom: str
    holds: bool
    witness: tuple | None = None
    certified: bool = True
    note: str = ""


@dataclass(frozen=True)
class Verdict:
    """Generic pass/fail outcome with a witness and free-form details."""

    name: str
    holds: bool
    witness: tuple | None = None
    details: dict = field(default_factory=dict)
    certified: bool = True


class _Tables:
    """Index-level caches of a structure for the checkers."""

    def __init__(self, S: OrderedStructure):
        self.S = S
        self.E = list(S.elements)
        self.n = len(self.E)
        self.idx = {e: i for i, e in enumerate(self.E)}
        E, n = self.E, self.n
        self.L = [[S.leq(a, b) for b in E] for a in E]
        self.W = [[S.way_below(a, b) for b in E] for a in E]
        self.sum = [[S.add(a, b) for b in E] for a in E]
        # index of each sum when it lies in the carrier, else -1
        self.sum_idx = [[self.idx.get(v, -1) for v in row] for row in self.sum]
        self.zero = self.idx[S.zero]
        self.down = [sum(1 << i for i in range(n) if self.L[i][j]) for j in range(n)]
        self.up = [sum(1 << j for j in range(n) if self.L[i][j]) for i in range(n)]
        self.wb_below = [sum(1 << i for i in range(n) if self.W[i][j]) for j in range(n)]
        self._down_cache: dict = {}

    def leq_el(self, x, y) -> bool:
        ix, iy = self.idx.get(x, -1), self.idx.get(y, -1)
        if ix >= 0 and iy >= 0:
            return self.L[ix][iy]
        return self.S.leq(x, y)

    def down_of(self, v) -> int:
        """Bitmask of carrier elements below an arbitrary element ``v``."""
        i = self.idx.get(v, -1)
        if i >= 0:
            return self.down[i]
        if v not in self._down_cache:
            self._down_cache[v] = sum(1 << k for k in range(self.n) if self.S.leq(self.E[k], v))
        return self._down_cache[v]


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _multiple_states(T: _Tables, cap: int | None):
    """States n -> (n*x for every x), up to the first repetition.

    Returns (states, exhaustive) where states[k] holds the (k+1)-multiples.
    Conditions involving consecutive multiples only need n below the index
    of the repeated state, since from there on the pairs recur periodically.
    """
    S = T.S
    states = [tuple(T.E)]
    seen = {states[0]: 0}
    while True:
        nxt = tuple(S.add(v, x) for v, x in zip(states[-1], T.E))
        if nxt in seen:
            states.append(nxt)
            return states, True
        seen[nxt] = len(states)
        states.append(nxt)
        if cap is not None and len(states) > cap:
            return states, False


def check_axiom(S: OrderedStructure, axiom: str, max_multiple: int | None = None) -> AxiomVerdict:
    """Exhaustively decide an axiom on the carrier and return a verdict.

    AU and AD quantify over all n >= 1; the search runs until the vector of
    all multiples repeats, which makes it complete on complete structures.
    On windowed structures it stops after ``max_multiple`` steps (default:
    carrier size) and the verdict is not certified.
    """
    if axiom not in AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    T = _Tables(S)
    E, n, L, W = T.E, T.n, T.L, T.W
    complete = bool(getattr(S, "complete", True))

    def verdict(holds: bool, witness: tuple | None = None, certified: bool = complete, note: str = "") -> AxiomVerdict:
        return AxiomVerdict(axiom, holds, witness, certified, note)

    z = T.zero
    if axiom == "PC":
        for t in range(n):
            if not L[z][t]:
                continue
            for s in range(n):
                if L[s][t] and not T.leq_el(S.zero, T.sum[s][t]):
                    return verdict(False, (E[s], E[t]))
        return verdict(True)
    if axiom == "PD":
        for s in range(n):
            if not any(T.leq_el(S.zero, T.sum[s][p]) for p in range(n)):
                return verdict(False, (E[s],))
        return verdict(True)
    if axiom == "S0":
        for s in range(n):
            for t in range(n):
                if T.sum_idx[s][t] == z and (s != z or t != z):
                    return verdict(False, (E[s], E[t]))
        return verdict(True)
    if axiom == "WC":
        for s in range(n):
            for t in range(n):
                st = T.sum_idx[s][t]
                for v in range(n):
                    if W[s][v]:
                        continue
                    vt = T.sum_idx[v][t]
                    if st >= 0 and vt >= 0:
                        prem = W[st][vt]
                    else:
                        prem = S.way_below(T.sum[s][t], T.sum[v][t])
                    if prem:
                        return verdict(False, (E[s], E[t], E[v]))
        return verdict(True)
    if axiom == "PWC":
        for s in range(n):
            if W[s][z]:
                continue
            for t in range(n):
                st = T.sum_idx[s][t]
                prem = W[st][t] if st >= 0 else S.way_below(T.sum[s][t], E[t])
                if prem:
                    return verdict(False, (E[s], E[t]))
        return verdict(True)
    if axiom == "O5":
        for s in range(n):
            for t in range(n):
                if not L[s][t]:
                    continue
                ok = 0  # s' admitting a witness w
                for w in range(n):
                    if not T.leq_el(E[t], T.sum[s][w]):
                        continue
                    for sp in _bits(T.wb_below[s] & ~ok):
                        if T.leq_el(T.sum[sp][w], E[t]):
                            ok |= 1 << sp
                missing = T.wb_below[s] & ~ok
                if missing:
                    sp = next(iter(_bits(missing)))
                    return verdict(False, (E[sp], E[s], E[t]))
        return verdict(True)
    if axiom == "O6":
        common = [[T.down[x] & T.down[y] for y in range(n)] for x in range(n)]
        for x in range(n):
            need = T.wb_below[x]
            if not need:
                continue
            for y in range(n):
                cy = list(_bits(common[x][y]))
                for zz in range(n):
                    if not T.leq_el(E[x], T.sum[y][zz]):
                        continue
                    covered = 0
                    for s in cy:
                        for t in _bits(common[x][zz]):
                            covered |= T.down_of(T.sum[s][t])
                        if not need & ~covered:
                            break
                    missing = need & ~covered
                    if missing:
                        xp = next(iter(_bits(missing)))
                        return verdict(False, (E[xp], E[x], E[y], E[zz]))
        return verdict(True)
    cap = max_multiple if max_multiple is not None else (None if complete else n)
    states, exhaustive = _multiple_states(T, cap)
    certified = complete and exhaustive
    note = "" if exhaustive else f"multiples searched up to n={len(states) - 1}"
    last_n = len(states) - 1  # states[k] holds (k+1)-multiples; n runs to last_n
    if axiom == "AU":
        for k in range(1, last_n + 1):
            big, small = states[k], states[k - 1]  # (k+1)x and kx
            for x in range(n):
                for y in range(n):
                    if not L[x][y] and T.leq_el(big[x], small[y]):
                        return verdict(False, (E[x], E[y], k), certified, note)
        return verdict(True, None, certified, note)
    if axiom == "AD":
        for k in range(1, last_n + 1):
            nw, n1w = states[k - 1], states[k]
            for x in range(n):
                ok = 0
                for w in range(n):
                    if T.leq_el(nw[w], E[x]):
                        ok |= T.down_of(n1w[w])
                missing = T.wb_below[x] & ~ok
                if missing:
                    xp = next(iter(_bits(missing)))
                    return verdict(False, (E[xp], E[x], k), certified, note)
        return verdict(True, None, certified, note)
    raise AssertionError(axiom)


def is_violation(S: OrderedStructure, axiom: str, witness: tuple) -> bool:
    """Re-evaluate an axiom's defining formula at a witness.

    Written directly from the formulas, independently of :func:`check_axiom`,
    so that failure witnesses can be cross-checked.
    """
    E = list(S.elements)
    add, leq, wb, zero = S.add, S.leq, S.way_below, S.zero

    def mult(k, x):
        acc = zero
        for _ in range(k):
            acc = add(acc, x)
        return acc

    if axiom == "PC":
        s, t = witness
        return leq(zero, t) and leq(s, t) and not leq(zero, add(s, t))
    if axiom == "PD":
        (s,) = witness
        return not any(leq(zero, add(s, p)) for p in E)
    if axiom == "S0":
        s, t = witness
        return add(s, t) == zero and not (s == zero and t == zero)
    if axiom == "WC":
        s, t, v = witness
        return wb(add(s, t), add(v, t)) and not wb(s, v)
    if axiom == "PWC":
        s, t = witness
        return wb(add(s, t), t) and not wb(s, zero)
    if axiom == "O5":
        sp, s, t = witness
        if not (leq(s, t) and wb(sp, s)):
            return False
        return not any(leq(add(sp, w), t) and leq(t, add(s, w)) for w in E)
    if axiom == "O6":
        xp, x, y, z = witness
        if not (wb(xp, x) and leq(x, add(y, z))):
            return False
        lows_y = [s for s in E if leq(s, x) and leq(s, y)]
        lows_z = [t for t in E if leq(t, x) and leq(t, z)]
        return not any(leq(xp, add(s, t)) for s in lows_y for t in lows_z)
    if axiom == "AU":
        x, y, k = witness
        return k >= 1 and leq(mult(k + 1, x), mult(k, y)) and not leq(x, y)
    if axiom == "AD":
        xp, x, k = witness
        if not (k >= 1 and wb(xp, x)):
            return False
        return not any(leq(mult(k, w), x) and leq(xp, mult(k + 1, w)) for w in E)
    raise ValueError(f"unknown axiom {axiom!r}")
