"""Finitely generated abelian groups in invariant-factor form.

A group is a list of factors ``d_i``: ``0`` is a copy of Z, ``d >= 1`` is
Z/d.  Elements are integer tuples reduced modulo each finite factor.
Homomorphisms are integer matrices acting on column vectors, with one row
per codomain factor and one column per domain factor.

>>> A = FinAbGroup((2, 3))
>>> len(elements(A).items)
6
>>> h = hom(FinAbGroup((4,)), FinAbGroup((2,)), [[1]])
>>> apply(h, (3,))
(1,)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainMismatch, NotComposable, NotWellDefined, Unbounded

DEFAULT_WINDOW = 8


@dataclass(frozen=True)
class FinAbGroup:
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        if any(d < 0 for d in self.factors):
            raise ValueError("invariant factors must be >= 0")

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_finite(self) -> bool:
        return all(d >= 1 for d in self.factors)

    @property
    def is_trivial(self) -> bool:
        return all(d == 1 for d in self.factors)

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        out = 1
        for d in self.factors:
            out *= d
        return out

    def reduce(self, g: Sequence[int]) -> tuple[int, ...]:
        if len(g) != self.rank:
            raise DomainMismatch(f"element {tuple(g)} has wrong length for {self}")
        return tuple(int(x) % d if d else int(x) for x, d in zip(g, self.factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def add(self, g, h) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(g, h)])

    def neg(self, g) -> tuple[int, ...]:
        return self.reduce([-a for a in g])

    def scale(self, k: int, g) -> tuple[int, ...]:
        return self.reduce([k * a for a in g])

    def contains(self, g) -> bool:
        return len(g) == self.rank and self.reduce(g) == tuple(g)

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return "+".join("Z" if d == 0 else f"Z/{d}" for d in self.factors)


TRIVIAL = FinAbGroup(())
Z = FinAbGroup((0,))


def cyclic(d: int) -> FinAbGroup:
    return FinAbGroup((d,))


@dataclass(frozen=True)
class Enumeration:
    items: tuple[tuple[int, ...], ...]
    partial: bool


def elements(A: FinAbGroup, window: int | None = None) -> Enumeration:
    """All elements, or those with Z-coordinates in [-window, window]."""
    ranges = []
    partial = False
    for d in A.factors:
        if d == 0:
            if window is None:
                raise Unbounded(f"{A} is infinite and no window was given")
            ranges.append(range(-window, window + 1))
            partial = True
        else:
            ranges.append(range(d))
    return Enumeration(tuple(itertools.product(*ranges)), partial)


@dataclass(frozen=True)
class GroupHom:
    domain: FinAbGroup
    codomain: FinAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, g):
        return apply(self, g)

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.matrix)

    def is_zero(self) -> bool:
        return all(self.codomain.reduce(self.column(i)) == self.codomain.zero() for i in range(self.domain.rank))


def _canonical_matrix(B: FinAbGroup, matrix: Sequence[Sequence[int]], cols: int = 0) -> tuple[tuple[int, ...], ...]:
    # reduce each row modulo its codomain factor so equal maps compare equal
    return tuple(tuple((int(v) % d if d else int(v)) for v in row) for row, d in zip(matrix, B.factors))


def hom(A: FinAbGroup, B: FinAbGroup, matrix: Sequence[Sequence[int]]) -> GroupHom:
    """Validated homomorphism ``A -> B``.

    The map is well defined iff ``d_i`` times column ``i`` is zero in ``B``
    for each finite factor ``d_i`` of ``A``.
    """
    matrix = [list(row) for row in matrix]
    if B.rank == 0:
        matrix = []
    elif len(matrix) != B.rank or any(len(row) != A.rank for row in matrix):
        raise DomainMismatch(f"matrix shape does not match {A} -> {B}")
    for i, d in enumerate(A.factors):
        col = [row[i] for row in matrix]
        if d >= 1 and B.reduce([d * v for v in col]) != B.zero():
            raise NotWellDefined(f"factor {i} of {A}: {d} * column {col} is nonzero in {B}", (i,))
    return GroupHom(A, B, _canonical_matrix(B, matrix, A.rank))


def zero_hom(A: FinAbGroup, B: FinAbGroup) -> GroupHom:
    return hom(A, B, [[0] * A.rank for _ in range(B.rank)])


def identity_hom(A: FinAbGroup) -> GroupHom:
    return hom(A, A, [[int(i == j) for j in range(A.rank)] for i in range(A.rank)])


def apply(h: GroupHom, g: Sequence[int]) -> tuple[int, ...]:
    if len(g) != h.domain.rank:
        raise DomainMismatch(f"element {tuple(g)} not in {h.domain}")
    return h.codomain.reduce([sum(a * x for a, x in zip(row, g)) for row in h.matrix])


def compose(h2: GroupHom, h1: GroupHom) -> GroupHom:
    """``h2 ∘ h1``."""
    if h1.codomain != h2.domain:
        raise DomainMismatch(f"cannot compose {h2.domain} <- {h1.codomain}")
    A, B, C = h1.domain, h1.codomain, h2.codomain
    prod = [[sum(h2.matrix[r][k] * h1.matrix[k][c] for k in range(B.rank)) for c in range(A.rank)] for r in range(C.rank)]
    return GroupHom(A, C, _canonical_matrix(C, prod, A.rank))


def add_homs(h1: GroupHom, h2: GroupHom) -> GroupHom:
    if (h1.domain, h1.codomain) != (h2.domain, h2.codomain):
        raise DomainMismatch("homs with different domain or codomain")
    m = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(h1.matrix, h2.matrix)]
    return GroupHom(h1.domain, h1.codomain, _canonical_matrix(h1.codomain, m, h1.domain.rank))


def scalar_hom(A: FinAbGroup, k: int) -> GroupHom:
    return hom(A, A, [[k * int(i == j) for j in range(A.rank)] for i in range(A.rank)])


def homs_equal(h1: GroupHom, h2: GroupHom) -> bool:
    return (h1.domain, h1.codomain, h1.matrix) == (h2.domain, h2.codomain, h2.matrix)


def all_homs(A: FinAbGroup, B: FinAbGroup) -> list[GroupHom]:
    """Every homomorphism between finite groups (columns range over B)."""
    if not (A.is_finite and B.is_finite):
        raise Unbounded("all_homs needs finite groups")
    cols = elements(B).items
    out = []
    for choice in itertools.product(cols, repeat=A.rank):
        matrix = [[choice[c][r] for c in range(A.rank)] for r in range(B.rank)]
        try:
            out.append(hom(A, B, matrix))
        except NotWellDefined:
            pass
    return out


def _det(m: list[list[int]]) -> int:
    # Bareiss fraction-free elimination, exact on integers
    m = [row[:] for row in m]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_isomorphism(h: GroupHom) -> bool:
    """Bijectivity.

    Finite groups are checked by counting the image.  For groups with Z
    factors the free parts must have equal rank; a map between groups in
    invariant-factor form sends torsion into torsion, so it is bijective iff
    the free block (rows and columns of Z factors) has determinant ±1 and
    the torsion block restricted to torsion is bijective.
    """
    A, B = h.domain, h.codomain
    if A.is_finite and B.is_finite:
        if A.order != B.order:
            return False
        return len({apply(h, g) for g in elements(A).items}) == B.order
    free_a = [i for i, d in enumerate(A.factors) if d == 0]
    free_b = [i for i, d in enumerate(B.factors) if d == 0]
    if len(free_a) != len(free_b):
        return False
    tors_a = [i for i, d in enumerate(A.factors) if d > 0]
    tors_b = [i for i, d in enumerate(B.factors) if d > 0]
    free_block = [[h.matrix[r][c] for c in free_a] for r in free_b]
    if abs(_det(free_block)) != 1:
        return False
    TA = FinAbGroup(tuple(A.factors[i] for i in tors_a))
    TB = FinAbGroup(tuple(B.factors[i] for i in tors_b))
    tors = GroupHom(TA, TB, tuple(tuple(h.matrix[r][c] for c in tors_a) for r in tors_b))
    return is_isomorphism(tors)


def colimit_chain(homs: Sequence[GroupHom], start: FinAbGroup | None = None) -> tuple[FinAbGroup, list[GroupHom]]:
    """Colimit of a finite chain ``A_1 -> ... -> A_k``: the last group.

    Returns the colimit and the canonical maps ``A_i -> A_k`` (composites).
    """
    if not homs:
        if start is None:
            raise NotComposable("empty chain needs a start group")
        return start, [identity_hom(start)]
    for a, b in zip(homs, homs[1:]):
        if a.codomain != b.domain:
            raise NotComposable(f"{a.codomain} != {b.domain}")
    top = homs[-1].codomain
    canon = [identity_hom(top)]
    for h in reversed(homs):
        canon.append(compose(canon[-1], h))
    canon.reverse()
    return top, canon
