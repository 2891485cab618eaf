"""Distances between morphisms out of the circle web.

A circle morphism sends grid open sets to grid open sets (possibly at a
finer resolution) and multiplies the Z fiber over the full circle by an
integer.  Two morphisms are compared on the finite pieces ``Λ*_n`` of the
source: ``α ≃_n β`` when ``x ≪ y`` in ``Λ*_n`` forces ``α(x) ≤ β(y)`` and
``β(x) ≤ α(y)``.

* ``dd(α, β)`` is the infimum of ``1/2**n`` over the resolutions where the
  comparison holds (``∞`` when it fails already at ``n = 0``);
* ``d(α, β)`` is the least radius ``r`` such that ``x ≪ y`` with ``y`` the
  ``r``-fattening of ``x`` forces the same cross inequalities.

Everything runs on a finite window: resolutions up to ``max_n`` and fiber
elements in ``[-B, B]``.  Open sets are handled as bitmasks over atoms (see
:mod:`cuweb.circle`); a numpy engine evaluates the comparisons through the
smallest compact neighbourhood of each set, and a plain enumeration of all
``≪`` pairs serves as an independent route for small resolutions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import abgroups as ab
from .circle import (
    MAX_LAMBDA_N,
    ArcOpenSet,
    arc_atom,
    atoms,
    fatten,
    lambda_star_n,
    point_atom,
    refine,
    way_below_indicator,
)
from .errors import NotWebbedMorphism, ResolutionTooLarge, ResolutionUnavailable
from .order import Verdict

MAX_ENGINE_N = 4  # Λ_4 has 4,870,847 sets
MAX_TARGET_N = 5  # 64 atoms fill a uint64
MAX_BRUTE_N = 2
KINDS = ("identity", "rotation", "reflection", "zero", "table")

_ONE = np.uint64(1)


# ---------------------------------------------------------------------------
# bitmask engine


def _u(v: int) -> np.uint64:
    return np.uint64(v)


def _full_mask(n: int) -> int:
    return (1 << atoms(n)) - 1


def _parity_masks(n: int) -> tuple[np.uint64, np.uint64]:
    even = sum(1 << a for a in range(0, atoms(n), 2))
    return _u(even), _u(_full_mask(n) ^ even)


def _rotl(m: np.ndarray, s: int, n: int) -> np.ndarray:
    A = atoms(n)
    s %= A
    if s == 0:
        return m
    return ((m << _u(s)) | (m >> _u(A - s))) & _u(_full_mask(n))


def _check_engine(n: int, limit: int = MAX_TARGET_N) -> None:
    if n > limit:
        raise ResolutionTooLarge(f"resolution {n} exceeds the bitmask engine limit {limit}")


@lru_cache(maxsize=None)
def lambda_masks(n: int) -> np.ndarray:
    """Bitmasks of every open grid set at resolution ``n`` (n <= 4)."""
    _check_engine(n, MAX_ENGINE_N)
    N = 1 << n
    bits = np.arange(1 << N, dtype=np.uint64)
    masks = np.zeros_like(bits)
    for k in range(1, N + 1):
        masks |= ((bits >> _u(k - 1)) & _ONE) << _u(arc_atom(n, k))
    for k in range(N):
        left = _u(1 << arc_atom(n, k if k >= 1 else N))
        right = _u(1 << arc_atom(n, k + 1))
        ok = ((masks & left) != 0) & ((masks & right) != 0)
        masks = np.concatenate([masks, masks[ok] | _u(1 << point_atom(n, k))])
    masks.setflags(write=False)
    return masks


def closure_masks(m: np.ndarray, n: int) -> np.ndarray:
    even, odd = _parity_masks(n)
    arcs = m & odd
    return m | ((_rotl(arcs, 1, n) | _rotl(arcs, -1, n)) & even)


def neighbourhood_masks(m: np.ndarray, n: int) -> np.ndarray:
    """Smallest open grid set containing the closure, set by set."""
    even, odd = _parity_masks(n)
    cl = closure_masks(m, n)
    pts = cl & even
    return pts | (cl & odd) | ((_rotl(pts, 1, n) | _rotl(pts, -1, n)) & odd)


def fatten_masks(m: np.ndarray, n: int, j: int) -> np.ndarray:
    """Fattening by ``j`` grid steps as ``j`` one-step neighbourhoods."""
    for _ in range(j):
        m = neighbourhood_masks(m, n)
    return m


def refine_masks(m: np.ndarray, n: int, R: int) -> np.ndarray:
    if R == n:
        return m
    _check_engine(R)
    f = 1 << (R - n)
    out = np.zeros_like(m)
    for a in range(atoms(n)):
        if a % 2 == 0:
            block = 1 << (a * f)
        else:
            k = a // 2
            block = sum(1 << b for b in range(2 * k * f + 1, 2 * (k + 1) * f))
        out |= ((m >> _u(a)) & _ONE) * _u(block)
    return out


_BYTE_REVERSE = np.array([int(f"{b:08b}"[::-1], 2) for b in range(256)], dtype=np.uint8)


def reflect_masks(m: np.ndarray, n: int) -> np.ndarray:
    """Atom ``a`` goes to atom ``-a``: reverse the word, then rotate by one."""
    A = atoms(n)
    m = np.ascontiguousarray(m, dtype=np.uint64)
    rev = _BYTE_REVERSE[m.view(np.uint8)].view(np.uint64).byteswap()
    return _rotl(rev >> _u(64 - A), 1, n)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class CircleMorphism:
    """A morphism out of the circle web given by a formula or a finite table.

    ``rotation`` turns by ``p / 2**m`` of a full turn.  ``table`` maps source
    masks at resolutions ``0..table_cap`` to masks at ``table_resolution``.
    ``fiber_factor`` multiplies the Z fiber over the full circle; a
    ``fiber_values`` table replaces it by an arbitrary (non-webbed) rule.
    """

    kind: str
    p: int = 0
    m: int = 0
    fiber_factor: int = 1
    table: tuple = ()
    table_resolution: int = 0
    table_cap: int = -1
    fiber_values: tuple | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown morphism kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "rotation" and not 0 <= self.m <= MAX_TARGET_N:
            raise ResolutionTooLarge(f"rotation denominator 2**{self.m} is beyond the engine")
        if self.kind == "table" and self.table_resolution > MAX_TARGET_N:
            raise ResolutionTooLarge("table images are beyond the engine")

    @property
    def webbed(self) -> bool:
        return self.fiber_values is None

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        c = "" if self.fiber_factor == 1 else f"*{self.fiber_factor}"
        if self.kind == "rotation":
            return f"rot({self.p}/{1 << self.m}){c}"
        return f"{self.kind}{c}"

    def resolution(self, n: int) -> int:
        """Resolution at which images of resolution-``n`` sets are exact."""
        if self.kind == "rotation":
            return max(n, self.m)
        if self.kind == "table":
            if n > self.table_cap:
                raise ResolutionUnavailable(f"{self.name} is tabulated up to resolution {self.table_cap}")
            return max(n, self.table_resolution)
        return n

    @lru_cache(maxsize=None)
    def _table(self, n: int) -> dict:
        return {src: tgt for (k, src, tgt) in self.table if k == n}

    # plain route ------------------------------------------------------------

    def image_set(self, U: ArcOpenSet, R: int) -> ArcOpenSet:
        if self.kind == "zero":
            return ArcOpenSet.empty(R)
        if self.kind == "table":
            try:
                tgt = self._table(U.n)[U.mask]
            except KeyError:
                raise ResolutionUnavailable(f"{self.name} has no image for {U}") from None
            return refine(ArcOpenSet.from_mask(self.table_resolution, tgt), R)
        V = refine(U, R)
        A = atoms(R)
        if self.kind == "identity":
            return V
        if self.kind == "rotation":
            shift = 2 * self.p * (1 << (R - self.m))
            perm = {a: (a + shift) % A for a in range(A)}
        else:
            perm = {a: (-a) % A for a in range(A)}
        return ArcOpenSet.from_mask(R, sum(1 << perm[a] for a in range(A) if V.mask >> a & 1))

    def fiber(self, g: int, source_full: bool, image_full: bool) -> int:
        if not (source_full and image_full):
            return 0
        if self.fiber_values is None:
            return self.fiber_factor * g
        values = dict(self.fiber_values)
        if g not in values:
            raise ResolutionUnavailable(f"{self.name} has no fiber value for {g}")
        return values[g]

    def image_pair(self, x: tuple[ArcOpenSet, int], R: int) -> tuple[ArcOpenSet, int]:
        U, g = x
        V = self.image_set(U, R)
        return V, self.fiber(g, U.is_full, V.is_full)

    # bitmask route ----------------------------------------------------------

    def image_masks(self, masks: np.ndarray, n: int, R: int) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros_like(masks)
        if self.kind == "table":
            table = self._table(n)
            keys = np.array(sorted(table), dtype=np.uint64)
            vals = np.array([table[int(k)] for k in keys], dtype=np.uint64)
            pos = np.searchsorted(keys, masks)
            pos = np.minimum(pos, len(keys) - 1)
            if len(keys) == 0 or not np.all(keys[pos] == masks):
                raise ResolutionUnavailable(f"{self.name} is missing images at resolution {n}")
            return refine_masks(vals[pos], self.table_resolution, R)
        V = refine_masks(masks, n, R)
        if self.kind == "identity":
            return V
        if self.kind == "rotation":
            return _rotl(V, 2 * self.p * (1 << (R - self.m)), R)
        return reflect_masks(V, R)


def identity(fiber_factor: int = 1) -> CircleMorphism:
    return CircleMorphism("identity", fiber_factor=fiber_factor)


def rotation(p: int, m: int, fiber_factor: int = 1) -> CircleMorphism:
    return CircleMorphism("rotation", p=p % (1 << m), m=m, fiber_factor=fiber_factor)


def reflection(fiber_factor: int = 1) -> CircleMorphism:
    return CircleMorphism("reflection", fiber_factor=fiber_factor)


def zero_morphism() -> CircleMorphism:
    return CircleMorphism("zero", fiber_factor=0)


def tabulate(f: CircleMorphism, cap: int, label: str = "") -> CircleMorphism:
    """Table form of a formula morphism on ``Λ_0 .. Λ_cap``."""
    R = max(f.resolution(n) for n in range(cap + 1))
    rows = []
    for n in range(cap + 1):
        masks = lambda_masks(n)
        imgs = f.image_masks(masks, n, R)
        rows.extend((n, int(a), int(b)) for a, b in zip(masks, imgs))
    return CircleMorphism("table", fiber_factor=f.fiber_factor, table=tuple(rows), table_resolution=R,
                          table_cap=cap, fiber_values=f.fiber_values, label=label or f"table[{f.name}]")


def check_table_morphism(f: CircleMorphism) -> Verdict:
    """Empty to empty, monotone, ≪-preserving and coherent under refinement."""
    if f.kind != "table":
        return Verdict("table", True, details={"note": "formula morphism"})
    for n in range(f.table_cap + 1):
        R = f.resolution(n)
        sets = [ArcOpenSet.from_mask(n, int(m)) for m in lambda_masks(n)]
        imgs = {U: f.image_set(U, R) for U in sets}
        if not imgs[ArcOpenSet.empty(n)].is_empty:
            return Verdict("table", False, ("empty", n))
        for U in sets:
            for V in sets:
                if U <= V and not imgs[U] <= imgs[V]:
                    return Verdict("table", False, ("monotone", str(U), str(V)))
                if way_below_indicator(U, V) and not way_below_indicator(imgs[U], imgs[V]):
                    return Verdict("table", False, ("way_below", str(U), str(V)))
        if n < f.table_cap:
            R1 = max(R, f.resolution(n + 1))
            for U in sets:
                if refine(imgs[U], R1) != f.image_set(refine(U, n + 1), R1):
                    return Verdict("table", False, ("refinement", str(U)))
    return Verdict("table", True)


# ---------------------------------------------------------------------------
# comparisons


def target_leq(x: tuple[ArcOpenSet, int], y: tuple[ArcOpenSet, int]) -> bool:
    (A, a), (B, b) = x, y
    return A <= B and (a if A.is_full else 0) == b


def target_way_below(x: tuple[ArcOpenSet, int], y: tuple[ArcOpenSet, int]) -> bool:
    (A, a), (B, b) = x, y
    return way_below_indicator(A, B) and (a if A.is_full else 0) == b


def source_way_below(x: tuple[ArcOpenSet, int], y: tuple[ArcOpenSet, int]) -> bool:
    return target_way_below(x, y)


def _resolution(alpha: CircleMorphism, beta: CircleMorphism, n: int) -> int:
    return max(alpha.resolution(n), beta.resolution(n))


def compare_bruteforce(alpha: CircleMorphism, beta: CircleMorphism, n: int, B: int, strict: bool = False) -> Verdict:
    """Comparison on ``Λ*_n`` by enumerating every ``≪`` pair."""
    if n > MAX_BRUTE_N:
        raise ResolutionTooLarge(f"pair enumeration is limited to resolution {MAX_BRUTE_N}")
    R = _resolution(alpha, beta, n)
    rel = target_way_below if strict else target_leq
    elems = lambda_star_n(n, B)
    a_img = {x: alpha.image_pair(x, R) for x in elems}
    b_img = {x: beta.image_pair(x, R) for x in elems}
    for x in elems:
        for y in elems:
            if source_way_below(x, y):
                if not rel(a_img[x], b_img[y]) or not rel(b_img[x], a_img[y]):
                    return Verdict("compare", False, ((str(x[0]), x[1]), (str(y[0]), y[1])), {"n": n})
    return Verdict("compare", True, details={"n": n})


def _full_fiber_ok(alpha: CircleMorphism, beta: CircleMorphism, n: int, R: int, B: int, strict: bool) -> int | None:
    """First window element where the full circle pair ``(T, g) ≪ (T, g)`` fails."""
    rel = target_way_below if strict else target_leq
    T = ArcOpenSet.full(n)
    for g in range(-B, B + 1):
        a, b = alpha.image_pair((T, g), R), beta.image_pair((T, g), R)
        if not rel(a, b) or not rel(b, a):
            return g
    return None


def _contained(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a & ~b) == 0


def compare_on(alpha: CircleMorphism, beta: CircleMorphism, n: int, B: int, strict: bool = False) -> Verdict:
    """Comparison on ``Λ*_n`` via the smallest compact neighbourhood of each set.

    Non-full sets carry the zero fiber element, so their pairs reduce to
    containment of images; the neighbourhood ``V0(s)`` is the least ``t``
    with ``s ≪ t``, and monotonicity of the images covers every larger ``t``.
    The full circle is only way-below itself and contributes the fiber test.
    """
    R = _resolution(alpha, beta, n)
    _check_engine(R)
    s = lambda_masks(n)
    t = neighbourhood_masks(s, n)
    a_s, b_s = alpha.image_masks(s, n, R), beta.image_masks(s, n, R)
    a_t, b_t = alpha.image_masks(t, n, R), beta.image_masks(t, n, R)
    if strict:
        a_s, b_s = closure_masks(a_s, R), closure_masks(b_s, R)
    ok = _contained(a_s, b_t) & _contained(b_s, a_t)
    if not ok.all():
        i = int(np.argmin(ok))
        return Verdict("compare", False, (str(ArcOpenSet.from_mask(n, int(s[i]))), str(ArcOpenSet.from_mask(n, int(t[i])))),
                       {"n": n})
    g = _full_fiber_ok(alpha, beta, n, R, B, strict)
    if g is not None:
        return Verdict("compare", False, (("T", g), ("T", g)), {"n": n})
    return Verdict("compare", True, details={"n": n})


def compare_table(morphisms: Sequence[CircleMorphism], n: int, B: int, strict: bool = False) -> dict:
    """``compare_on`` for every ordered pair of ``morphisms`` at resolution ``n``.

    Images of ``Λ_n`` and of the neighbourhoods are computed once per
    morphism.  Keys are index pairs ``(i, k)``; values are ``holds`` flags.
    """
    R = max(f.resolution(n) for f in morphisms)
    _check_engine(R)
    s = lambda_masks(n)
    t = neighbourhood_masks(s, n)
    src, tgt = [], []
    for f in morphisms:
        a = f.image_masks(s, n, R)
        src.append(closure_masks(a, R) if strict else a)
        tgt.append(f.image_masks(t, n, R))
    inside = {(i, k): bool(_contained(src[i], tgt[k]).all())
              for i in range(len(morphisms)) for k in range(len(morphisms))}
    return {(i, k): inside[(i, k)] and inside[(k, i)]
            and _full_fiber_ok(morphisms[i], morphisms[k], n, R, B, strict) is None
            for (i, k) in inside}


def strict_compare_on(alpha: CircleMorphism, beta: CircleMorphism, n: int, B: int) -> Verdict:
    return compare_on(alpha, beta, n, B, strict=True)


def compare_base_on(alpha: CircleMorphism, beta: CircleMorphism, n: int) -> Verdict:
    """Comparison of the underlying maps of sets only (fibers ignored)."""
    return compare_on(CircleMorphism(**{**alpha.__dict__, "fiber_factor": 0, "fiber_values": None}),
                      CircleMorphism(**{**beta.__dict__, "fiber_factor": 0, "fiber_values": None}), n, 0)


# ---------------------------------------------------------------------------
# distances


@dataclass(frozen=True)
class Bracket:
    """A distance known to lie in ``(lower, upper]`` (or equal when exact)."""

    lower: Fraction | float
    upper: Fraction | float
    exact: bool
    note: str = ""

    @property
    def value(self) -> Fraction | float:
        return self.upper

    @property
    def finite(self) -> bool:
        return self.upper != math.inf

    def __str__(self) -> str:
        if not self.finite:
            return "∞"
        if self.exact:
            return str(self.upper)
        return f"({self.lower}, {self.upper}]" if self.lower != self.upper else str(self.upper)


INFINITE = Bracket(math.inf, math.inf, True)


def discrete_semimetric(alpha: CircleMorphism, beta: CircleMorphism, max_n: int = MAX_ENGINE_N, B: int = 1) -> Bracket:
    """``dd`` from the comparisons at resolutions ``0..max_n``.

    Comparisons at a finer resolution imply the coarser ones, so the first
    failing resolution ``k`` pins ``dd = 1/2**(k-1)`` (``∞`` for ``k = 0``).
    Without a failure only the bracket ``[0, 1/2**max_n]`` is known.
    """
    for n in range(max_n + 1):
        if not compare_on(alpha, beta, n, B).holds:
            if n == 0:
                return INFINITE
            v = Fraction(1, 1 << (n - 1))
            return Bracket(v, v, True)
    return Bracket(Fraction(0), Fraction(1, 1 << max_n), False, "no failure up to max_n")


def _d_admissible(alpha, beta, G: int, t: np.ndarray, imgs) -> bool:
    R, a_s, b_s = imgs
    a_t, b_t = alpha.image_masks(t, G, R), beta.image_masks(t, G, R)
    ok = _contained(a_s, b_t) & _contained(b_s, a_t) & _contained(a_s, a_t) & _contained(b_s, b_t)
    return bool(ok.all())


def metric_d(alpha: CircleMorphism, beta: CircleMorphism, grid_n: int = 3, B: int = 1) -> Bracket:
    """Least grid radius ``j/2**grid_n`` passing the fattening test.

    Open sets range over ``Λ_grid_n``.  The result is the bracket
    ``((j-1)/2**grid_n, j/2**grid_n]``; ``∞`` when no radius up to half a
    turn passes (beyond that every fattening is the full circle).
    """
    R = _resolution(alpha, beta, grid_n)
    _check_engine(R)
    if _full_fiber_ok(alpha, beta, grid_n, R, B, False) is not None:
        return INFINITE
    s = lambda_masks(grid_n)
    imgs = (R, alpha.image_masks(s, grid_n, R), beta.image_masks(s, grid_n, R))
    N = 1 << grid_n
    t = s
    for j in range(1, max(1, N // 2) + 1):
        t = neighbourhood_masks(t, grid_n)
        if _d_admissible(alpha, beta, grid_n, t, imgs):
            return Bracket(Fraction(j - 1, N), Fraction(j, N), False, f"grid 1/{N}")
    return INFINITE


def metric_d_table(morphisms: Sequence[CircleMorphism], grid_n: int = 3, windows: Sequence[int] = (1,)) -> dict:
    """``metric_d`` for every unordered pair of ``morphisms`` in one sweep.

    The fattenings of ``Λ_grid_n`` are shared by all pairs, and the images of
    each fattening are computed once per morphism; the set part does not
    depend on the window.  Returns ``{B: {(i, k): Bracket}}`` with ``i <= k``.
    """
    R = max(f.resolution(grid_n) for f in morphisms)
    _check_engine(R)
    s = lambda_masks(grid_n)
    N = 1 << grid_n
    radius: dict = {}
    open_pairs = list(itertools.combinations_with_replacement(range(len(morphisms)), 2))
    src = [f.image_masks(s, grid_n, R) for f in morphisms]
    t = s
    for j in range(1, max(1, N // 2) + 1):
        if not open_pairs:
            break
        t = neighbourhood_masks(t, grid_n)
        needed = sorted({i for pair in open_pairs for i in pair})
        tgt = {i: morphisms[i].image_masks(t, grid_n, R) for i in needed}
        still = []
        for i, k in open_pairs:
            if all(_contained(src[x], tgt[y]).all() for x, y in ((i, k), (k, i), (i, i), (k, k))):
                radius[(i, k)] = j
            else:
                still.append((i, k))
        open_pairs = still
        del tgt
    out = {}
    for B in windows:
        row = {}
        for i, k in itertools.combinations_with_replacement(range(len(morphisms)), 2):
            j = radius.get((i, k))
            if j is None or _full_fiber_ok(morphisms[i], morphisms[k], grid_n, R, B, False) is not None:
                row[(i, k)] = INFINITE
            else:
                row[(i, k)] = Bracket(Fraction(j - 1, N), Fraction(j, N), False, f"grid 1/{N}")
        out[B] = row
    return out


def metric_d_bruteforce(alpha: CircleMorphism, beta: CircleMorphism, grid_n: int, B: int, j: int) -> bool:
    """Fattening test at radius ``j/2**grid_n`` on plain sets (small resolutions)."""
    if grid_n > MAX_LAMBDA_N:
        raise ResolutionTooLarge("plain enumeration is limited to resolution 3")
    R = _resolution(alpha, beta, grid_n)
    r = Fraction(j, 1 << grid_n)
    for x in lambda_star_n(grid_n, B):
        U, g = x
        V = fatten(U, r)
        for y in [(V, h) for h in ([g] if V.is_full else [0])]:
            if not source_way_below(x, y):
                continue
            ax, bx = alpha.image_pair(x, R), beta.image_pair(x, R)
            ay, by = alpha.image_pair(y, R), beta.image_pair(y, R)
            if not all(target_leq(p, q) for p in (ax, bx) for q in (ay, by)):
                return False
    return True


@dataclass(frozen=True)
class MetricReport:
    dd: Bracket
    d: Bracket
    window: int
    max_n: int
    certified: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def enc(b: Bracket):
            if not b.finite:
                return {"value": "inf", "exact": True}
            return {"lower": str(b.lower), "upper": str(b.upper), "exact": b.exact}

        return {"dd": enc(self.dd), "d": enc(self.d), "window": self.window, "max_n": self.max_n,
                "certified": self.certified}


def metric_report(alpha: CircleMorphism, beta: CircleMorphism, max_n: int = 3, B: int = 1) -> MetricReport:
    """Both distances on the window.

    Fiber maps are linear, so a disagreement shows at ``g = ±1``; a window
    ``B >= 1`` therefore decides the fiber part for webbed morphisms.
    """
    dd = discrete_semimetric(alpha, beta, max_n, B)
    d = metric_d(alpha, beta, max_n, B)
    return MetricReport(dd, d, B, max_n, B >= 1 and alpha.webbed and beta.webbed)


def check_relaxed_triangle(alpha, beta, gamma, max_n: int = 3, B: int = 1) -> Verdict:
    """``dd(α, γ) <= 2 (dd(α, β) + dd(β, γ))``, refuted only by the brackets."""
    ac = discrete_semimetric(alpha, gamma, max_n, B)
    ab_ = discrete_semimetric(alpha, beta, max_n, B)
    bc = discrete_semimetric(beta, gamma, max_n, B)
    rhs = 2 * (ab_.upper + bc.upper)
    holds = ac.lower <= rhs
    certified = ac.upper <= 2 * (ab_.lower + bc.lower)
    return Verdict("relaxed_triangle", bool(holds), None if holds else (alpha.name, beta.name, gamma.name),
                   {"dd_ac": str(ac), "dd_ab": str(ab_), "dd_bc": str(bc)}, certified=bool(certified))


# ---------------------------------------------------------------------------
# fiberwise characterization


def _fiber_group(U: ArcOpenSet) -> ab.FinAbGroup:
    return ab.Z if U.is_full else ab.TRIVIAL


def _eta(f: CircleMorphism, U: ArcOpenSet, V: ArcOpenSet) -> ab.GroupHom:
    G, H = _fiber_group(U), _fiber_group(V)
    if G.rank and H.rank:
        return ab.hom(G, H, [[f.fiber_factor]])
    return ab.zero_hom(G, H)


def _edge(U: ArcOpenSet, V: ArcOpenSet) -> ab.GroupHom:
    G, H = _fiber_group(U), _fiber_group(V)
    return ab.identity_hom(G) if G.rank else ab.zero_hom(G, H)


def _squares_commute(alpha, beta, s: ArcOpenSet, t: ArcOpenSet, R: int) -> bool:
    a_s, b_s = alpha.image_set(s, R), beta.image_set(s, R)
    a_t, b_t = alpha.image_set(t, R), beta.image_set(t, R)
    left = ab.homs_equal(ab.compose(_edge(b_s, a_t), _eta(beta, s, b_s)),
                         ab.compose(_eta(alpha, t, a_t), _edge(s, t)))
    right = ab.homs_equal(ab.compose(_edge(a_s, b_t), _eta(alpha, s, a_s)),
                          ab.compose(_eta(beta, t, b_t), _edge(s, t)))
    return left and right


def check_diagram_proposition(alpha: CircleMorphism, beta: CircleMorphism, n: int, B: int = 1) -> Verdict:
    """Webbed comparison at ``n`` against base comparison plus commuting squares.

    The left side compares the webbed maps on ``Λ*_n``.  The right side asks
    that the maps of sets compare on ``Λ_n`` and that for every ``s ≪ t`` the
    two squares of fiber maps commute.  Squares out of a trivial fiber commute
    automatically, so above the pair-enumeration limit only ``s = t = T`` is
    evaluated.
    """
    for f in (alpha, beta):
        if not f.webbed:
            raise NotWebbedMorphism(f"{f.name} carries a non-webbed fiber rule")
    if B < 1:
        raise ValueError("the fiber comparison needs a window B >= 1")
    lhs = compare_on(alpha, beta, n, B).holds
    base = compare_base_on(alpha, beta, n).holds
    squares = True
    if base:
        R = _resolution(alpha, beta, n)
        if n <= MAX_BRUTE_N:
            sets = [ArcOpenSet.from_mask(n, int(m)) for m in lambda_masks(n)]
            pairs = [(s, t) for s in sets for t in sets if way_below_indicator(s, t)]
        else:
            pairs = [(ArcOpenSet.full(n), ArcOpenSet.full(n))]
        squares = all(_squares_commute(alpha, beta, s, t, R) for s, t in pairs)
    rhs = base and squares
    return Verdict("diagram_proposition", lhs == rhs, None if lhs == rhs else (alpha.name, beta.name, n),
                   {"lhs": lhs, "base": base, "squares": squares})


def diagram_proposition_table(morphisms: Sequence[CircleMorphism], n: int, B: int = 1) -> dict:
    """``check_diagram_proposition`` for every ordered pair, sharing the comparisons."""
    for f in morphisms:
        if not f.webbed:
            raise NotWebbedMorphism(f"{f.name} carries a non-webbed fiber rule")
    if B < 1:
        raise ValueError("the fiber comparison needs a window B >= 1")
    lhs = compare_table(morphisms, n, B)
    bare = [CircleMorphism(**{**f.__dict__, "fiber_factor": 0, "fiber_values": None}) for f in morphisms]
    base = compare_table(bare, n, 0)
    R = max(f.resolution(n) for f in morphisms)
    if n <= MAX_BRUTE_N:
        sets = [ArcOpenSet.from_mask(n, int(m)) for m in lambda_masks(n)]
        pairs = [(s, t) for s in sets for t in sets if way_below_indicator(s, t)]
    else:
        pairs = [(ArcOpenSet.full(n), ArcOpenSet.full(n))]
    out = {}
    for (i, k), left in lhs.items():
        a, b = morphisms[i], morphisms[k]
        squares = not base[(i, k)] or all(_squares_commute(a, b, s, t, R) for s, t in pairs)
        rhs = base[(i, k)] and squares
        out[(i, k)] = Verdict("diagram_proposition", left == rhs, None if left == rhs else (a.name, b.name, n),
                              {"lhs": left, "base": base[(i, k)], "squares": squares})
    return out


# ---------------------------------------------------------------------------
# sampling


def sample_morphisms(max_m: int = 3) -> list[CircleMorphism]:
    """Formula morphisms used by the acceptance sweep."""
    out = [identity(), identity(-1), reflection(), zero_morphism()]
    for m in range(1, max_m + 1):
        for p in range(1, 1 << m):
            if p % 2 == 1:
                out.append(rotation(p, m))
    out.append(rotation(1, 2, -1))
    return out
