"""Discretized circle: grid open sets, step functions and the Z-fiber web.

At resolution ``n`` the circle is cut by ``N = 2**n`` equidistant points
``x_0 .. x_{N-1}`` into arcs ``U_k = ]x_{k-1}, x_k[`` for ``k = 1..N``
(cyclically, ``x_N = x_0``).  A grid set is a union of *atoms*; atom ``2k``
is the point ``x_k`` and atom ``2k+1`` is the arc ``U_{k+1}``.  A grid set
is open iff every point it contains has both neighbouring arcs.

Step functions assign a value in ``{0..M, ∞}`` to each atom and are lower
semicontinuous when every point value is at most its neighbouring arc
values.  The web used here puts Z over step functions of full support and
the trivial group elsewhere; edges are the identity between full supports
and zero out of trivial fibers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from . import abgroups as ab
from .errors import CoarserResolution, OffGridRadius, ResolutionMismatch, ResolutionTooLarge
from .order import INF, FiniteOrderedMonoid, validate_monoid
from .systems import GroupSystem, validate_system
from .webbing import WebbedSemigroup, web

MAX_LAMBDA_N = 3  # 2207 sets; n = 4 has 4,870,847 and needs the bitmask engine
MAX_CIRCLE_N = 1


def atoms(n: int) -> int:
    return 2 << n


def point_atom(n: int, k: int) -> int:
    return (2 * k) % atoms(n)


def arc_atom(n: int, k: int) -> int:
    """Atom of ``U_k = ]x_{k-1}, x_k[`` for ``k = 1..N``."""
    return (2 * k - 1) % atoms(n)


def neighbours(n: int, a: int) -> tuple[int, int]:
    A = atoms(n)
    return (a - 1) % A, (a + 1) % A


@dataclass(frozen=True)
class ArcOpenSet:
    n: int
    arcs: frozenset
    points: frozenset

    def __post_init__(self):
        N = 1 << self.n
        object.__setattr__(self, "arcs", frozenset(int(k) for k in self.arcs))
        object.__setattr__(self, "points", frozenset(int(k) for k in self.points))
        if any(not 1 <= k <= N for k in self.arcs):
            raise ValueError(f"arc indices must lie in 1..{N}")
        if any(not 0 <= k < N for k in self.points):
            raise ValueError(f"point indices must lie in 0..{N - 1}")
        for k in self.points:
            left, right = k if k >= 1 else N, k + 1
            if left not in self.arcs or right not in self.arcs:
                raise ValueError(f"point x_{k} is included without both neighbouring arcs")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def mask(self) -> int:
        m = 0
        for k in self.arcs:
            m |= 1 << arc_atom(self.n, k)
        for k in self.points:
            m |= 1 << point_atom(self.n, k)
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "ArcOpenSet":
        N = 1 << n
        arcs = [k for k in range(1, N + 1) if mask >> arc_atom(n, k) & 1]
        points = [k for k in range(N) if mask >> point_atom(n, k) & 1]
        return cls(n, frozenset(arcs), frozenset(points))

    @classmethod
    def full(cls, n: int) -> "ArcOpenSet":
        N = 1 << n
        return cls(n, frozenset(range(1, N + 1)), frozenset(range(N)))

    @classmethod
    def empty(cls, n: int) -> "ArcOpenSet":
        return cls(n, frozenset(), frozenset())

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == self.N and len(self.points) == self.N

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    def __le__(self, other: "ArcOpenSet") -> bool:
        _same_resolution(self, other)
        return self.arcs <= other.arcs and self.points <= other.points

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": sorted(self.arcs), "points": sorted(self.points)}

    @classmethod
    def from_json(cls, data: dict) -> "ArcOpenSet":
        return cls(int(data["n"]), frozenset(data.get("arcs", [])), frozenset(data.get("points", [])))

    def __str__(self) -> str:
        if self.is_full:
            return "T"
        if self.is_empty:
            return "∅"
        parts = [f"U{k}" for k in sorted(self.arcs)] + [f"x{k}" for k in sorted(self.points)]
        return "{" + ",".join(parts) + "}"


def _same_resolution(U: ArcOpenSet, V: ArcOpenSet) -> None:
    if U.n != V.n:
        raise ResolutionMismatch(f"resolutions {U.n} and {V.n} differ; refine first")


def _guard(n: int, allow_large: bool, limit: int = MAX_LAMBDA_N) -> None:
    if n < 0:
        raise ValueError("resolution must be >= 0")
    if n > limit and not allow_large:
        raise ResolutionTooLarge(f"resolution {n} exceeds the guard {limit}; pass allow_large=True")


def lambda_n(n: int, allow_large: bool = False) -> list[ArcOpenSet]:
    """All open grid sets at resolution ``n`` (the {0,1}-valued step functions)."""
    _guard(n, allow_large)
    N = 1 << n
    out = []
    for arc_bits in range(1 << N):
        arcs = [k for k in range(1, N + 1) if arc_bits >> (k - 1) & 1]
        aset = set(arcs)
        allowed = [k for k in range(N) if (k if k >= 1 else N) in aset and k + 1 in aset]
        for r in range(len(allowed) + 1):
            for pts in itertools.combinations(allowed, r):
                out.append(ArcOpenSet(n, frozenset(arcs), frozenset(pts)))
    return out


def lambda_star_n(n: int, B: int, allow_large: bool = False) -> list[tuple[ArcOpenSet, int]]:
    """Pairs (U, g): ``g`` ranges over ``[-B, B]`` on the full circle, else 0."""
    if B < 0:
        raise ValueError("window must be >= 0")
    out = []
    for U in lambda_n(n, allow_large):
        if U.is_full:
            out.extend((U, g) for g in range(-B, B + 1))
        else:
            out.append((U, 0))
    return out


def closure_mask(n: int, mask: int) -> int:
    """Grid closure: add both endpoints of every arc."""
    out = mask
    for a in range(1, atoms(n), 2):
        if mask >> a & 1:
            l, r = neighbours(n, a)
            out |= (1 << l) | (1 << r)
    return out


def closure(U: ArcOpenSet) -> int:
    return closure_mask(U.n, U.mask)


def way_below_indicator(U: ArcOpenSet, V: ArcOpenSet) -> bool:
    """Compact containment of grid open sets: closure of U inside V."""
    _same_resolution(U, V)
    return closure(U) & ~V.mask == 0


def refine(U: ArcOpenSet, m: int) -> ArcOpenSet:
    """Same point set at the finer resolution ``m``."""
    if m < U.n:
        raise CoarserResolution(f"cannot refine resolution {U.n} to {m}")
    f = 1 << (m - U.n)
    arcs = set()
    points = set()
    for k in U.arcs:
        # U_k = ]x_{k-1}, x_k[ becomes the arcs between x_{(k-1)f} and x_{kf}
        arcs.update(range((k - 1) * f + 1, k * f + 1))
        points.update(((k - 1) * f + i) % (U.N * f) for i in range(1, f))
    points.update(k * f for k in U.points)
    return ArcOpenSet(m, frozenset(arcs), frozenset(points))


def _grid_distance(n: int, target_mask: int) -> list[float]:
    """Grid distance (in arc lengths) from each atom to a closed grid set."""
    A = atoms(n)
    N = 1 << n
    pts = [k for k in range(N) if target_mask >> point_atom(n, k) & 1]
    INFD = float("inf")
    dist = [INFD] * A
    if not pts:
        return dist
    for k in range(N):
        dist[point_atom(n, k)] = min(min((k - p) % N, (p - k) % N) for p in pts)
    for a in range(1, A, 2):
        l, r = neighbours(n, a)
        dist[a] = min(dist[l], dist[r])
    return dist


def fatten(U: ArcOpenSet, r) -> ArcOpenSet:
    """Open dilation by ``r = j / 2**n``: atoms at grid distance < j from the closure."""
    if isinstance(r, float):
        r = Fraction(r)
    if not isinstance(r, Rational):
        raise OffGridRadius(f"radius {r!r} is not rational")
    j = Fraction(r) * U.N
    if j.denominator != 1 or j < 0:
        raise OffGridRadius(f"radius {r} is not a nonnegative multiple of 1/{U.N}")
    j = int(j)
    if j == 0 or U.is_empty:
        return U
    dist = _grid_distance(U.n, closure(U))
    mask = sum(1 << a for a in range(atoms(U.n)) if dist[a] < j)
    return ArcOpenSet.from_mask(U.n, mask)


def minimal_neighbourhood(U: ArcOpenSet) -> ArcOpenSet:
    """Smallest grid open set containing the closure of ``U`` (one-step fattening)."""
    return fatten(U, Fraction(1, U.N))


# ---------------------------------------------------------------------------
# step functions and the circle web


def step_functions(n: int, M: int) -> list[tuple[int, ...]]:
    """Lower semicontinuous atom values in ``0..M`` or ``M+1`` (standing for ∞)."""
    N = 1 << n
    vals = range(M + 2)
    out = []
    for arc_vals in itertools.product(vals, repeat=N):
        # arc_vals[k-1] is the value on U_k; point x_k sits between U_k and U_{k+1}
        caps = [min(arc_vals[(k - 1) % N], arc_vals[k % N]) for k in range(N)]
        for pt_vals in itertools.product(*[range(c + 1) for c in caps]):
            f = [0] * atoms(n)
            for k in range(N):
                f[point_atom(n, k)] = pt_vals[k]
                f[arc_atom(n, k + 1)] = arc_vals[k]
            out.append(tuple(f))
    return out


def _level_mask(f: tuple[int, ...], k: int) -> int:
    return sum(1 << a for a, v in enumerate(f) if v >= k)


def step_way_below(n: int, M: int, f: tuple[int, ...], g: tuple[int, ...]) -> bool:
    """Bounded ``f`` with every level set compactly inside the matching level of ``g``."""
    inf = M + 1
    if any(v == inf for v in f):
        return False
    return all(closure_mask(n, _level_mask(f, k)) & ~_level_mask(g, k) == 0 for k in range(1, M + 1))


def step_name(f: tuple[int, ...], M: int) -> str:
    show = [INF if v == M + 1 else str(v) for v in f]
    if len(set(show)) == 1:
        return f"[{show[0]}]"
    return "[" + ",".join(show) + "]"


@lru_cache(maxsize=8)
def circle_base(n: int, M: int, allow_large: bool = False) -> FiniteOrderedMonoid:
    """Step functions at resolution ``n`` with values truncated past ``M``."""
    _guard(n, allow_large, MAX_CIRCLE_N)
    fs = step_functions(n, M)
    idx = {f: i for i, f in enumerate(fs)}
    inf = M + 1

    def plus(a: int, b: int) -> int:
        return inf if a == inf or b == inf or a + b > M else a + b

    add = [[idx[tuple(plus(a, b) for a, b in zip(f, g))] for g in fs] for f in fs]
    leq = [[all(a <= b for a, b in zip(f, g)) for g in fs] for f in fs]
    wb = [[step_way_below(n, M, f, g) for g in fs] for f in fs]
    zero = idx[tuple([0] * atoms(n))]
    return validate_monoid([step_name(f, M) for f in fs], add, leq, zero,
                           positively_ordered=True, way_below=wb, labels=fs)


def circle_system(n: int, M: int, allow_large: bool = False) -> GroupSystem:
    """Z over full-support step functions, trivial elsewhere."""
    S = circle_base(n, M, allow_large)
    full = [all(v >= 1 for v in f) for f in S.labels]
    fibers = [ab.Z if full[s] else ab.TRIVIAL for s in S.elements]
    edges = {}
    for s in S.elements:
        for t in S.elements:
            if S.leq(s, t):
                if full[s]:
                    edges[(s, t)] = ab.identity_hom(ab.Z)
                else:
                    edges[(s, t)] = ab.zero_hom(fibers[s], fibers[t])
    return validate_system(S, fibers, edges)


def circle_semigroup(n: int, M: int, B: int, allow_large: bool = False) -> WebbedSemigroup:
    """Window ``[-B, B]`` of the Z-fiber web over step functions."""
    return web(circle_system(n, M, allow_large), window=B)


def circle_element(W: WebbedSemigroup, values, g: int = 0) -> tuple:
    """Pair for the step function ``values`` (a constant or one value per atom)."""
    base = W.base
    n = (len(base.labels[0]) // 2).bit_length() - 1
    if isinstance(values, int):
        values = [values] * atoms(n)
    s = base.labels.index(tuple(values))
    return (s, (g,) if W.system.fiber(s).rank else ())
