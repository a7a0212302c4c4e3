"""Exact cluster-expansion coefficients Jbar_s of the monomer-dimer gas.

A cluster is an ordered tuple of located tiles (two-point subsets of Z^d)
whose overlap graph is connected.  Rather than walking tiles in the lattice
we enumerate the abstract coincidence pattern of the tile endpoints: a
multigraph ``H`` on the distinct points, one edge per tile.  For each
pattern the lattice sum factorises into

* the Ursell function of the overlap graph (the line graph of ``H``),
* a sum over which tiles are dimers and which are wildcards.

In the infinite-volume limit a wildcard weighs ``-1/(N-1)`` and gains a
factor ``N`` only when it joins two otherwise separate dimer components, so
the surviving assignments are those where the wildcards form a spanning
tree over the dimer components.  Each dimer component is counted by its
number of lattice embeddings with one vertex pinned at the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .polys import DPoly, fmt_fraction, solve_exact

Point = Tuple[int, ...]
Edge = Tuple[int, int]

DEFAULT_MAX_S = 5
LONG_RUN_MAX_S = 6


class ClusterError(ValueError):
    """Order out of range or inconsistent interpolation."""


class CalibrationError(RuntimeError):
    """The Ursell normalisation fails to reproduce Jbar_2 = 1/(8d)."""


# ------------------------------------------------------------------- tiles


@dataclass(frozen=True)
class LocatedTile:
    a: Point
    b: Point

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ClusterError("tile endpoints live in different dimensions")
        if self.a == self.b:
            raise ClusterError("tile endpoints must be distinct")
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def is_dimer(self) -> bool:
        return sum(abs(x - y) for x, y in zip(self.a, self.b)) == 1

    @property
    def shape(self) -> str:
        return "dimer" if self.is_dimer else "wildcard"

    def overlaps(self, other: "LocatedTile") -> bool:
        return bool({self.a, self.b} & {other.a, other.b})


@dataclass(frozen=True)
class Cluster:
    tiles: Tuple[LocatedTile, ...]

    @property
    def overlap_graph(self) -> Tuple[Edge, ...]:
        t = self.tiles
        return tuple((i, j) for i, j in combinations(range(len(t)), 2) if t[i].overlaps(t[j]))

    @property
    def connected(self) -> bool:
        return _connected(len(self.tiles), self.overlap_graph)

    @property
    def ursell(self) -> int:
        return ursell(len(self.tiles), self.overlap_graph)

    def weight(self, d: int) -> Fraction:
        """Leading-order activity: ``1/(2d)`` per dimer and ``-1`` per wildcard.

        The ``-1`` is the wildcard activity ``-1/(N-1)`` after its free
        endpoint has been summed over the ``N`` sites.
        """
        w = Fraction(1)
        for t in self.tiles:
            w *= Fraction(1, 2 * d) if t.is_dimer else -1
        return w


# ------------------------------------------------------------------ Ursell


def _connected(n: int, edges: Sequence[Edge]) -> bool:
    if n == 0:
        return True
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(n)}) == 1


def ursell(n: int, edges: Sequence[Edge]) -> int:
    """Sum over connected spanning edge subsets of ``(-1)^{#edges}``.

    Computed from the independent-set indicator ``g`` by the recursion
    ``c(S) = g(S) - sum_{T} c(T) g(S - T)`` over ``T`` containing the
    smallest element of ``S``.
    """
    if n < 1:
        raise ClusterError("ursell needs at least one node")
    return _ursell(n, frozenset(tuple(sorted(e)) for e in edges))


@lru_cache(maxsize=None)
def _ursell(n: int, edges: frozenset) -> int:
    adj = [0] * n
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a

    def independent(S: int) -> int:
        x = S
        while x:
            i = (x & -x).bit_length() - 1
            if adj[i] & S:
                return 0
            x &= x - 1
        return 1

    c: Dict[int, int] = {}
    full = (1 << n) - 1
    for S in sorted(range(1, full + 1), key=lambda m: bin(m).count("1")):
        low = S & -S
        rest = S ^ low
        total = independent(S)
        if rest:
            y = (rest - 1) & rest
            while True:
                T = low | y
                total -= c[T] * independent(S ^ T)
                if y == 0:
                    break
                y = (y - 1) & rest
        c[S] = total
    return c[full]


def ursell_bruteforce(n: int, edges: Sequence[Edge]) -> int:
    """Direct sum over all edge subsets (oracle for ``ursell``)."""
    edges = list(edges)
    total = 0
    for k in range(len(edges) + 1):
        for sub in combinations(edges, k):
            if _connected(n, sub):
                total += (-1) ** k
    return total


# ------------------------------------------------------------ enumeration


def _patterns(s: int) -> Iterator[Tuple[Tuple[Edge, ...], int, int]]:
    """Tile-coincidence multigraphs on vertices labelled in order of first use.

    Yields ``(edges, n_vertices, m)`` where ``m`` counts tiles that
    introduce two fresh vertices (their two labellings give one lattice
    configuration, hence the later ``1/2^m``).
    """

    def rec(edges, n, m):
        if len(edges) == s:
            yield tuple(edges), n, m
            return
        for a in range(n + 1):
            for b in range(a + 1, n + 2):
                if a == n and b == n + 1:
                    yield from rec(edges + [(a, b)], n + 2, m + 1)
                elif b == n and a < n:
                    yield from rec(edges + [(a, b)], n + 1, m)
                elif b < n:
                    yield from rec(edges + [(a, b)], n, m)

    yield from rec([], 0, 0)


def _slot_patterns(s: int) -> Iterator[Tuple[Tuple[Edge, ...], int]]:
    """Set partitions of the ``2s`` oriented tile endpoints (no pruning)."""
    slots = [0] * (2 * s)

    def rec(i, n):
        if i == 2 * s:
            yield tuple((slots[2 * k], slots[2 * k + 1]) for k in range(s)), n
            return
        for lab in range(n + 1):
            if i % 2 and lab == slots[i - 1]:
                continue
            slots[i] = lab
            yield from rec(i + 1, max(n, lab + 1))

    yield from rec(0, 0)


def _directions(d: int) -> Tuple[Point, ...]:
    out = []
    for i in range(d):
        for sg in (1, -1):
            e = [0] * d
            e[i] = sg
            out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def embeddings(d: int, k: int, edges: Tuple[Edge, ...]) -> int:
    """Injective maps of a connected ``k``-vertex graph into Z^d.

    Vertex 0 sits at the origin and every edge goes to a nearest-neighbour
    pair.  Vertices are placed in BFS order so each has a placed neighbour.
    """
    if k == 1:
        return 1
    adj: List[set] = [set() for _ in range(k)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    order = [0]
    seen = {0}
    for v in order:
        for w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                order.append(w)
    if len(order) != k:
        raise ClusterError("embeddings needs a connected graph")
    dirs = _directions(d)
    origin = (0,) * d
    pos: Dict[int, Point] = {0: origin}
    used = {origin}
    count = 0

    def rec(idx):
        nonlocal count
        if idx == k:
            count += 1
            return
        v = order[idx]
        placed = [w for w in adj[v] if w in pos]
        anchor = pos[placed[0]]
        for e in dirs:
            q = tuple(x + y for x, y in zip(anchor, e))
            if q in used:
                continue
            if any(sum(abs(x - y) for x, y in zip(q, pos[w])) != 1 for w in placed[1:]):
                continue
            pos[v] = q
            used.add(q)
            rec(idx + 1)
            del pos[v]
            used.discard(q)

    rec(1)
    return count


def _canon(verts: Sequence[int], edges: Sequence[Edge]) -> Tuple[int, Tuple[Edge, ...]]:
    idx = {v: i for i, v in enumerate(sorted(verts))}
    return len(idx), tuple(sorted({tuple(sorted((idx[a], idx[b]))) for a, b in edges}))


def pattern_weight(d: int, n: int, edges: Sequence[Edge]) -> Fraction:
    """Infinite-volume lattice sum for one coincidence pattern, per site.

    Sums over dimer/wildcard assignments in which the wildcards join the
    dimer components into a tree (no wildcard inside a component).
    """
    s = len(edges)
    total = Fraction(0)
    for mask in range(1 << s):
        dimers = [edges[i] for i in range(s) if mask >> i & 1]
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in dimers:
            parent[find(a)] = find(b)
        comps: Dict[int, List[int]] = {}
        for v in range(n):
            comps.setdefault(find(v), []).append(v)
        wild = [edges[i] for i in range(s) if not mask >> i & 1]
        if len(wild) != len(comps) - 1:
            continue
        if any(find(a) == find(b) for a, b in wild):
            continue
        w = Fraction((-1) ** len(wild), (2 * d) ** len(dimers))
        for root, vs in comps.items():
            k, ce = _canon(vs, [e for e in dimers if find(e[0]) == root])
            w *= embeddings(d, k, ce)
            if w == 0:
                break
        total += w
    return total


def _line_graph(edges: Sequence[Edge]) -> Tuple[Edge, ...]:
    return tuple(
        (i, j) for i, j in combinations(range(len(edges)), 2) if set(edges[i]) & set(edges[j])
    )


def _check_order(s: int, long_run: bool):
    top = LONG_RUN_MAX_S if long_run else DEFAULT_MAX_S
    if int(s) != s or not 1 <= s <= top:
        hint = "" if long_run or s != LONG_RUN_MAX_S else " (s=6 needs long_run=True)"
        raise ClusterError(f"order s={s} out of range 1..{top}{hint}")


def _check_dim(d: int):
    if int(d) != d or d < 1:
        raise ClusterError("d must be a positive integer")


def jbar(s: int, d: int, long_run: bool = False) -> Fraction:
    """Per-site cluster coefficient ``Jbar_s`` in dimension ``d``, exactly."""
    _check_order(s, long_run)
    _check_dim(d)
    total = Fraction(0)
    for edges, n, m in _patterns(s):
        if not _connected(n, edges):
            continue
        u = ursell(s, _line_graph(edges))
        if u:
            total += u * pattern_weight(d, n, edges) / 2**m
    return total / math.factorial(s)


def jbar_unpruned(s: int, d: int) -> Fraction:
    """Same sum over oriented endpoint partitions, without symmetry pruning."""
    _check_order(s, False)
    _check_dim(d)
    total = Fraction(0)
    for edges, n in _slot_patterns(s):
        if not _connected(n, edges):
            continue
        u = ursell(s, _line_graph(edges))
        if u:
            total += u * pattern_weight(d, n, edges)
    return total / (math.factorial(s) * 2**s)


@dataclass(frozen=True)
class JBarValue:
    """Either a single value at dimension ``d`` or the polynomial in ``1/d``."""

    s: int
    d: Optional[int] = None
    value: Optional[Fraction] = None
    poly: Optional[DPoly] = None

    def to_json(self) -> dict:
        doc: dict = {"schema": "1", "s": self.s}
        if self.poly is not None:
            doc["coefficients"] = self.poly.to_json()
            doc["text"] = str(self.poly)
        else:
            doc["d"] = self.d
            doc["value"] = fmt_fraction(self.value)
        return doc


def degree_window(s: int) -> Tuple[int, ...]:
    """Powers of ``1/d`` allowed in ``Jbar_s``: ``ceil(s/2)`` through ``s - 1``."""
    return tuple(range(-(-s // 2), s))


def jbar_poly(s: int, long_run: bool = False, check: bool = True) -> JBarValue:
    """Interpolate ``Jbar_s`` as a polynomial in ``1/d`` from integer ``d``.

    With ``check`` one extra dimension is evaluated and must agree exactly.
    """
    _check_order(s, long_run)
    powers = degree_window(s)
    if not powers:
        return JBarValue(s, poly=DPoly())
    ds = list(range(1, len(powers) + 1))
    rows = [[Fraction(1, d**r) for r in powers] for d in ds]
    rhs = [jbar(s, d, long_run) for d in ds]
    poly = DPoly(dict(zip(powers, solve_exact(rows, rhs))))
    if check:
        extra = len(powers) + 1
        if poly(extra) != jbar(s, extra, long_run):
            raise ClusterError(f"Jbar_{s} is not a polynomial in 1/d with powers {powers}")
    return JBarValue(s, poly=poly)


def calibrate(dims: Sequence[int] = (1, 2, 3)) -> None:
    """Check the Ursell normalisation against ``Jbar_2 = 1/(8d)``."""
    for d in dims:
        got = jbar(2, d)
        if got != Fraction(1, 8 * d):
            raise CalibrationError(f"Jbar_2 at d={d} is {got}, expected 1/{8 * d}")
