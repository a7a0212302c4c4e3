"""Exact monomer-dimer counting on boxes, tori and punctured boxes.

Sites are 1-based points of ``[m_1] x ... x [m_d]``.  Two counting routes
exist: an edge branch-and-bound that enumerates every matching (the
reference oracle) and a broken-profile transfer sweep for boxes.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Sequence, Tuple

Point = Tuple[int, ...]

BRUTE_FORCE_MAX_SITES = 30
TRANSFER_MAX_CROSS_SECTION = 24


class LatticeError(ValueError):
    """Invalid graph specification."""


class SizeGuardError(RuntimeError):
    """A configured size guard was exceeded."""


class InfeasibleError(ValueError):
    """No tiling exists with the requested number of dimers."""


@dataclass(frozen=True)
class LatticeGraph:
    kind: str  # "box", "torus" or "punctured-box"
    dims: Tuple[int, ...]
    vertices: Tuple[Point, ...]
    edges: Tuple[Tuple[Point, Point], ...]
    deleted: Tuple[Point, ...] = ()

    @property
    def nsites(self) -> int:
        return len(self.vertices)

    def degree(self, v: Point) -> int:
        return sum(v in e for e in self.edges)


def build_graph(kind: str, dims: Sequence[int], deleted_sites: Iterable[Sequence[int]] = ()) -> LatticeGraph:
    """Box, torus, or box with the sites ``deleted_sites`` removed."""
    dims = tuple(int(m) for m in dims)
    if not dims or any(m < 1 for m in dims):
        raise LatticeError("all dims must be >= 1")
    deleted = tuple(sorted({tuple(int(x) for x in u) for u in deleted_sites}))
    for u in deleted:
        if len(u) != len(dims) or any(not 1 <= x <= m for x, m in zip(u, dims)):
            raise LatticeError(f"site {u} is outside the box {dims}")
    if kind == "torus" and deleted:
        raise LatticeError("deleted sites are only supported on boxes")
    if kind not in ("box", "torus", "punctured-box"):
        raise LatticeError(f"unknown lattice kind {kind!r}")
    if kind == "box" and deleted:
        kind = "punctured-box"

    gone = set(deleted)
    vertices = tuple(v for v in itertools.product(*(range(1, m + 1) for m in dims)) if v not in gone)
    present = set(vertices)
    edges = set()
    for v in vertices:
        for axis, m in enumerate(dims):
            w = list(v)
            w[axis] += 1
            if w[axis] > m:
                if kind != "torus":
                    continue
                w[axis] = 1
            w = tuple(w)
            if w == v or w not in present:
                continue
            edges.add((min(v, w), max(v, w)))
    return LatticeGraph(kind, dims, vertices, tuple(sorted(edges)), deleted)


@dataclass(frozen=True)
class CountTable:
    """``counts[l]`` = number of l-dimer tilings of one finite graph."""

    dims: Tuple[int, ...]
    kind: str
    nsites: int
    counts: Tuple[int, ...]
    deleted: Tuple[Point, ...] = field(default=())

    def __getitem__(self, ell: int) -> int:
        return self.counts[ell] if 0 <= ell < len(self.counts) else 0

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_json(self) -> str:
        doc = {
            "schema": "1",
            "dims": list(self.dims),
            "kind": self.kind,
            "nsites": self.nsites,
            "counts": {str(ell): str(c) for ell, c in enumerate(self.counts)},
        }
        if self.deleted:
            doc["deleted"] = [list(u) for u in self.deleted]
        return json.dumps(doc, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "CountTable":
        doc = json.loads(text)
        counts = doc["counts"]
        return cls(
            tuple(doc["dims"]),
            doc["kind"],
            int(doc["nsites"]),
            tuple(int(counts[str(i)]) for i in range(len(counts))),
            tuple(tuple(u) for u in doc.get("deleted", ())),
        )


def _table(g: LatticeGraph, counts: Sequence[int]) -> CountTable:
    counts = list(counts)
    top = g.nsites // 2
    counts = (counts + [0] * (top + 1))[: top + 1]
    return CountTable(g.dims, g.kind, g.nsites, tuple(counts), g.deleted)


def iter_matchings(g: LatticeGraph) -> Iterator[Tuple[int, ...]]:
    """Every matching of ``g`` as a tuple of edge indices.

    Branches on the first remaining edge: include it (dropping every edge
    that touches its endpoints) or exclude it.
    """
    index = {v: i for i, v in enumerate(g.vertices)}
    ends = [(1 << index[a]) | (1 << index[b]) for a, b in g.edges]
    m = len(ends)
    chosen: list[int] = []

    def branch(i: int, used: int):
        while i < m and ends[i] & used:
            i += 1
        if i == m:
            yield tuple(chosen)
            return
        chosen.append(i)
        yield from branch(i + 1, used | ends[i])
        chosen.pop()
        yield from branch(i + 1, used)

    yield from branch(0, 0)


def _guard_brute(g: LatticeGraph, max_sites: int):
    if g.nsites > max_sites:
        raise SizeGuardError(f"{g.nsites} sites exceeds the brute-force guard of {max_sites}")


def matching_counts_bruteforce(g: LatticeGraph, max_sites: int = BRUTE_FORCE_MAX_SITES) -> CountTable:
    _guard_brute(g, max_sites)
    counts = [0] * (g.nsites // 2 + 1)
    for matching in iter_matchings(g):
        counts[len(matching)] += 1
    return _table(g, counts)


def matching_counts_transfer(
    dims: Sequence[int],
    deleted_sites: Iterable[Sequence[int]] = (),
    max_cross_section: int = TRANSFER_MAX_CROSS_SECTION,
) -> CountTable:
    """Broken-profile sweep over the cells of a box.

    Cells are visited with the first coordinate fastest.  The state is a
    bitmask over the next ``N' + 1`` cells marking those already covered
    by a dimer from an earlier cell; each state carries its generating
    polynomial in the number of dimers.
    """
    g = build_graph("box", dims, deleted_sites)
    dims = g.dims
    cross = math.prod(dims[:-1])
    if cross > max_cross_section:
        raise SizeGuardError(f"cross-section {cross} exceeds the transfer guard of {max_cross_section}")
    strides = [math.prod(dims[:k]) for k in range(len(dims))]
    n_cells = math.prod(dims)
    gone = {sum((x - 1) * s for x, s in zip(u, strides)) for u in g.deleted}

    top = g.nsites // 2
    states: Dict[int, list[int]] = {0: [1] + [0] * top}
    coords = [0] * len(dims)  # 0-based coordinates of the current cell
    for cell in range(n_cells):
        nxt: Dict[int, list[int]] = defaultdict(lambda: [0] * (top + 1))
        for mask, poly in states.items():
            if mask & 1 or cell in gone:
                # covered from behind, or a hole: nothing starts here
                acc = nxt[mask >> 1]
                for ell, c in enumerate(poly):
                    acc[ell] += c
                continue
            acc = nxt[mask >> 1]
            for ell, c in enumerate(poly):
                acc[ell] += c
            for axis, stride in enumerate(strides):
                if coords[axis] + 1 >= dims[axis]:
                    continue
                if mask >> stride & 1 or cell + stride in gone:
                    continue
                acc = nxt[(mask | 1 << stride) >> 1]
                for ell in range(top):
                    if poly[ell]:
                        acc[ell + 1] += poly[ell]
        states = nxt
        for axis in range(len(dims)):
            coords[axis] += 1
            if coords[axis] < dims[axis]:
                break
            coords[axis] = 0
    counts = states.get(0, [0] * (top + 1))
    return _table(g, counts)


def entropy_estimate(table: CountTable, ell: int) -> float:
    """``log counts[ell] / nsites``: a lower bound on the entropy at ``p = 2 ell / nsites``."""
    c = table[ell]
    if c <= 0:
        raise InfeasibleError(f"no tiling of {table.dims} with {ell} dimers")
    return math.log(c) / table.nsites


def density(table: CountTable, ell: int) -> float:
    return 2 * ell / table.nsites


@dataclass(frozen=True)
class ProfileCensus:
    """Tilings of a layered box grouped by per-layer dimer counts.

    ``h`` counts dimers inside each layer (layers are slices of the last
    coordinate), ``v`` counts dimers between consecutive layers.
    """

    dims: Tuple[int, ...]
    ell: int
    profiles: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int]

    @property
    def total(self) -> int:
        return sum(self.profiles.values())

    @property
    def cross_section(self) -> int:
        return math.prod(self.dims[:-1])


def profile_census(dims: Sequence[int], ell: int, max_sites: int = BRUTE_FORCE_MAX_SITES) -> ProfileCensus:
    g = build_graph("box", dims)
    if len(g.dims) < 2:
        raise LatticeError("profile census needs d >= 2")
    _guard_brute(g, max_sites)
    n = g.dims[-1]
    profiles: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = defaultdict(int)
    for matching in iter_matchings(g):
        if len(matching) != ell:
            continue
        h = [0] * n
        v = [0] * (n - 1)
        for idx in matching:
            a, b = g.edges[idx]
            if a[-1] == b[-1]:
                h[a[-1] - 1] += 1
            else:
                v[min(a[-1], b[-1]) - 1] += 1
        profiles[(tuple(h), tuple(v))] += 1
    return ProfileCensus(g.dims, ell, dict(profiles))
