"""Independent sets of the king graph on an n-torus and the delete/insert/drag chain.

A (1, 2) tiling of the n-torus is the same thing as a set of pairwise non-adjacent
kings: each 2x2 tile is recorded by its interior vertex (anchor + (1, 1)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .region import torus
from .tiling import Tile, Tiling, TilingError

MAX_EXHAUSTIVE_N = 6


@dataclass(frozen=True)
class KingGraph:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("torus side must be positive")

    @property
    def vertices(self) -> list:
        return [(x, y) for y in range(self.n) for x in range(self.n)]

    def neighbours(self, v) -> set:
        n = self.n
        x, y = v
        out = {((x + dx) % n, (y + dy) % n) for dx in (-1, 0, 1) for dy in (-1, 0, 1)}
        out.discard((x, y))
        return out

    def is_independent(self, occupied: Iterable) -> bool:
        occ = set(occupied)
        return all(not (self.neighbours(v) & occ) for v in occ)


def independent_sets(g: KingGraph) -> list[frozenset]:
    """All independent sets, by depth-first search with adjacency pruning."""
    if g.n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE_N}")
    verts = g.vertices
    nbrs = {v: g.neighbours(v) for v in verts}
    out = []

    def rec(k, chosen, blocked):
        if k == len(verts):
            out.append(frozenset(chosen))
            return
        rec(k + 1, chosen, blocked)
        v = verts[k]
        if v not in blocked:
            chosen.append(v)
            rec(k + 1, chosen, blocked | nbrs[v] | {v})
            chosen.pop()

    rec(0, [], frozenset())
    return out


def partition_function(g: KingGraph, lam) -> Fraction:
    """Z(lam) = sum over independent sets X of lam^|X| (exact for rational lam)."""
    lam = Fraction(lam)
    return sum((lam ** len(x) for x in independent_sets(g)), Fraction(0))


def tiling_to_indset(t: Tiling) -> frozenset:
    if (t.m, t.s) != (1, 2) or not t.region.is_torus:
        raise TilingError("the king correspondence needs (1, 2) tilings of a torus")
    wrap = t.region.wrap
    return frozenset(wrap((b.x + 1, b.y + 1)) for b in t.tiles if b.side == 2)


def indset_to_tiling(occupied: Iterable, n: int) -> Tiling:
    region = torus(n)
    occ = set(occupied)
    if not KingGraph(n).is_independent(occ):
        raise TilingError("kings attack each other")
    wrap = region.wrap
    covered = set()
    tiles = []
    for x, y in occ:
        tiles.append(Tile(*wrap((x - 1, y - 1)), 2))
        covered |= {wrap((x - 1 + i, y - 1 + j)) for i in (0, 1) for j in (0, 1)}
    tiles.extend(Tile(x, y, 1) for x, y in region.cells if (x, y) not in covered)
    return Tiling(region, 1, 2, tiles)


def drag_outcomes(g: KingGraph, occ: frozenset, v, lam) -> list:
    """Exact (probability, next set) moves given vertex ``v``; the rest is a hold."""
    lam = Fraction(lam)
    if v in occ:
        return [(1 / (lam + 1), occ - {v})]
    around = g.neighbours(v) & occ
    if not around:
        return [(lam / (lam + 1), occ | {v})]
    if len(around) == 1:
        (u,) = around
        return [(lam / (4 * (lam + 1)), (occ - {u}) | {v})]
    return []


def mc_drag_step(g: KingGraph, occ: frozenset, lam: float, v, u: float) -> frozenset:
    """One step of the delete/insert/drag chain with vertex ``v`` and uniform real ``u``."""
    acc = 0.0
    for p, nxt in drag_outcomes(g, occ, v, Fraction(lam).limit_denominator(10**12)):
        acc += float(p)
        if u < acc:
            return frozenset(nxt)
    return occ


def drag_matrix(g: KingGraph, lam) -> tuple[list, dict]:
    """Exact transition matrix over all independent sets: (states, {(i, j): p})."""
    states = independent_sets(g)
    index = {x: i for i, x in enumerate(states)}
    verts = g.vertices
    P: dict = {}
    for i, x in enumerate(states):
        stay = Fraction(1)
        for v in verts:
            for p, nxt in drag_outcomes(g, x, v, lam):
                j = index[frozenset(nxt)]
                P[(i, j)] = P.get((i, j), Fraction(0)) + p / len(verts)
                stay -= p / len(verts)
        P[(i, i)] = P.get((i, i), Fraction(0)) + stay
    return states, {k: p for k, p in P.items() if p}


def compare_with_tiling_chain(n: int, lam) -> Fraction:
    """Max |P_drag - P_tiling| after mapping tilings through the king correspondence."""
    from .smallgraph import build_flip_graph, enumerate_tilings

    g = KingGraph(n)
    states, P = drag_matrix(g, lam)
    tilings = enumerate_tilings(torus(n), 1, 2)
    tg = build_flip_graph(tilings, "weighted_1_2", lam)
    if len(tilings) != len(states):
        raise TilingError(f"{len(tilings)} tilings but {len(states)} independent sets")
    sidx = {x: i for i, x in enumerate(states)}
    perm = [sidx[tiling_to_indset(t)] for t in tilings]
    Q = {}
    for i, row in enumerate(tg.matrix):
        for j, p in row.items():
            if p:
                Q[(perm[i], perm[j])] = p
    keys = set(P) | set(Q)
    return max((abs(P.get(k, Fraction(0)) - Q.get(k, Fraction(0))) for k in keys), default=Fraction(0))
