"""Exhaustive tiling spaces of small regions and exact checks on them."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .mcmc import site_outcomes
from .region import Region, inner_vertices
from .tiling import Board, Tile, Tiling, TilingError, order_key


class BudgetExceeded(RuntimeError):
    pass


def enumerate_tilings(region: Region, m: int, s: int, budget: int = 10**6) -> list[Tiling]:
    """All (m, s)-tilings of ``region``, by filling the first uncovered cell (row-major)."""
    cells = sorted(region.cells, key=lambda c: (c[1], c[0]))
    wrap = region.wrap
    covered: set = set()
    chosen: list = []
    out: list = []

    def candidates(cell):
        for side in (m, s):
            # on a torus a wrapped tile may cover the first free cell from below-left
            offs = [(i, j) for j in range(side) for i in range(side)] if region.is_torus else [(0, 0)]
            for i, j in offs:
                ax, ay = cell[0] - i, cell[1] - j
                fp = [wrap((ax + a, ay + b)) for b in range(side) for a in range(side)]
                if len(set(fp)) != side * side:
                    continue
                if all(c in region.cells and c not in covered for c in fp):
                    yield Tile(*wrap((ax, ay)), side), fp

    def rec(k):
        while k < len(cells) and cells[k] in covered:
            k += 1
        if k == len(cells):
            out.append(Tiling(region, m, s, list(chosen)))
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} tilings")
            return
        for tile, fp in list(candidates(cells[k])):
            covered.update(fp)
            chosen.append(tile)
            rec(k + 1)
            chosen.pop()
            covered.difference_update(fp)

    rec(0)
    return out


@dataclass
class TilingGraph:
    region: Region
    m: int
    s: int
    chain: str
    lam: Fraction
    vertices: list
    edges: set = field(default_factory=set)
    matrix: list = field(default_factory=list, repr=False)  # rows of {j: Fraction}, hold on the diagonal

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbours(self, i: int):
        return [j for j in self.matrix[i] if j != i]

    def prob(self, i: int, j: int) -> Fraction:
        return self.matrix[i].get(j, Fraction(0))

    def weight(self, i: int) -> Fraction:
        if self.chain == "uniform":
            return Fraction(1)
        return self.lam ** self.vertices[i].count(self.s)

    def to_json(self, with_matrix: bool = False) -> dict:
        doc = {
            "vertices": [[{"x": t.x, "y": t.y, "side": t.side} for t in v.key()] for v in self.vertices],
            "edges": sorted([list(e) for e in self.edges]),
        }
        if with_matrix:
            doc["matrix"] = [{str(j): str(p) for j, p in sorted(row.items())} for row in self.matrix]
        return doc


def build_flip_graph(tilings: list, chain: str = "uniform", lam=Fraction(1)) -> TilingGraph:
    """Flip graph with the exact transition matrix of ``chain``."""
    if not tilings:
        raise TilingError("empty tiling list")
    t0 = tilings[0]
    lam = Fraction(lam)
    board = Board(t0)
    index = {}
    for i, t in enumerate(tilings):
        board.load(t, validated=True)
        index[board.state_key()] = i
    n_sites = len(board.sites)
    g = TilingGraph(t0.region, t0.m, t0.s, chain, lam, list(tilings))
    for i, t in enumerate(tilings):
        board.load(t, validated=True)
        row: dict = {}
        for site in range(n_sites):
            for p, old, new, _ in site_outcomes(board, site, chain, lam):
                b = board.copy()
                b.set_config(old, new)
                j = index.get(b.state_key())
                if j is None:
                    raise TilingError("flip left the enumerated state space")
                row[j] = row.get(j, Fraction(0)) + p / n_sites
                g.edges.add((min(i, j), max(i, j)))
        row[i] = 1 - sum(row.values())
        g.matrix.append(row)
    return g


def is_connected(g: TilingGraph) -> bool:
    return len(_bfs(g, 0)) == len(g)


def _bfs(g: TilingGraph, start: int) -> dict:
    dist = {start: 0}
    q = deque([start])
    while q:
        v = q.popleft()
        for u in g.neighbours(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    return dist


@dataclass
class StationaryReport:
    residual: Fraction
    symmetric: bool
    detailed_balance: bool
    rows_stochastic: bool


def stationary_check(g: TilingGraph) -> StationaryReport:
    """Exact residual max |(pi P - pi)_j| for pi uniform or proportional to lam^#big."""
    if not is_connected(g):
        raise TilingError("flip graph is disconnected")
    w = [g.weight(i) for i in range(len(g))]
    z = sum(w)
    pi = [x / z for x in w]
    flow = [Fraction(0)] * len(g)
    for i, row in enumerate(g.matrix):
        for j, p in row.items():
            flow[j] += pi[i] * p
    residual = max(abs(flow[j] - pi[j]) for j in range(len(g)))
    symmetric = all(g.prob(j, i) == p for i, row in enumerate(g.matrix) for j, p in row.items())
    balance = all(pi[i] * p == pi[j] * g.prob(j, i) for i, row in enumerate(g.matrix) for j, p in row.items())
    stochastic = all(sum(row.values()) == 1 and min(row.values()) >= 0 for row in g.matrix)
    return StationaryReport(residual, symmetric, balance, stochastic)


def graph_stats(g: TilingGraph) -> dict:
    if not is_connected(g):
        raise TilingError("flip graph is disconnected")
    diameter = max(max(_bfs(g, v).values()) for v in range(len(g)))
    degrees = Counter(len(g.neighbours(v)) for v in range(len(g)))
    return {"vertices": len(g), "edges": len(g.edges), "diameter": diameter, "degree_histogram": dict(sorted(degrees.items()))}


# --- canonical paths for (1, 2) tilings -------------------------------------------------

def _centers(t: Tiling) -> set:
    return {(b.x + 1, b.y + 1) for b in t.tiles if b.side == 2}


def _from_centers(region: Region, centers) -> Tiling:
    cells = set(region.cells)
    tiles = []
    for cx, cy in centers:
        tiles.append(Tile(cx - 1, cy - 1, 2))
        cells -= {(cx - 1, cy - 1), (cx, cy - 1), (cx - 1, cy), (cx, cy)}
    tiles.extend(Tile(x, y, 1) for x, y in cells)
    return Tiling(region, 1, 2, tiles)


@dataclass
class CanonicalPath:
    ok: bool
    states: list  # tilings from X to Y inclusive
    message: str = ""

    @property
    def length(self) -> int:
        return len(self.states) - 1


def canonical_path(x: Tiling, y: Tiling) -> CanonicalPath:
    """Column-major sweep turning ``x`` into ``y`` one flip at a time ((1, 2) on rectangles).

    Big squares are tracked by their centres.  At each inner vertex v: if v is a
    centre of y but not of the current tiling, a single orthogonally adjacent
    blocker is slid onto v, otherwise every blocker is split and v is merged;
    if v is a centre of the current tiling but not of y, it is split.  Every flip
    shrinks the symmetric difference of centre sets.
    """
    if (x.m, x.s) != (1, 2) or x.region != y.region or x.region.is_torus:
        raise TilingError("canonical paths are defined for (1, 2) tilings of one flat region")
    region = x.region
    cur = set(_centers(x))
    target = _centers(y)
    states = [x]
    order = sorted(inner_vertices(region))  # (x, y) lexicographic: column-major
    for v in order:
        vx, vy = v
        if v in target and v not in cur:
            blockers = sorted(
                u for u in cur if max(abs(u[0] - vx), abs(u[1] - vy)) == 1
            )
            if len(blockers) == 1 and abs(blockers[0][0] - vx) + abs(blockers[0][1] - vy) == 1:
                cur.discard(blockers[0])
                cur.add(v)
                states.append(_from_centers(region, cur))
                continue
            for u in blockers:
                cur.discard(u)
                states.append(_from_centers(region, cur))
            cur.add(v)
            states.append(_from_centers(region, cur))
        elif v in cur and v not in target:
            cur.discard(v)
            states.append(_from_centers(region, cur))
    if states[-1] != y:
        return CanonicalPath(False, states, "sweep did not end at the target")
    return CanonicalPath(True, states)


@dataclass
class CongestionReport:
    pairs: int
    failures: int
    max_length: int
    max_load: int
    bound: int
    invalid_steps: int

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.invalid_steps == 0 and self.max_load <= self.bound


def congestion(region: Region, tilings: Optional[list] = None) -> CongestionReport:
    """Route canonical paths between all ordered pairs; count paths per directed edge."""
    if tilings is None:
        tilings = enumerate_tilings(region, 1, 2)
    g = build_flip_graph(tilings, "uniform")
    index = {t: i for i, t in enumerate(tilings)}
    load: Counter = Counter()
    failures = invalid = max_len = 0
    for a in tilings:
        for b in tilings:
            path = canonical_path(a, b)
            if not path.ok:
                failures += 1
                continue
            max_len = max(max_len, path.length)
            ids = [index[t] for t in path.states]
            for i, j in zip(ids, ids[1:]):
                if i == j or g.prob(i, j) == 0:
                    invalid += 1
                load[(i, j)] += 1
    _, _, w, h = region.bbox()
    n = len(tilings)
    return CongestionReport(n * n, failures, max_len, max(load.values(), default=0), n * max(w, h), invalid)


def descent_fixpoints(tilings: list) -> set:
    """Distinct results of minimal_descent over all tilings."""
    from .tiling import minimal_descent

    return {minimal_descent(t) for t in tilings}


def order_keys(tilings: list) -> list:
    return [order_key(t) for t in tilings]
