"""Weighted Cayley graph of <a, b | a^m, b^s> and tiling height functions.

The group is the free product Z_m * Z_s.  Its Cayley graph is a tree of cycles:
every element sits on one a-cycle (length m) and one b-cycle (length s).  Weights
follow the descending-vertex rule: inside each cycle all vertices share a weight
``w`` except one *descending* vertex of weight ``w - 1``, and every vertex is
descending in exactly one of its two cycles.  The identity has weight 0, is
descending in its a-cycle, and the descending vertex of its b-cycle is ``b^-1``.

Group elements are interned as integer node ids of a lazily grown tree, so a
generator step is O(1).
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

A, B = 0, 1
_GEN_NAMES = "ab"

Syllable = tuple[str, int]
GroupWord = tuple  # tuple of syllables ("a"|"b", power), alternating, powers nonzero


def _parse_step(step) -> tuple[int, int]:
    if isinstance(step, str):
        try:
            return {"a": (A, 1), "A": (A, -1), "b": (B, 1), "B": (B, -1)}[step]
        except KeyError:
            raise ValueError(f"bad generator step {step!r}") from None
    gen, k = step
    if isinstance(gen, str):
        gen = _GEN_NAMES.index(gen)
    return gen, k


def reduce(word: Iterable, m: int, s: int) -> GroupWord:
    """Canonical alternating form of a word in a, a^-1, b, b^-1.

    Steps are ``"a"``, ``"A"`` (a^-1), ``"b"``, ``"B"`` or ``(gen, power)`` pairs.
    The result is a tuple of ``(gen, power)`` syllables with ``0 < power < order``.
    """
    orders = (m, s)
    out: list[list] = []
    for step in word:
        gen, k = _parse_step(step)
        k %= orders[gen]
        if k == 0:
            continue
        if out and out[-1][0] == gen:
            p = (out[-1][1] + k) % orders[gen]
            if p:
                out[-1][1] = p
            else:
                out.pop()
        else:
            out.append([gen, k])
    return tuple((_GEN_NAMES[g], p) for g, p in out)


def alternating_form(word: GroupWord) -> tuple[int, ...]:
    """Flat exponent tuple (k_1, l_1, ..., k_r, l_r); k_1 or l_r may be 0."""
    exps = [p for _, p in word]
    if word and word[0][0] == "b":
        exps.insert(0, 0)
    if len(exps) % 2:
        exps.append(0)
    return tuple(exps)


class CayleyGraph:
    """Lazily explored weighted Cayley graph of Z_m * Z_s."""

    def __init__(self, m: int, s: int):
        if m < 1 or s < 1:
            raise ValueError("cycle lengths must be positive")
        self.m, self.s = m, s
        self.orders = (m, s)
        self.degenerate = m == 1 or s == 1
        # node 0 is the identity
        self.parent = [-1]
        self.gen = [-1]
        self.power = [0]
        self.weight = [0]
        self.desc_a = [True]
        self._children: dict[tuple[int, int, int], int] = {}

    def __len__(self) -> int:
        return len(self.parent)

    def _child(self, x: int, gen: int, p: int) -> int:
        key = (x, gen, p)
        node = self._children.get(key)
        if node is not None:
            return node
        order = self.orders[gen]
        x_desc = self.desc_a[x] if gen == A else not self.desc_a[x]
        w = self.weight[x]
        if x_desc:
            # x is the low point of this cycle; everyone else sits one higher
            nw, ndesc = w + 1, False
        elif p == order - 1:
            nw, ndesc = w - 1, True
        else:
            nw, ndesc = w, False
        node = len(self.parent)
        self.parent.append(x)
        self.gen.append(gen)
        self.power.append(p)
        self.weight.append(nw)
        self.desc_a.append(ndesc if gen == A else not ndesc)
        self._children[key] = node
        return node

    def move(self, x: int, gen: int, k: int) -> int:
        """Node reached from ``x`` by ``gen^k``."""
        order = self.orders[gen]
        k %= order
        if k == 0:
            return x
        if self.gen[x] == gen:
            p = (self.power[x] + k) % order
            par = self.parent[x]
            return par if p == 0 else self._child(par, gen, p)
        return self._child(x, gen, k)

    def node(self, word: Iterable) -> int:
        x = 0
        for step in word:
            gen, k = _parse_step(step)
            x = self.move(x, gen, k)
        return x

    def word(self, x: int) -> GroupWord:
        out = []
        while x:
            out.append((_GEN_NAMES[self.gen[x]], self.power[x]))
            x = self.parent[x]
        return tuple(reversed(out))

    def weight_of(self, x: int) -> int:
        return 0 if self.degenerate else self.weight[x]

    def is_descending(self, x: int, gen: int) -> bool:
        """Whether ``x`` is the descending vertex of its ``gen``-cycle."""
        return self.desc_a[x] if gen == A else not self.desc_a[x]

    def cycle(self, x: int, gen: int) -> list[int]:
        """Nodes x, x g, x g^2, ... of the ``gen``-cycle through ``x``."""
        return [self.move(x, gen, j) for j in range(self.orders[gen])]


_local = threading.local()


def get_graph(m: int, s: int) -> CayleyGraph:
    """Per-thread shared graph for (m, s)."""
    cache = getattr(_local, "graphs", None)
    if cache is None:
        cache = _local.graphs = {}
    g = cache.get((m, s))
    if g is None:
        g = cache[(m, s)] = CayleyGraph(m, s)
    return g


def cayley_weight(word: Iterable, m: int, s: int) -> int:
    """Weight of the group element spelled by ``word`` (0 when m or s is 1)."""
    if m == 1 or s == 1:
        return 0
    g = get_graph(m, s)
    return g.weight_of(g.node(word))


# --- height functions on tilings -------------------------------------------------

STEPS = {(1, 0): (A, 1), (-1, 0): (A, -1), (0, 1): (B, 1), (0, -1): (B, -1)}


def skeleton_bfs(
    base: tuple[int, int],
    edge_ok: Callable[[tuple[int, int], tuple[int, int]], bool],
    graph: CayleyGraph,
    base_node: int = 0,
) -> dict:
    """Group-element node of every skeleton vertex reachable from ``base``."""
    nodes = {base: base_node}
    todo = deque([base])
    move = graph.move
    while todo:
        v = todo.popleft()
        x, y = v
        nv = nodes[v]
        for (dx, dy), (gen, k) in STEPS.items():
            u = (x + dx, y + dy)
            if u not in nodes and edge_ok(v, u):
                nodes[u] = move(nv, gen, k)
                todo.append(u)
    return nodes


@dataclass
class HeightField:
    heights: dict
    base: tuple[int, int]
    base_height: int = 0
    nodes: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, v) -> int:
        return self.heights[v]

    def __contains__(self, v) -> bool:
        return v in self.heights

    def to_json(self) -> dict:
        return {f"{x},{y}": h for (x, y), h in sorted(self.heights.items(), key=lambda kv: (kv[0][1], kv[0][0]))}


def vertex_heights(t, base: Optional[tuple[int, int]] = None, base_height: int = 0) -> HeightField:
    """Heights of all skeleton vertices of tiling ``t`` (flat regions only)."""
    if t.region.is_torus:
        raise ValueError("height functions are not defined on tori")
    t.validate()
    if base is None:
        base = t.region.base_vertex()
    g = get_graph(t.m, t.s)
    nodes = skeleton_bfs(base, t.is_skeleton_edge, g)
    heights = {v: base_height + g.weight_of(n) for v, n in nodes.items()}
    return HeightField(heights, base, base_height, nodes)


def replay_path(t, path: Sequence[tuple[int, int]], base_height: int = 0) -> int:
    """Height at the end of a skeleton path, replayed step by step from its start."""
    g = get_graph(t.m, t.s)
    x = 0
    for u, v in zip(path, path[1:]):
        d = (v[0] - u[0], v[1] - u[1])
        if d not in STEPS or not t.is_skeleton_edge(u, v):
            raise ValueError(f"{u}->{v} is not a skeleton edge")
        x = g.move(x, *STEPS[d])
    return base_height + g.weight_of(x)


def tile_height(tile, field: HeightField, m: int) -> int:
    """Max height over a vertical side (m-tiles) or a horizontal side (s-tiles)."""
    x, y, side = tile
    if side == m:
        return max(field[(x, y + j)] for j in range(side + 1))
    return max(field[(x + i, y)] for i in range(side + 1))


def total_height(t, field: Optional[HeightField] = None) -> int:
    if field is None:
        field = vertex_heights(t)
    return sum(tile[2] ** 2 * tile_height(tile, field, t.m) for tile in t.tiles)


def potential(t) -> int:
    """Horizontal-side y's of m-tiles plus vertical-side x's of s-tiles."""
    m = t.m
    total = 0
    for x, y, side in t.tiles:
        total += 2 * y + side if side == m else 2 * x + side
    return total
