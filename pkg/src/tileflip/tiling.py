"""(m, s)-square tilings, flips, and a mutable board used by the chains.

Site convention: a site is an inner vertex ``v``; the block flipped at ``v`` is the
one whose upper-right *cell* is the cell with lower-left corner ``v``.  For
(1, s) slides ``v`` is the upper-right cell of the big square after the move.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, NamedTuple, Optional

from . import cayley
from .region import Region, inner_vertices, region_from_json, region_to_json, explicit

UP, DOWN = "up", "down"


class TilingError(ValueError):
    pass


class Tile(NamedTuple):
    x: int
    y: int
    side: int

    @property
    def anchor(self) -> tuple[int, int]:
        return self.x, self.y

    def cells(self):
        return [(self.x + i, self.y + j) for j in range(self.side) for i in range(self.side)]


@dataclass(frozen=True)
class Flip:
    kind: str  # central | horizontal | vertical | drag
    origin: tuple[int, int]  # lower-left cell of the block
    direction: str
    site: tuple[int, int] = field(compare=False)
    old: tuple = field(compare=False, repr=False)
    new: tuple = field(compare=False, repr=False)


def block_dimensions(m: int, s: int) -> dict:
    if not 1 <= m < s:
        raise ValueError("need 1 <= m < s")
    p = lcm(m, s)
    return {"horizontal": (p, m + s), "vertical": (m + s, p), "central": (p, p)}


class Tiling:
    """Immutable tiling of a region by m- and s-squares."""

    __slots__ = ("region", "m", "s", "tiles", "_index", "_key")

    def __init__(self, region: Region, m: int, s: int, tiles: Iterable):
        if not 1 <= m < s:
            raise TilingError("need 1 <= m < s")
        self.region = region
        self.m, self.s = m, s
        wrap = region.wrap
        ts = []
        for t in tiles:
            x, y = wrap((t[0], t[1]))
            ts.append(Tile(x, y, t[2]))
        self.tiles = frozenset(ts)
        self._index = None
        self._key = None

    # identity -------------------------------------------------------------------
    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(sorted(self.tiles))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Tiling):
            return NotImplemented
        return (self.m, self.s, self.region) == (other.m, other.s, other.region) and self.tiles == other.tiles

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Tiling({self.region.name or 'region'}, m={self.m}, s={self.s}, {len(self.tiles)} tiles)"

    # geometry --------------------------------------------------------------------
    def tile_cells(self, t: Tile):
        wrap = self.region.wrap
        return [wrap(c) for c in t.cells()]

    @property
    def cell_index(self) -> dict:
        if self._index is None:
            idx = {}
            for t in self.tiles:
                for c in self.tile_cells(t):
                    if c in idx:
                        raise TilingError(f"tiles overlap at {c}")
                    idx[c] = t
            self._index = idx
        return self._index

    def validate(self) -> None:
        if any(t.side not in (self.m, self.s) for t in self.tiles):
            raise TilingError("tile of unexpected size")
        idx = self.cell_index
        if set(idx) != set(self.region.cells):
            raise TilingError("tiles do not partition the region")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except TilingError:
            return False
        return True

    def tile_at(self, cell) -> Optional[Tile]:
        return self.cell_index.get(self.region.wrap(cell))

    def is_skeleton_edge(self, u, v) -> bool:
        """Unit edge u-v lies in the region and on no tile's interior."""
        (x1, y1), (x2, y2) = u, v
        if y1 == y2 and abs(x1 - x2) == 1:
            x = min(x1, x2)
            c1, c2 = (x, y1 - 1), (x, y1)
        elif x1 == x2 and abs(y1 - y2) == 1:
            y = min(y1, y2)
            c1, c2 = (x1 - 1, y), (x1, y)
        else:
            return False
        idx = self.cell_index
        t1, t2 = idx.get(c1), idx.get(c2)
        return (t1 is not None or t2 is not None) and t1 != t2

    def count(self, side: int) -> int:
        return sum(1 for t in self.tiles if t.side == side)

    # serialization ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "region": region_to_json(self.region),
            "m": self.m,
            "s": self.s,
            "tiles": [{"x": t.x, "y": t.y, "side": t.side} for t in self.key()],
        }

    @classmethod
    def from_json(cls, doc, m: Optional[int] = None, s: Optional[int] = None) -> "Tiling":
        if isinstance(doc, list):
            tiles = [Tile(d["x"], d["y"], d["side"]) for d in doc]
            cells = {c for t in tiles for c in t.cells()}
            sides = sorted({t.side for t in tiles})
            if m is None or s is None:
                if len(sides) != 2:
                    raise TilingError("cannot infer (m, s) from a bare tile list; pass them explicitly")
                m, s = sides
            return cls(explicit(cells), m, s, tiles)
        tiles = [Tile(d["x"], d["y"], d["side"]) for d in doc["tiles"]]
        return cls(region_from_json(doc["region"]), doc["m"], doc["s"], tiles)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def load_tiling(path: str, m: Optional[int] = None, s: Optional[int] = None) -> Tiling:
    with open(path) as fh:
        return Tiling.from_json(json.load(fh), m, s)


# --- extreme tilings ----------------------------------------------------------------

def _greedy(region: Region, sides_by_preference, strict: bool):
    wrap = region.wrap
    covered = set()
    tiles = []
    for cell in sorted(region.cells, key=lambda c: (c[1], c[0])):
        if cell in covered:
            continue
        for side in sides_by_preference:
            fp = [wrap((cell[0] + i, cell[1] + j)) for j in range(side) for i in range(side)]
            if len(set(fp)) == side * side and all(c in region.cells and c not in covered for c in fp):
                covered.update(fp)
                tiles.append(Tile(cell[0], cell[1], side))
                break
        else:
            if strict:
                raise TilingError(f"region is not tileable by {sides_by_preference[0]}-squares (stuck at {cell})")
    return tiles


def all_small(region: Region, m: int, s: int) -> Tiling:
    """Tiling by m-squares only."""
    if m == 1:
        return Tiling(region, m, s, [Tile(x, y, 1) for x, y in region.cells])
    return Tiling(region, m, s, _greedy(region, (m,), strict=True))


def greedy_big(region: Region, m: int, s: int) -> Tiling:
    """Row-major greedy packing of s-squares, unit squares elsewhere (m = 1 only)."""
    if m != 1:
        raise TilingError("greedy_big needs m = 1; supply an explicit extreme tiling for m > 1")
    return Tiling(region, m, s, _greedy(region, (s, 1), strict=False))


# --- mutable board ------------------------------------------------------------------

class _Move:
    """A concrete flip on a board: tiles ``old`` replaced by ``new`` (anchor index, side)."""

    __slots__ = ("kind", "origin", "site", "direction", "old", "new", "llv", "tree")

    def __init__(self, kind, origin, site, direction, old, new, llv=-1, tree=None):
        self.kind = kind
        self.origin = origin
        self.site = site
        self.direction = direction
        self.old = old
        self.new = new
        self.llv = llv
        self.tree = tree


class _Block:
    __slots__ = ("kind", "origin", "X", "Y", "llv", "dpot", "trees")


def _config_tiles(kind: str, m: int, s: int):
    """Relative tiles of the two legal tilings of a block (m > 1)."""
    p = lcm(m, s)
    if kind == "horizontal":
        X = [(i * s, 0, s) for i in range(p // s)] + [(j * m, s, m) for j in range(p // m)]
        Y = [(j * m, 0, m) for j in range(p // m)] + [(i * s, m, s) for i in range(p // s)]
    elif kind == "vertical":
        X = [(0, i * s, s) for i in range(p // s)] + [(s, j * m, m) for j in range(p // m)]
        Y = [(0, j * m, m) for j in range(p // m)] + [(m, i * s, s) for i in range(p // s)]
    else:
        X = [(i * m, j * m, m) for j in range(p // m) for i in range(p // m)]
        Y = [(i * s, j * s, s) for j in range(p // s) for i in range(p // s)]
    return X, Y


def _local_skeleton(tiles, W: int, H: int):
    """Spanning tree of a block's skeleton from its lower-left corner.

    Returns (steps, interior): steps are ((dx, dy), (px, py), gen, k) in BFS order,
    interior lists block vertices not on any tile boundary.
    """
    owner = {}
    for n, (tx, ty, sd) in enumerate(tiles):
        for j in range(sd):
            for i in range(sd):
                owner[(tx + i, ty + j)] = n

    def ok(u, v):
        (x1, y1), (x2, y2) = u, v
        if not (0 <= x2 <= W and 0 <= y2 <= H):
            return False
        if y1 == y2:
            x = min(x1, x2)
            c1, c2 = owner.get((x, y1 - 1)), owner.get((x, y1))
        else:
            y = min(y1, y2)
            c1, c2 = owner.get((x1 - 1, y)), owner.get((x1, y))
        return (c1 is not None or c2 is not None) and c1 != c2

    seen = {(0, 0)}
    order = [(0, 0)]
    steps = []
    for v in order:
        for (dx, dy), (gen, k) in cayley.STEPS.items():
            u = (v[0] + dx, v[1] + dy)
            if u not in seen and ok(v, u):
                seen.add(u)
                order.append(u)
                steps.append((u, v, gen, k))
    interior = [(x, y) for y in range(H + 1) for x in range(W + 1) if (x, y) not in seen]
    return steps, interior


def _config_potential(tiles, m: int) -> tuple[int, int, int]:
    """(relative potential, #m-tiles, #s-tiles) of a relative configuration."""
    rel = sum(2 * y + sd if sd == m else 2 * x + sd for x, y, sd in tiles)
    nm = sum(1 for t in tiles if t[2] == m)
    return rel, nm, len(tiles) - nm


_HASH_SEED = 0x5EED
_STATIC: dict = {}


class Board:
    """Mutable tiling state addressed by integer cell indices.

    ``side_at[i]`` is the side of the tile anchored at cell ``i`` (0 if none).
    Flat regions use a padded box so block lookups never need bounds checks;
    tori wrap indices.
    """

    _STATIC_ATTRS = (
        "torus", "W", "H", "x0", "y0", "P", "Wp", "Hp", "Wv", "inside", "_zsmall", "_zbig",
        "sites", "site_cells", "_moves_cache", "_drag_cache", "_blocks_cache", "_dh_cache",
        "graph", "_kinds",
    )

    def __init__(self, t: Tiling):
        t.validate()
        self.region = region = t.region
        self.m, self.s = t.m, t.s
        if self.m > 1 and region.is_torus:
            raise TilingError("(m, s) chains with m > 1 need a flat region (heights undefined on tori)")
        key = (region, self.m, self.s)
        static = _STATIC.get(key)
        if static is None:
            self._build_static()
            if len(_STATIC) >= 64:
                _STATIC.clear()
            _STATIC[key] = {a: getattr(self, a) for a in self._STATIC_ATTRS}
        else:
            self.__dict__.update(static)
        self.side_at = [0] * (self.Wp * self.Hp)
        self.vnode = None
        self.load(t, validated=True)

    def _build_static(self) -> None:
        region = self.region
        self.torus = region.is_torus
        if self.torus:
            self.W, self.H = region.torus
            self.x0 = self.y0 = 0
            self.P = 0
            self.Wp, self.Hp = self.W, self.H
        else:
            x0, y0, w, h = region.bbox()
            self.P = P = lcm(self.m, self.s) + self.s + 2
            self.x0, self.y0 = x0, y0
            self.W, self.H = w, h
            self.Wp, self.Hp = w + 2 * P, h + 2 * P
        self.Wv = self.Wp + 1
        ncell = self.Wp * self.Hp
        self.inside = bytearray(ncell)
        for c in region.cells:
            self.inside[self.idx(*c)] = 1
        rng = random.Random(_HASH_SEED)
        self._zsmall = [rng.getrandbits(64) for _ in range(ncell)]
        self._zbig = [rng.getrandbits(64) for _ in range(ncell)]
        self.sites = inner_vertices(region)
        self.site_cells = [self.idx(*v) for v in self.sites]
        self._moves_cache = {}
        self._drag_cache = {}
        self._blocks_cache = {}
        self._dh_cache = {}
        self.graph = None
        self._kinds = None
        if self.m > 1:
            self._init_kinds()

    # indexing ----------------------------------------------------------------------
    def idx(self, x: int, y: int) -> int:
        if self.torus:
            return (y % self.H) * self.W + (x % self.W)
        return (y - self.y0 + self.P) * self.Wp + (x - self.x0 + self.P)

    def xy(self, i: int) -> tuple[int, int]:
        if self.torus:
            return i % self.W, i // self.W
        return i % self.Wp - self.P + self.x0, i // self.Wp - self.P + self.y0

    def vidx(self, x: int, y: int) -> int:
        return (y - self.y0 + self.P) * self.Wv + (x - self.x0 + self.P)

    def _footprint(self, x: int, y: int, side: int):
        """Cell indices of a side-square anchored at (x, y), or None if invalid."""
        cells = [self.idx(x + i, y + j) for j in range(side) for i in range(side)]
        inside = self.inside
        if any(not inside[c] for c in cells) or len(set(cells)) != len(cells):
            return None
        return cells

    def _config(self, tiles):
        """Absolute [(anchor index, side)] for absolute (x, y, side) tiles, or None."""
        out = []
        seen = set()
        for x, y, sd in tiles:
            fp = self._footprint(x, y, sd)
            if fp is None or seen.intersection(fp):
                return None
            seen.update(fp)
            out.append((self.idx(x, y), sd))
        return tuple(out)

    # state -------------------------------------------------------------------------
    def _place(self, a: int, sd: int) -> None:
        self.side_at[a] = sd
        if sd == self.s:
            self.hash ^= self._zbig[a]
            self.n_big += 1
        else:
            self.hash ^= self._zsmall[a]
            self.n_small += 1

    def _remove(self, a: int, sd: int) -> None:
        self.side_at[a] = 0
        if sd == self.s:
            self.hash ^= self._zbig[a]
            self.n_big -= 1
        else:
            self.hash ^= self._zsmall[a]
            self.n_small -= 1

    def has(self, config) -> bool:
        side_at = self.side_at
        for a, sd in config:
            if side_at[a] != sd:
                return False
        return True

    def tiles(self) -> list[Tile]:
        out = []
        for i, sd in enumerate(self.side_at):
            if sd:
                x, y = self.xy(i)
                out.append(Tile(x, y, sd))
        return out

    def to_tiling(self) -> Tiling:
        return Tiling(self.region, self.m, self.s, self.tiles())

    def same_as(self, other: "Board") -> bool:
        return self.hash == other.hash and self.side_at == other.side_at

    def copy(self) -> "Board":
        b = object.__new__(Board)
        b.__dict__.update(self.__dict__)
        b.side_at = list(self.side_at)
        if self.vnode is not None:
            b.vnode = list(self.vnode)
        return b

    def load(self, t: Tiling, validated: bool = False) -> None:
        """Reset the board to tiling ``t`` of the same region, keeping lookup caches."""
        if t.region != self.region or (t.m, t.s) != (self.m, self.s):
            raise TilingError("tiling does not match this board")
        if not validated:
            t.validate()
        self.side_at = [0] * len(self.side_at)
        self.hash = 0
        self.n_big = self.n_small = 0
        for tile in t.tiles:
            self._place(self.idx(tile.x, tile.y), tile.side)
        if self.m > 1:
            nodes = cayley.skeleton_bfs(self.region.base_vertex(), t.is_skeleton_edge, self.graph)
            self.vnode = [-1] * (self.Wv * (self.Hp + 1))
            for (x, y), n in nodes.items():
                self.vnode[self.vidx(x, y)] = n

    def state_key(self) -> bytes:
        return bytes(self.side_at)

    # heights (m > 1) -----------------------------------------------------------------
    def _init_kinds(self) -> None:
        self.graph = cayley.get_graph(self.m, self.s)
        self._kinds = {}
        m, s = self.m, self.s
        for kind, (W, H) in block_dimensions(m, s).items():
            X, Y = _config_tiles(kind, m, s)
            trees = []
            for cfg in (X, Y):
                steps, interior = _local_skeleton(cfg, W, H)
                lin = [(c[1] * self.Wv + c[0], p[1] * self.Wv + p[0], gen, k) for c, p, gen, k in steps]
                ilin = [y * self.Wv + x for x, y in interior]
                trees.append((steps, lin, ilin))
            potX, potY = _config_potential(X, m), _config_potential(Y, m)
            self._kinds[kind] = (W, H, X, Y, trees, potX, potY)

    def _blocks(self, site_i: int):
        blocks = self._blocks_cache.get(site_i)
        if blocks is not None:
            return blocks
        vx, vy = self.sites[site_i]
        blocks = []
        for kind in ("horizontal", "vertical", "central"):
            W, H, X, Y, trees, potX, potY = self._kinds[kind]
            ox, oy = vx - W + 1, vy - H + 1
            cX = self._config([(ox + x, oy + y, sd) for x, y, sd in X])
            cY = self._config([(ox + x, oy + y, sd) for x, y, sd in Y])
            if cX is None or cY is None:
                continue
            b = _Block()
            b.kind, b.origin, b.X, b.Y = kind, (ox, oy), cX, cY
            b.llv = self.vidx(ox, oy)
            # potential change X -> Y at this absolute position
            b.dpot = (potY[0] - potX[0]) + 2 * oy * (potY[1] - potX[1]) + 2 * ox * (potY[2] - potX[2])
            b.trees = trees
            blocks.append(b)
        self._blocks_cache[site_i] = blocks
        return blocks

    def _config_height(self, kind: str, cfg_i: int, g0: int) -> int:
        W, H, X, Y, trees, _, _ = self._kinds[kind]
        tiles = (X, Y)[cfg_i]
        steps = trees[cfg_i][0]
        move, weight = self.graph.move, self.graph.weight
        nodes = {(0, 0): g0}
        for c, p, gen, k in steps:
            nodes[c] = move(nodes[p], gen, k)
        total = 0
        for x, y, sd in tiles:
            if sd == self.m:
                h = max(weight[nodes[(x, y + j)]] for j in range(sd + 1))
            else:
                h = max(weight[nodes[(x + i, y)]] for i in range(sd + 1))
            total += sd * sd * h
        return total

    def _xy_is_up(self, b: _Block) -> bool:
        """Whether the flip X -> Y of block ``b`` raises (height, potential)."""
        g0 = self.vnode[b.llv]
        key = (b.kind, g0)
        dh = self._dh_cache.get(key)
        if dh is None:
            dh = self._config_height(b.kind, 1, g0) - self._config_height(b.kind, 0, g0)
            self._dh_cache[key] = dh
        return dh > 0 or (dh == 0 and b.dpot > 0)

    # flip discovery --------------------------------------------------------------------
    def _unit_moves(self, site_i: int):
        """(up moves, down moves) at a site for m = 1."""
        mv = self._moves_cache.get(site_i)
        if mv is not None:
            return mv
        s = self.s
        vx, vy = self.sites[site_i]
        bx, by = vx - s + 1, vy - s + 1  # anchor of the big square with UR cell v
        big = [(bx, by, s)]
        units = [(bx + i, by + j, 1) for j in range(s) for i in range(s)]
        specs = [
            # (direction, kind, origin, old, new)
            (UP, "central", (bx, by), units, big),
            (UP, "horizontal", (bx, by - 1), [(bx, by - 1, s)] + [(bx + i, vy, 1) for i in range(s)],
             big + [(bx + i, by - 1, 1) for i in range(s)]),
            (UP, "vertical", (bx - 1, by), [(bx - 1, by, s)] + [(vx, by + j, 1) for j in range(s)],
             big + [(bx - 1, by + j, 1) for j in range(s)]),
            (DOWN, "central", (bx, by), big, units),
            (DOWN, "horizontal", (bx, by), [(bx, by + 1, s)] + [(bx + i, by, 1) for i in range(s)],
             big + [(bx + i, vy + 1, 1) for i in range(s)]),
            (DOWN, "vertical", (bx, by), [(bx + 1, by, s)] + [(bx, by + j, 1) for j in range(s)],
             big + [(vx + 1, by + j, 1) for j in range(s)]),
        ]
        up, down = [], []
        for d, kind, origin, old, new in specs:
            co, cn = self._config(old), self._config(new)
            if co is None or cn is None or sorted(self._cells_of(co)) != sorted(self._cells_of(cn)):
                continue
            (up if d == UP else down).append(_Move(kind, self.region.wrap(origin), (vx, vy), d, co, cn))
        mv = (up, down)
        self._moves_cache[site_i] = mv
        return mv

    def _cells_of(self, config):
        out = []
        for a, sd in config:
            x, y = self.xy(a)
            out.extend(self._footprint(x, y, sd))
        return out

    def _drag_moves(self, site_i: int):
        """Moves of a 2x2 square onto the window at a site from its 8 neighbours ((1, 2) only)."""
        mv = self._drag_cache.get(site_i)
        if mv is not None:
            return mv
        vx, vy = self.sites[site_i]
        bx, by = vx - 1, vy - 1
        new_sq = set(self._footprint(bx, by, 2) or ())
        out = []
        seen = set()
        if new_sq:
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dx == dy == 0:
                        continue
                    ox, oy = bx + dx, by + dy
                    old_fp = self._footprint(ox, oy, 2)
                    if old_fp is None:
                        continue
                    a_old = self.idx(ox, oy)
                    if a_old in seen or a_old == self.idx(bx, by):
                        continue
                    seen.add(a_old)
                    old_sq = set(old_fp)
                    old = ((a_old, 2),) + tuple((c, 1) for c in sorted(new_sq - old_sq))
                    new = ((self.idx(bx, by), 2),) + tuple((c, 1) for c in sorted(old_sq - new_sq))
                    if dx and dy:
                        kind = "drag"
                    elif dy:
                        kind = "horizontal"
                    else:
                        kind = "vertical"
                    origin = self.region.wrap((min(ox, bx), min(oy, by)))
                    # direction by the (#big, sum x+y, sum y) order on (1, s) tilings
                    d = UP if (-dx - dy, -dy) > (0, 0) else DOWN
                    out.append(_Move(kind, origin, (vx, vy), d, old, new))
        self._drag_cache[site_i] = out
        return out

    def find(self, site_i: int, direction: str) -> Optional[_Move]:
        """The flip at a site in a direction (uniform chain), or None."""
        if self.m == 1:
            up, down = self._unit_moves(site_i)
            for mv in (up if direction == UP else down):
                if self.has(mv.old):
                    return mv
            return None
        for b in self._blocks(site_i):
            if self.has(b.X):
                to_y = True
            elif self.has(b.Y):
                to_y = False
            else:
                continue
            is_up = self._xy_is_up(b) == to_y
            if is_up != (direction == UP):
                return None
            W, H, X, Y, trees, _, _ = self._kinds[b.kind]
            old, new = (b.X, b.Y) if to_y else (b.Y, b.X)
            tree = trees[1] if to_y else trees[0]
            return _Move(b.kind, b.origin, self.sites[site_i], direction, old, new, b.llv, tree)
        return None

    def central(self, site_i: int) -> Optional[tuple]:
        """(units config, big config) of the central block at a site if it is flippable (m = 1)."""
        up, down = self._unit_moves(site_i)
        for mv in up:
            if mv.kind == "central":
                if self.has(mv.old) or self.has(mv.new):
                    return mv.old, mv.new
                return None
        return None

    def find_drag(self, site_i: int) -> Optional[_Move]:
        for mv in self._drag_moves(site_i):
            if self.has(mv.old):
                return mv
        return None

    def apply(self, mv: _Move) -> None:
        for a, sd in mv.old:
            self._remove(a, sd)
        for a, sd in mv.new:
            self._place(a, sd)
        if mv.tree is not None:
            self._relabel(mv.llv, mv.tree)

    def set_config(self, old, new) -> None:
        """Replace config ``old`` (present) by ``new`` on the same cells (m = 1 only)."""
        for a, sd in old:
            self._remove(a, sd)
        for a, sd in new:
            self._place(a, sd)

    def _relabel(self, llv: int, tree) -> None:
        _, lin, interior = tree
        vnode, move = self.vnode, self.graph.move
        for c, p, gen, k in lin:
            vnode[llv + c] = move(vnode[llv + p], gen, k)
        for c in interior:
            vnode[llv + c] = -1

    def to_flip(self, mv: _Move) -> Flip:
        xy = self.xy
        return Flip(
            mv.kind,
            mv.origin,
            mv.direction,
            mv.site,
            tuple(Tile(*xy(a), sd) for a, sd in mv.old),
            tuple(Tile(*xy(a), sd) for a, sd in mv.new),
        )

    def all_moves(self, include_drag: bool = False) -> list[_Move]:
        out = []
        for i in range(len(self.sites)):
            for d in (UP, DOWN):
                mv = self.find(i, d)
                if mv is not None:
                    out.append(mv)
            if include_drag:
                for mv in self._drag_moves(i):
                    if mv.kind == "drag" and self.has(mv.old):
                        out.append(mv)
        return out


# --- tiling-level flip API ------------------------------------------------------------

def _site_index(board: Board, site) -> int:
    try:
        return board.sites.index(tuple(site))
    except ValueError:
        raise TilingError(f"{site} is not an inner vertex") from None


def find_flip(t: Tiling, site, direction: str) -> Optional[Flip]:
    board = Board(t)
    mv = board.find(_site_index(board, board.region.wrap(tuple(site))), direction)
    return None if mv is None else board.to_flip(mv)


def apply_flip(t: Tiling, f: Flip) -> Tiling:
    idx = t.cell_index
    for tile in f.old:
        if t.region.wrap(tile.anchor) not in idx or idx[t.region.wrap(tile.anchor)] != tile:
            raise TilingError(f"flip {f} is not applicable")
    tiles = set(t.tiles)
    tiles.difference_update(f.old)
    tiles.update(f.new)
    out = Tiling(t.region, t.m, t.s, tiles)
    return out


def reverse(f: Flip, m: int, s: int, region: Optional[Region] = None) -> Flip:
    d = DOWN if f.direction == UP else UP
    site = f.site
    if m == 1 and f.kind != "central":
        big = next(t for t in f.old if t.side == s)
        site = (big.x + s - 1, big.y + s - 1)
        if region is not None:
            site = region.wrap(site)
    return Flip(f.kind, f.origin, d, site, f.new, f.old)


def enumerate_flips(t: Tiling, include_drag: bool = False) -> list[Flip]:
    board = Board(t)
    out, seen = [], set()
    for mv in board.all_moves(include_drag):
        f = board.to_flip(mv)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def order_key(t: Tiling) -> tuple:
    """The order flips move along: (height, potential), or the big-square order when m = 1."""
    if t.m == 1:
        bigs = [tile for tile in t.tiles if tile.side == t.s]
        return len(bigs), sum(b.x + b.y for b in bigs), sum(b.y for b in bigs)
    return cayley.total_height(t), cayley.potential(t)


def minimal_descent(t: Tiling) -> Tiling:
    """Apply down flips (smallest (origin, kind) first) until none is left."""
    board = Board(t)
    while True:
        best = None
        for i in range(len(board.sites)):
            mv = board.find(i, DOWN)
            if mv is not None and (best is None or (mv.origin, mv.kind) < (best.origin, best.kind)):
                best = mv
        if best is None:
            return board.to_tiling()
        board.apply(best)
