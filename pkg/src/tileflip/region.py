"""Finite regions of the square lattice.

A cell ``(x, y)`` is the unit square ``[x, x+1] x [y, y+1]``; a vertex ``(x, y)``
is a lattice point.  Regions are either flat (an arbitrary simply connected cell
set) or a full ``w x h`` torus.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

Cell = tuple[int, int]
Vertex = tuple[int, int]


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class RegionSpec:
    """How a region was built: ``kind`` in rectangle/torus/staircase_hexagon/explicit."""

    kind: str
    params: tuple = ()
    cells: Optional[tuple[Cell, ...]] = None

    def label(self) -> str:
        if self.kind == "rectangle":
            return "rect:{}x{}".format(*self.params)
        if self.kind == "torus":
            w, h = self.params
            return f"torus:{w}" if w == h else f"torus:{w}x{h}"
        if self.kind == "staircase_hexagon":
            return "stairhex:{},{},{}".format(*self.params)
        return "explicit"


@dataclass(frozen=True)
class Region:
    cells: frozenset
    torus: Optional[tuple[int, int]] = None
    name: str = field(default="", compare=False)
    spec: Optional[RegionSpec] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.cells:
            raise RegionError("region must be nonempty")
        if self.torus is not None:
            w, h = self.torus
            if w <= 0 or h <= 0:
                raise RegionError("torus dimensions must be positive")
            if self.cells != frozenset((x, y) for y in range(h) for x in range(w)):
                raise RegionError("torus region must contain the full block")
        elif not is_simply_connected(self.cells):
            raise RegionError("flat region must be simply connected")

    @property
    def is_torus(self) -> bool:
        return self.torus is not None

    def bbox(self) -> tuple[int, int, int, int]:
        """(xmin, ymin, width, height) of the cell bounding box."""
        xs = [c[0] for c in self.cells]
        ys = [c[1] for c in self.cells]
        return min(xs), min(ys), max(xs) - min(xs) + 1, max(ys) - min(ys) + 1

    def __contains__(self, cell) -> bool:
        if self.torus is not None:
            return True
        return cell in self.cells

    def wrap(self, cell: Cell) -> Cell:
        if self.torus is None:
            return cell
        w, h = self.torus
        return cell[0] % w, cell[1] % h

    def base_vertex(self) -> Vertex:
        """Lower-left corner of the lowest, then leftmost, cell."""
        x, y = min(self.cells, key=lambda c: (c[1], c[0]))
        return x, y

    def __len__(self) -> int:
        return len(self.cells)


def _neighbors4(c: Cell):
    x, y = c
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def is_simply_connected(cells: Iterable[Cell]) -> bool:
    cells = set(cells)
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    todo = [start]
    while todo:
        for n in _neighbors4(todo.pop()):
            if n in cells and n not in seen:
                seen.add(n)
                todo.append(n)
    if len(seen) != len(cells):
        return False
    # every complement cell of the 1-margin box must reach the margin
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    outside = {(x0, y0)}
    todo = [(x0, y0)]
    while todo:
        for n in _neighbors4(todo.pop()):
            if x0 <= n[0] <= x1 and y0 <= n[1] <= y1 and n not in cells and n not in outside:
                outside.add(n)
                todo.append(n)
    box = (x1 - x0 + 1) * (y1 - y0 + 1)
    return len(outside) + len(cells) == box


def staircase_hexagon_cells(size: int, m: int, s: int) -> list[Cell]:
    """Hexagon with vertical sides of height ``size`` and four staircase sides.

    Each staircase side has ``size // m`` stairs of horizontal size ``s`` and rise
    ``m``.  Bottom and top are V and inverted-V shaped, so each staircase is
    retraced by its mirror image and the region is symmetric under a half turn.
    """
    k = size // m
    cells = []
    for j in range(2 * k):
        depth = min(j, 2 * k - 1 - j)
        lo = m * (k - 1) - m * depth
        hi = m * (k - 1) + size + m * depth
        for x in range(j * s, (j + 1) * s):
            for y in range(lo, hi):
                cells.append((x, y))
    return cells


def build_region(spec: RegionSpec, name: str = "") -> Region:
    kind, p = spec.kind, spec.params
    if kind == "rectangle":
        w, h = p
        if w <= 0 or h <= 0:
            raise RegionError("rectangle dimensions must be positive")
        cells = frozenset((x, y) for y in range(h) for x in range(w))
        return Region(cells, None, name or spec.label(), spec)
    if kind == "torus":
        w, h = p
        if w <= 0 or h <= 0:
            raise RegionError("torus dimensions must be positive")
        cells = frozenset((x, y) for y in range(h) for x in range(w))
        return Region(cells, (w, h), name or spec.label(), spec)
    if kind == "staircase_hexagon":
        size, m, s = p
        if size <= 0 or m <= 0 or s <= 0:
            raise RegionError("staircase parameters must be positive")
        if not m < s:
            raise RegionError("staircase hexagon needs m < s")
        if size % m:
            raise RegionError(f"size must be a positive multiple of the rise m={m}")
        return Region(frozenset(staircase_hexagon_cells(size, m, s)), None, name or spec.label(), spec)
    if kind == "explicit":
        if not spec.cells:
            raise RegionError("explicit region needs cells")
        return Region(frozenset(map(tuple, spec.cells)), None, name or "explicit", spec)
    raise RegionError(f"unknown region kind {kind!r}")


def rectangle(w: int, h: int) -> Region:
    return build_region(RegionSpec("rectangle", (w, h)))


def torus(w: int, h: Optional[int] = None) -> Region:
    return build_region(RegionSpec("torus", (w, w if h is None else h)))


def staircase_hexagon(size: int, m: int, s: int) -> Region:
    return build_region(RegionSpec("staircase_hexagon", (size, m, s)))


def explicit(cells: Iterable[Cell]) -> Region:
    return build_region(RegionSpec("explicit", (), tuple(sorted(map(tuple, cells)))))


def inner_vertices(r: Region) -> list[Vertex]:
    """Vertices incident to four cells of ``r`` (all vertices on a torus), row-major."""
    if r.torus is not None:
        w, h = r.torus
        return [(x, y) for y in range(h) for x in range(w)]
    cells = r.cells
    out = []
    x0, y0, w, h = r.bbox()
    for y in range(y0 + 1, y0 + h):
        for x in range(x0 + 1, x0 + w):
            if (x, y) in cells and (x - 1, y) in cells and (x, y - 1) in cells and (x - 1, y - 1) in cells:
                out.append((x, y))
    return out


def area(r: Region) -> int:
    return len(r.cells)


_SPEC_RE = {
    "rect": re.compile(r"^rect:(\d+)x(\d+)$"),
    "torus": re.compile(r"^torus:(\d+)(?:x(\d+))?$"),
    "stairhex": re.compile(r"^stairhex:(\d+),(\d+),(\d+)$"),
}


def parse_region(text: str) -> Region:
    """Parse ``rect:WxH``, ``torus:N``, ``stairhex:SIZE,M,S`` or a JSON file path."""
    text = text.strip()
    if (m := _SPEC_RE["rect"].match(text)):
        return rectangle(int(m[1]), int(m[2]))
    if (m := _SPEC_RE["torus"].match(text)):
        return torus(int(m[1]), int(m[2]) if m[2] else None)
    if (m := _SPEC_RE["stairhex"].match(text)):
        return staircase_hexagon(int(m[1]), int(m[2]), int(m[3]))
    if ":" in text.split("/")[0] and not text.endswith(".json"):
        raise RegionError(f"cannot parse region spec {text!r}")
    with open(text) as fh:
        return region_from_json(json.load(fh))


def region_to_json(r: Region) -> dict:
    spec = r.spec or RegionSpec("explicit", (), tuple(sorted(r.cells)))
    names = {
        "rectangle": ("width", "height"),
        "torus": ("width", "height"),
        "staircase_hexagon": ("size", "m", "s"),
        "explicit": (),
    }[spec.kind]
    doc = {"kind": spec.kind, "params": dict(zip(names, spec.params))}
    if spec.kind == "explicit":
        doc["cells"] = [list(c) for c in sorted(r.cells)]
    return doc


def region_from_json(doc: dict) -> Region:
    kind = doc["kind"]
    params = doc.get("params", {})
    if kind in ("rectangle", "torus"):
        w = params["width"]
        return build_region(RegionSpec(kind, (w, params.get("height", w))))
    if kind == "staircase_hexagon":
        return build_region(RegionSpec(kind, (params["size"], params["m"], params["s"])))
    if kind == "explicit":
        return explicit(tuple(c) for c in doc["cells"])
    raise RegionError(f"unknown region kind {kind!r}")
