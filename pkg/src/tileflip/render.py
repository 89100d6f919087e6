"""SVG rendering of tilings and PGM export of occupancy maps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cayley
from .tiling import Tiling

OVERLAYS = ("none", "heights", "anchors")
PALETTE = {"small": "#f2d7a6", "big": "#5b8db8", "unit": "#ffffff"}


@dataclass(frozen=True)
class RenderOptions:
    cell: int = 12
    overlay: str = "none"
    stroke: str = "#222222"

    def __post_init__(self):
        if self.cell <= 0:
            raise ValueError("cell pixel size must be positive")
        if self.overlay not in OVERLAYS:
            raise ValueError(f"overlay must be one of {OVERLAYS}")


def _fill(t: Tiling, side: int) -> str:
    if side == t.s:
        return PALETTE["big"]
    return PALETTE["unit"] if side == 1 else PALETTE["small"]


def render_svg(t: Tiling, opts: RenderOptions = RenderOptions()) -> str:
    """One <rect> per tile, y axis pointing up; output is deterministic."""
    x0, y0, w, h = t.region.bbox()
    c = opts.cell
    W, H = w * c, h * c

    def px(x):
        return (x - x0) * c

    def py(y):
        return H - (y - y0) * c

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 2}" height="{H + 2}" '
        f'viewBox="-1 -1 {W + 2} {H + 2}">'
    ]
    for tile in t.key():
        lines.append(
            f'<rect x="{px(tile.x)}" y="{py(tile.y + tile.side)}" width="{tile.side * c}" '
            f'height="{tile.side * c}" fill="{_fill(t, tile.side)}" stroke="{opts.stroke}" stroke-width="1"/>'
        )
    font = max(6, c // 2)
    if opts.overlay == "heights":
        field = cayley.vertex_heights(t)
        for (x, y), hv in sorted(field.heights.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(
                f'<text x="{px(x)}" y="{py(y)}" font-size="{font}" text-anchor="middle" '
                f'dominant-baseline="middle">{hv}</text>'
            )
    elif opts.overlay == "anchors":
        for tile in t.key():
            lines.append(f'<circle cx="{px(tile.x)}" cy="{py(tile.y)}" r="{max(1, c // 6)}" fill="#c0392b"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def occupancy_pgm(fractions: np.ndarray, mask: np.ndarray | None = None) -> bytes:
    """Binary PGM, top row first, grey level 255 = always covered by big tiles."""
    f = np.clip(np.asarray(fractions, dtype=float), 0.0, 1.0)
    img = np.round(f * 255).astype(np.uint8)
    if mask is not None:
        img = np.where(mask, img, 0).astype(np.uint8)
    img = img[::-1]
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)[::-1]
