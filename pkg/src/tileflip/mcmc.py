"""Flip chains on square tilings and the grand-coupling sampler.

Three chains share one randomness layout: every step consumes a site index, a
direction bit and a uniform real, whether or not anything moves.  Draws come from
a counter-based Philox stream addressed by (seed, step), so coupled copies and
parallel trials replay exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .tiling import DOWN, UP, Board, Tiling, TilingError

CHAINS = ("uniform", "weighted_1_2", "weighted_1_s")
CHAIN_ALIASES = {"uniform": "uniform", "w12": "weighted_1_2", "w1s": "weighted_1_s"}
CHUNK = 4096


@dataclass(frozen=True)
class ChainConfig:
    kind: str = "uniform"
    lam: float = 1.0
    seed: int = 0

    def __post_init__(self):
        kind = CHAIN_ALIASES.get(self.kind, self.kind)
        if kind not in CHAINS:
            raise ValueError(f"unknown chain {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not 0 <= self.seed < 1 << 128:
            raise ValueError("seed must fit in 128 bits")

    def check(self, t: Tiling) -> None:
        if self.kind == "weighted_1_2":
            if (t.m, t.s) != (1, 2) or not t.region.is_torus:
                raise TilingError("weighted_1_2 needs (m, s) = (1, 2) on a torus")
        if self.kind == "weighted_1_s" and t.m != 1:
            raise TilingError("weighted_1_s needs m = 1")

    @property
    def big_prob(self) -> float:
        return self.lam / (self.lam + 1)

    @property
    def drag_prob(self) -> float:
        return self.lam / (4 * (self.lam + 1))


class DrawStream:
    """Per-step draws (site, direction bit, u) addressed by step index."""

    def __init__(self, seed: int, n_sites: int, chunk: int = CHUNK):
        self.seed = int(seed)
        self.n_sites = n_sites
        self.chunk_size = chunk
        self._cid = -1
        self._buf = None

    def chunk(self, c: int):
        if c != self._cid:
            bg = np.random.Philox(key=self.seed, counter=[0, c, 0, 0])
            g = np.random.Generator(bg)
            sites = g.integers(0, self.n_sites, self.chunk_size).tolist()
            dirs = g.integers(0, 2, self.chunk_size).tolist()
            us = g.random(self.chunk_size).tolist()
            self._buf = (sites, dirs, us)
            self._cid = c
        return self._buf

    def draw(self, step: int) -> tuple[int, int, float]:
        sites, dirs, us = self.chunk(step // self.chunk_size)
        k = step % self.chunk_size
        return sites[k], dirs[k], us[k]


@dataclass
class ChainState:
    board: Board
    config: ChainConfig
    step_count: int = 0
    stream: Optional[DrawStream] = field(default=None, repr=False)

    @classmethod
    def start(cls, t: Tiling, config: ChainConfig, board: Optional[Board] = None) -> "ChainState":
        config.check(t)
        if board is None:
            board = Board(t)
        return cls(board, config, 0, DrawStream(config.seed, len(board.sites)))

    @property
    def tiling(self) -> Tiling:
        return self.board.to_tiling()

    @property
    def rng_cursor(self) -> int:
        return self.step_count


# --- one transition given the draw -----------------------------------------------------

def _move_uniform(board: Board, site: int, bit: int, u: float, cfg: ChainConfig) -> bool:
    mv = board.find(site, UP if bit else DOWN)
    if mv is None:
        return False
    board.apply(mv)
    return True


def _move_weighted_1_s(board: Board, site: int, bit: int, u: float, cfg: ChainConfig) -> bool:
    c = board.central(site)
    if c is None:
        return False
    units, big = c
    want_big = u < cfg.big_prob
    if want_big and not board.has(big):
        board.set_config(units, big)
        return True
    if not want_big and board.has(big):
        board.set_config(big, units)
        return True
    return False


def _move_weighted_1_2(board: Board, site: int, bit: int, u: float, cfg: ChainConfig) -> bool:
    if board.central(site) is not None:
        return _move_weighted_1_s(board, site, bit, u, cfg)
    mv = board.find_drag(site)
    if mv is not None and u < cfg.drag_prob:
        board.apply(mv)
        return True
    return False


MOVES = {"uniform": _move_uniform, "weighted_1_2": _move_weighted_1_2, "weighted_1_s": _move_weighted_1_s}


def step(st: ChainState) -> ChainState:
    site, bit, u = st.stream.draw(st.step_count)
    MOVES[st.config.kind](st.board, site, bit, u, st.config)
    st.step_count += 1
    return st


def _step_kind(st: ChainState, kind: str) -> ChainState:
    if st.config.kind != kind:
        raise ValueError(f"state runs {st.config.kind}, not {kind}")
    return step(st)


def step_uniform(st: ChainState) -> ChainState:
    return _step_kind(st, "uniform")


def step_weighted_1_2(st: ChainState) -> ChainState:
    return _step_kind(st, "weighted_1_2")


def step_weighted_1_s(st: ChainState) -> ChainState:
    return _step_kind(st, "weighted_1_s")


def run(st: ChainState, n_steps: int, callback=None, every: int = 0) -> ChainState:
    """Advance ``n_steps``; ``callback(st)`` fires after every ``every`` steps if given."""
    move = MOVES[st.config.kind]
    board, cfg, stream = st.board, st.config, st.stream
    t, end = st.step_count, st.step_count + n_steps
    C = stream.chunk_size
    while t < end:
        sites, dirs, us = stream.chunk(t // C)
        k0 = t % C
        k1 = min(C, k0 + end - t)
        if callback is not None and every:
            # stop at the next callback boundary
            k1 = min(k1, k0 + every - t % every)
        for k in range(k0, k1):
            move(board, sites[k], dirs[k], us[k], cfg)
        t += k1 - k0
        st.step_count = t
        if callback is not None and every and t % every == 0:
            callback(st)
    return st


# --- coupling --------------------------------------------------------------------------

@dataclass
class CouplingResult:
    coupled: bool
    steps: int
    final: Tiling


def grand_coupling(
    cfg: ChainConfig,
    a0: Tiling,
    b0: Tiling,
    max_steps: int = 10**9,
    check_permanence: bool = False,
) -> CouplingResult:
    """Run two copies on one draw stream until they agree or ``max_steps`` pass."""
    if a0.region != b0.region or (a0.m, a0.s) != (b0.m, b0.s):
        raise TilingError("coupled tilings must share region and tile sizes")
    cfg.check(a0)
    a = Board(a0)
    b = a.copy()
    b.load(b0)
    if a.same_as(b):
        return CouplingResult(True, 0, a.to_tiling())
    move = MOVES[cfg.kind]
    stream = DrawStream(cfg.seed, len(a.sites))
    C = stream.chunk_size
    t = 0
    while t < max_steps:
        sites, dirs, us = stream.chunk(t // C)
        k0 = t % C
        k1 = min(C, k0 + max_steps - t)
        for k in range(k0, k1):
            site, bit, u = sites[k], dirs[k], us[k]
            move(a, site, bit, u, cfg)
            move(b, site, bit, u, cfg)
            if a.hash == b.hash and a.side_at == b.side_at:
                steps = t + k - k0 + 1
                if check_permanence:
                    _assert_stays_coupled(a, b, stream, steps, cfg)
                return CouplingResult(True, steps, a.to_tiling())
        t += k1 - k0
    return CouplingResult(False, max_steps, a.to_tiling())


def _assert_stays_coupled(a: Board, b: Board, stream: DrawStream, t: int, cfg: ChainConfig, extra: int = 1000):
    a, b = a.copy(), b.copy()
    move = MOVES[cfg.kind]
    for j in range(t, t + extra):
        site, bit, u = stream.draw(j)
        move(a, site, bit, u, cfg)
        move(b, site, bit, u, cfg)
        assert a.same_as(b), f"copies separated at step {j}"


# --- exact per-site transition law ------------------------------------------------------

def site_outcomes(board: Board, site: int, kind: str, lam: Fraction = Fraction(1)):
    """Exact (probability, old config, new config) moves given the site draw.

    Probabilities are conditional on the site; the remainder is a hold.
    """
    lam = Fraction(lam)
    if kind == "uniform":
        out = []
        for d in (UP, DOWN):
            mv = board.find(site, d)
            if mv is not None:
                out.append((Fraction(1, 2), mv))
        return [(p, mv.old, mv.new, mv) for p, mv in out]
    p_big = lam / (lam + 1)
    c = board.central(site)
    if c is not None:
        units, big = c
        if board.has(big):
            return [(1 - p_big, big, units, None)]
        return [(p_big, units, big, None)]
    if kind == "weighted_1_2":
        mv = board.find_drag(site)
        if mv is not None:
            return [(lam / (4 * (lam + 1)), mv.old, mv.new, mv)]
    return []


def visit_counts(st: ChainState, n_steps: int) -> dict:
    """Advance ``n_steps`` and count visits per state hash (one count per step)."""
    move = MOVES[st.config.kind]
    board, cfg, stream = st.board, st.config, st.stream
    counts: dict = {}
    get = counts.get
    t, end = st.step_count, st.step_count + n_steps
    C = stream.chunk_size
    while t < end:
        sites, dirs, us = stream.chunk(t // C)
        k0 = t % C
        k1 = min(C, k0 + end - t)
        for k in range(k0, k1):
            move(board, sites[k], dirs[k], us[k], cfg)
            h = board.hash
            counts[h] = get(h, 0) + 1
        t += k1 - k0
    st.step_count = t
    return counts
