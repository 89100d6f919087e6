"""Experiment drivers: coupling-time tables, exact contraction sweeps, occupancy maps."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .mcmc import ChainConfig, ChainState, grand_coupling, run
from .region import Region, inner_vertices, rectangle
from .tiling import Board, Tiling, all_small, greedy_big

CSV_FIELDS = ["n", "s", "lambda", "trials", "mean", "stderr", "min", "max", "censored"]

# Reference mean coupling times for n x n squares tiled by 1- and s-squares.
REFERENCE_COUPLING = {
    (10, 2): 1.2e3,
    (12, 3): 0.8 * 12**4,
    (14, 4): 0.9 * 14**4,
    (10, 5): 4e2,
}


def trial_seed(seed_base: int, trial: int) -> int:
    return (seed_base << 64) | trial


def max_workers() -> int:
    env = os.environ.get("TILEFLIP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# --- coupling times ----------------------------------------------------------------------

@dataclass
class TrialBatch:
    n: int
    s: int
    lam: float
    seed_base: int
    trials: int
    max_steps: int
    results: list = field(default_factory=list)  # (coupled, steps) per trial, in trial order

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")

    @property
    def coupled_steps(self) -> list:
        return [steps for ok, steps in self.results if ok]

    @property
    def censored(self) -> int:
        return sum(1 for ok, _ in self.results if not ok)

    def row(self) -> dict:
        xs = self.coupled_steps
        mean = sum(xs) / len(xs) if xs else float("nan")
        if len(xs) > 1:
            var = sum((x - mean) ** 2 for x in xs) / (len(xs) - 1)
            se = math.sqrt(var / len(xs))
        else:
            se = float("nan")
        return {
            "n": self.n,
            "s": self.s,
            "lambda": self.lam,
            "trials": self.trials,
            "mean": mean,
            "stderr": se,
            "min": min(xs) if xs else "",
            "max": max(xs) if xs else "",
            "censored": self.censored,
        }


def _one_trial(args) -> tuple[bool, int]:
    n, s, lam, seed, max_steps = args
    r = rectangle(n, n)
    res = grand_coupling(ChainConfig("uniform", lam, seed), greedy_big(r, 1, s), all_small(r, 1, s), max_steps)
    return res.coupled, res.steps


def coupling_trials(n: int, s: int, trials: int, seed_base: int = 42, max_steps: int = 10**9,
                    workers: Optional[int] = None) -> TrialBatch:
    batch = TrialBatch(n, s, 1.0, seed_base, trials, max_steps)
    jobs = [(n, s, 1.0, trial_seed(seed_base, i), max_steps) for i in range(trials)]
    workers = max_workers() if workers is None else workers
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(min(workers, trials)) as pool:
            batch.results = list(pool.map(_one_trial, jobs))
    else:
        batch.results = [_one_trial(j) for j in jobs]
    return batch


def coupling_time_table(ns: Iterable[int], ss: Iterable[int], trials: int, seed_base: int = 42,
                        max_steps: int = 10**9, workers: Optional[int] = None) -> list[dict]:
    rows = []
    for n in ns:
        for s in ss:
            if s > n:
                continue
            rows.append(coupling_trials(n, s, trials, seed_base, max_steps, workers).row())
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def growth_fit(rows: list[dict]) -> dict:
    """Least-squares slope of log(mean) against log(n), per s (diagnostic only)."""
    by_s: dict = {}
    for r in rows:
        mean = float(r["mean"])
        if mean > 0 and math.isfinite(mean):
            by_s.setdefault(int(r["s"]), []).append((int(r["n"]), mean))
    out = {}
    for s, pts in sorted(by_s.items()):
        if len({n for n, _ in pts}) < 4:
            continue
        x = np.log([n for n, _ in pts])
        y = np.log([m for _, m in pts])
        slope, _ = np.polyfit(x, y, 1)
        out[s] = float(slope)
    return out


# --- exact contraction of the weighted (1, s) chain ----------------------------------------

@dataclass
class ContractionReport:
    s: int
    lam: Fraction
    n_sites: int
    pairs: int
    max_drift: Fraction  # max over adjacent pairs of E[change in distance]
    witness: Optional[tuple]
    max_bad_sites: int
    bound: Fraction  # worst-case drift from the bad-site count ((2s-1)^2 - 1)
    min_drift: Fraction = Fraction(0)

    @property
    def contracting(self) -> bool:
        return self.max_drift <= 0


def _windows(region: Region, s: int):
    """Central window anchor per site (None for dead sites) and overlapping windows."""
    cells = region.cells
    wins = []
    for vx, vy in inner_vertices(region):
        ax, ay = vx - s + 1, vy - s + 1
        if all((ax + i, ay + j) in cells for i in range(s) for j in range(s)):
            wins.append((ax, ay))
        else:
            wins.append(None)
    live = [w for w in wins if w is not None]
    conflicts = {
        w: [u for u in live if u != w and abs(u[0] - w[0]) < s and abs(u[1] - w[1]) < s] for w in live
    }
    return wins, conflicts


def contraction_check(region: Region, s: int, lam) -> ContractionReport:
    """Exact one-step drift of the distance |bigs(A) xor bigs(B)| over all adjacent pairs.

    States are sets of big-square anchors.  Adjacent pairs differ by one central
    flip.  Both copies see the same site and the same uniform real, so every site
    contributes two outcomes weighted p and 1 - p.
    """
    from .smallgraph import enumerate_tilings

    lam = Fraction(lam)
    p_big = lam / (lam + 1)
    wins, conflicts = _windows(region, s)
    n_sites = len(wins)
    live = [w for w in wins if w is not None]

    # states as bitmasks over live windows
    bit = {w: 1 << k for k, w in enumerate(live)}
    conf = [sum(bit[u] for u in conflicts[w]) for w in live]
    bits = [bit[w] for w in live]

    def after(S, k, want_big):
        if S & bits[k] or not S & conf[k]:
            return want_big
        return False  # blocked, so absent

    pn, pd = p_big.numerator, p_big.denominator
    max_drift, min_drift, witness, pairs, max_bad = None, None, None, 0, 0
    ks = range(len(live))
    for t in enumerate_tilings(region, 1, s):
        A = sum(bit[(b.x, b.y)] for b in t.tiles if b.side == s)
        for k0 in ks:
            if A & bits[k0] or A & conf[k0]:
                continue
            B = A | bits[k0]
            pairs += 1
            # integer deltas per outcome; exact weighting happens once per pair
            up_sum = down_sum = 0
            bad = 0
            for k in ks:
                before = k == k0
                d_up = (after(A, k, True) != after(B, k, True)) - before
                d_down = (after(A, k, False) != after(B, k, False)) - before
                up_sum += d_up
                down_sum += d_down
                if pn * d_up + (pd - pn) * d_down > 0:
                    bad += 1
            drift = (p_big * up_sum + (1 - p_big) * down_sum) / n_sites
            max_bad = max(max_bad, bad)
            if max_drift is None or drift > max_drift:
                max_drift, witness = drift, (t, live[k0])
            if min_drift is None or drift < min_drift:
                min_drift = drift
    bound = (-1 + ((2 * s - 1) ** 2 - 1) * p_big) / n_sites
    return ContractionReport(s, lam, n_sites, pairs, max_drift if max_drift is not None else Fraction(0),
                             witness, max_bad, bound, min_drift if min_drift is not None else Fraction(0))


# --- occupancy maps -----------------------------------------------------------------------

@dataclass
class OccupancyMap:
    """Fraction of samples in which each cell of the bounding box is covered by an s-tile."""

    x0: int
    y0: int
    counts: np.ndarray  # (height, width) s-tile coverage counts
    mask: np.ndarray  # cells belonging to the region
    samples: int

    @property
    def fractions(self) -> np.ndarray:
        return self.counts / max(self.samples, 1)

    def rotated(self) -> np.ndarray:
        return self.fractions[::-1, ::-1]

    def asymmetry(self) -> np.ndarray:
        """|f(c) - f(rot c)| on region cells (zero elsewhere)."""
        d = np.abs(self.fractions - self.rotated())
        return np.where(self.mask & self.mask[::-1, ::-1], d, 0.0)

    def to_json(self) -> dict:
        return {"x0": self.x0, "y0": self.y0, "samples": self.samples,
                "fractions": np.round(self.fractions, 6).tolist()}


def big_coverage(board: Board) -> np.ndarray:
    """0/1 array over the padded box marking cells covered by s-tiles."""
    s = board.s
    anchors = np.frombuffer(bytes(board.side_at), dtype=np.uint8).reshape(board.Hp, board.Wp) == s
    cov = np.zeros(anchors.shape, dtype=np.int32)
    for j in range(s):
        for i in range(s):
            cov[j:, i:] += anchors[: anchors.shape[0] - j, : anchors.shape[1] - i]
    return cov


def occupancy_map(t: Tiling, cfg: ChainConfig, burn_in: int, samples: int, thinning: int,
                  progress=None) -> OccupancyMap:
    if t.region.is_torus:
        raise ValueError("occupancy maps use flat regions")
    st = ChainState.start(t, cfg)
    run(st, burn_in)
    b = st.board
    x0, y0, w, h = t.region.bbox()
    P = b.P
    counts = np.zeros((h, w), dtype=np.int64)
    for k in range(samples):
        run(st, thinning)
        counts += big_coverage(b)[P:P + h, P:P + w]
        if progress is not None:
            progress(k + 1, st)
    mask = np.zeros((h, w), dtype=bool)
    for x, y in t.region.cells:
        mask[y - y0, x - x0] = True
    return OccupancyMap(x0, y0, counts, mask, samples)


@dataclass
class LimitShapeSummary:
    corner_coverage: dict  # zone name -> mean coverage by the zone's majority tile type
    center_big: float  # mean s-tile coverage of the central box
    max_asymmetry: float
    mean_asymmetry: float
    samples: int


def limit_shape_summary(om: OccupancyMap, region: Region) -> LimitShapeSummary:
    """Corner, centre and symmetry statistics of a staircase-hexagon occupancy map.

    Corner zones are the outer halves of the caps above and below the flat band,
    split at the vertical centre line (one zone per staircase side).  The centre
    is the box of half the band height by half the width around the middle.
    """
    spec = region.spec
    if spec is None or spec.kind != "staircase_hexagon":
        raise ValueError("limit-shape zones are defined for staircase hexagons")
    size, m, _ = spec.params
    k = size // m
    band_lo = m * (k - 1) - om.y0
    band_hi = band_lo + size
    cap = m * k
    f, mask = om.fractions, om.mask
    h, w = f.shape
    ys = np.arange(h)[:, None]
    xs = np.arange(w)[None, :]
    top = ys >= band_hi + cap // 2
    bottom = ys < band_lo - cap // 2
    left, right = xs < w // 2, xs >= w // 2
    zones = {}
    for name, z in (("bottom_left", bottom & left), ("bottom_right", bottom & right),
                    ("top_left", top & left), ("top_right", top & right)):
        cells = mask & z
        big = float(f[cells].mean())
        zones[name] = max(big, 1 - big)
    centre = mask & (np.abs(ys - (h - 1) / 2) < size / 4) & (np.abs(xs - (w - 1) / 2) < w / 4)
    asym = om.asymmetry()[mask]
    return LimitShapeSummary(zones, float(f[centre].mean()), float(asym.max()), float(asym.mean()), om.samples)
