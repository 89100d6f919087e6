import math
from fractions import Fraction

import numpy as np
import pytest

from tileflip.experiments import (
    REFERENCE_COUPLING, OccupancyMap, big_coverage, contraction_check, coupling_time_table,
    coupling_trials, growth_fit, limit_shape_summary, max_workers, occupancy_map, read_csv,
    rows_to_csv, trial_seed,
)
from tileflip.mcmc import ChainConfig
from tileflip.region import rectangle, staircase_hexagon
from tileflip.tiling import Board, all_small, greedy_big


def test_trial_seeds_are_distinct():
    seeds = {trial_seed(b, i) for b in (0, 1, 42) for i in range(100)}
    assert len(seeds) == 300
    assert trial_seed(1, 5) == (1 << 64) + 5


def test_worker_cap(monkeypatch):
    monkeypatch.setenv("TILEFLIP_THREADS", "3")
    assert max_workers() == 3
    monkeypatch.delenv("TILEFLIP_THREADS")
    assert max_workers() >= 1


def test_reference_values():
    assert REFERENCE_COUPLING[(10, 2)] == 1200
    assert round(REFERENCE_COUPLING[(12, 3)]) == 16589


def test_table_is_reproducible_and_parallel_safe():
    a = rows_to_csv(coupling_time_table([6, 7], [2], trials=6, seed_base=3, workers=1))
    b = rows_to_csv(coupling_time_table([6, 7], [2], trials=6, seed_base=3, workers=2))
    assert a == b
    rows = read_csv(a)
    assert [r["n"] for r in rows] == ["6", "7"]
    assert rows[0].keys() == {"n", "s", "lambda", "trials", "mean", "stderr", "min", "max", "censored"}
    assert rows[0]["censored"] == "0"


def test_censored_trials_excluded_from_mean():
    batch = coupling_trials(10, 2, trials=3, seed_base=0, max_steps=10, workers=1)
    row = batch.row()
    assert row["censored"] == 3 and math.isnan(row["mean"])


def test_growth_fit_recovers_exponent():
    rows = [{"n": n, "s": 2, "mean": 0.7 * n ** 3.5} for n in (10, 12, 14, 16, 18)]
    rows += [{"n": n, "s": 3, "mean": 500.0} for n in (10, 12, 14, 16)]
    fit = growth_fit(rows)
    assert fit[2] == pytest.approx(3.5)
    assert fit[3] == pytest.approx(0.0, abs=1e-12)
    assert growth_fit(rows[:3]) == {}


def test_contraction_small_square():
    rep = contraction_check(rectangle(4, 4), 2, Fraction(1, 7))
    assert rep.max_drift <= 0 and rep.contracting
    hot = contraction_check(rectangle(4, 4), 2, Fraction(10, 7))
    assert hot.max_drift > 0 and not hot.contracting


def test_contraction_zero_lambda_pulls_every_pair():
    rep = contraction_check(rectangle(4, 4), 2, 0)
    assert rep.max_drift == rep.min_drift == Fraction(-1, 9)


def test_big_coverage_counts_cells():
    b = Board(greedy_big(rectangle(5, 5), 1, 2))
    assert big_coverage(b).sum() == 16


def test_occupancy_map_extremes():
    r = rectangle(8, 8)
    om = occupancy_map(all_small(r, 1, 2), ChainConfig("w1s", lam=1e-9, seed=1), 0, 5, 10)
    assert om.fractions.max() == 0 and om.samples == 5
    om = occupancy_map(greedy_big(r, 1, 2), ChainConfig("w1s", lam=1e9, seed=1), 0, 3, 1)
    assert om.fractions.sum() == 64


def test_occupancy_symmetry_of_a_symmetric_map():
    f = np.arange(12, dtype=float).reshape(3, 4)
    om = OccupancyMap(0, 0, f + f[::-1, ::-1], np.ones((3, 4), bool), 1)
    assert om.asymmetry().max() == 0


def test_limit_shape_summary_short_run():
    r = staircase_hexagon(8, 2, 3)
    om = occupancy_map(all_small(r, 2, 3), ChainConfig(seed=4), 2000, 4, 500)
    summary = limit_shape_summary(om, r)
    assert set(summary.corner_coverage) == {"bottom_left", "bottom_right", "top_left", "top_right"}
    assert all(0.5 <= v <= 1 for v in summary.corner_coverage.values())
    assert 0 <= summary.center_big <= 1
    with pytest.raises(ValueError):
        limit_shape_summary(om, rectangle(4, 4))
