import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tileflip.mcmc import (
    ChainConfig, ChainState, DrawStream, grand_coupling, run, site_outcomes, step,
    step_uniform, step_weighted_1_2, step_weighted_1_s, visit_counts,
)
from tileflip.region import rectangle, torus
from tileflip.smallgraph import build_flip_graph, stationary_check
from tileflip.tiling import Board, Tile, Tiling, TilingError, all_small, greedy_big

from conftest import tilings_of


class FixedDraws:
    """Stand-in stream returning the same (site, bit, u) at every step."""

    def __init__(self, site, bit, u):
        self.value = (site, bit, u)

    def draw(self, step):
        return self.value


def test_config_validation():
    assert ChainConfig("w12").kind == "weighted_1_2"
    assert ChainConfig(lam=1.0).big_prob == 0.5
    assert ChainConfig(lam=1 / 3).big_prob == pytest.approx(0.25)
    assert ChainConfig(lam=1.0).drag_prob == 0.125
    for bad in (dict(kind="glauber"), dict(lam=0.0), dict(seed=-1), dict(seed=1 << 128)):
        with pytest.raises(ValueError):
            ChainConfig(**bad)
    with pytest.raises(TilingError):
        ChainState.start(all_small(rectangle(4, 4), 1, 2), ChainConfig("w12"))
    with pytest.raises(TilingError):
        ChainState.start(all_small(rectangle(6, 6), 2, 3), ChainConfig("w1s"))


def test_forced_merge_on_2x2():
    st_ = ChainState.start(all_small(rectangle(2, 2), 1, 2), ChainConfig())
    st_.stream = FixedDraws(0, 1, 0.5)
    step_uniform(st_)
    assert st_.tiling.tiles == {Tile(0, 0, 2)}
    assert st_.step_count == st_.rng_cursor == 1


def test_hold_keeps_state_and_advances_cursor():
    t = all_small(rectangle(2, 2), 1, 2)
    st_ = ChainState.start(t, ChainConfig())
    st_.stream = FixedDraws(0, 0, 0.5)  # down at an all-units block: nothing to do
    step(st_)
    assert st_.tiling == t and st_.step_count == 1


def test_weighted_1_s_uses_u_only():
    t = all_small(rectangle(3, 3), 1, 3)
    st_ = ChainState.start(t, ChainConfig("w1s", lam=1.0))
    site = st_.board.sites.index((2, 2))  # upper-right cell of the only 3x3 window
    st_.stream = FixedDraws(site, 0, 0.4)  # direction bit ignored, u < 1/2 asks for the big square
    step_weighted_1_s(st_)
    assert st_.tiling.count(3) == 1
    st_.stream = FixedDraws(site, 1, 0.6)
    step_weighted_1_s(st_)
    assert st_.tiling.count(3) == 0


def test_weighted_1_2_drag():
    t = Tiling(torus(4), 1, 2, [Tile(0, 0, 2)] + [Tile(x, y, 1) for x in range(4) for y in range(4)
                                                  if not (x < 2 and y < 2)])
    st_ = ChainState.start(t, ChainConfig("w12", lam=1.0))
    board = st_.board
    site = board.sites.index((2, 2))  # window at (1, 1): diagonal neighbour of the square
    st_.stream = FixedDraws(site, 0, 0.1)  # u < lam/(4(lam+1)) = 1/8
    step_weighted_1_2(st_)
    assert Tile(1, 1, 2) in st_.tiling.tiles
    st_.stream = FixedDraws(board.sites.index((3, 3)), 0, 0.2)  # above the drag threshold: hold
    before = st_.tiling
    step_weighted_1_2(st_)
    assert st_.tiling == before


def test_step_kind_mismatch():
    st_ = ChainState.start(all_small(rectangle(2, 2), 1, 2), ChainConfig())
    with pytest.raises(ValueError):
        step_weighted_1_s(st_)


def test_draw_stream_is_addressable():
    s = DrawStream(5, 17, chunk=64)
    seq = [s.draw(k) for k in range(300)]
    fresh = DrawStream(5, 17, chunk=64)
    assert [fresh.draw(k) for k in (299, 0, 150)] == [seq[299], seq[0], seq[150]]
    assert all(0 <= a < 17 and b in (0, 1) and 0 <= u < 1 for a, b, u in seq)
    assert [DrawStream(6, 17, chunk=64).draw(k) for k in range(20)] != seq[:20]


@given(st.integers(0, 2**64), st.integers(0, 3000))
@settings(max_examples=20)
def test_runs_are_reproducible(seed, n):
    t = all_small(rectangle(6, 6), 1, 2)
    a = run(ChainState.start(t, ChainConfig(seed=seed)), n)
    b = ChainState.start(t, ChainConfig(seed=seed))
    for _ in range(n):
        step(b)
    assert a.tiling == b.tiling and a.step_count == b.step_count == n


def test_callback_schedule():
    seen = []
    run(ChainState.start(all_small(rectangle(4, 4), 1, 2), ChainConfig()), 10000,
        lambda s: seen.append(s.step_count), every=3000)
    assert seen == [3000, 6000, 9000]


def test_small_lambda_empties_big_squares():
    st_ = ChainState.start(greedy_big(rectangle(6, 6), 1, 2), ChainConfig("w1s", lam=1e-9, seed=1))
    run(st_, 20000)
    assert st_.board.n_big == 0


def test_site_outcomes_sum_to_at_most_one():
    for t in tilings_of("torus", 4, 4, 1, 2):
        board = Board(t)
        for i in range(len(board.sites)):
            total = sum(p for p, *_ in site_outcomes(board, i, "weighted_1_2", Fraction(1, 3)))
            assert 0 <= total <= 1


def test_empirical_transitions_match_matrix(square8_23):
    """Pair counts of a 10^6-step run agree with the exact matrix within 4 sigma per entry."""
    g = build_flip_graph(square8_23, "uniform")
    index = {}
    board = Board(square8_23[0])
    for i, t in enumerate(square8_23):
        board.load(t)
        index[board.hash] = i
    st_ = ChainState.start(square8_23[0], ChainConfig(seed=2024))
    n = 10**6
    prev = index[st_.board.hash]
    pairs, visits = {}, [0] * len(g)
    stream, b = st_.stream, st_.board
    from tileflip.mcmc import MOVES

    move = MOVES["uniform"]
    for k in range(n):
        site, bit, u = stream.draw(k)
        move(b, site, bit, u, st_.config)
        cur = index[b.hash]
        pairs[(prev, cur)] = pairs.get((prev, cur), 0) + 1
        visits[prev] += 1
        prev = cur
    for i, row in enumerate(g.matrix):
        for j in range(len(g)):
            p = float(row.get(j, 0))
            obs = pairs.get((i, j), 0)
            sd = math.sqrt(visits[i] * p * (1 - p))
            assert abs(obs - visits[i] * p) <= 4 * sd + 1e-9, (i, j)


def test_exact_stationarity_of_weighted_chains():
    g = build_flip_graph(list(tilings_of("torus", 4, 4, 1, 2)), "weighted_1_2", Fraction(1, 3))
    rep = stationary_check(g)
    assert rep.residual == 0 and rep.detailed_balance and rep.rows_stochastic
    g = build_flip_graph(list(tilings_of("rect", 5, 5, 1, 2)), "weighted_1_s", Fraction(2, 5))
    rep = stationary_check(g)
    assert rep.residual == 0 and rep.detailed_balance


def test_visit_counts_total():
    st_ = ChainState.start(all_small(rectangle(4, 4), 1, 2), ChainConfig(seed=3))
    counts = visit_counts(st_, 5000)
    assert sum(counts.values()) == 5000 and st_.step_count == 5000


# --- coupling -------------------------------------------------------------------------------

def test_coupling_identical_start():
    t = all_small(rectangle(6, 6), 1, 2)
    res = grand_coupling(ChainConfig(), t, t)
    assert res.coupled and res.steps == 0 and res.final == t


def test_coupling_reproducible_and_permanent():
    r = rectangle(6, 6)
    a, b = greedy_big(r, 1, 2), all_small(r, 1, 2)
    x = grand_coupling(ChainConfig(seed=9), a, b, check_permanence=True)
    y = grand_coupling(ChainConfig(seed=9), a, b)
    assert x.coupled and (x.steps, x.final) == (y.steps, y.final)


def test_coupling_censoring():
    r = rectangle(10, 10)
    res = grand_coupling(ChainConfig(seed=1), greedy_big(r, 1, 2), all_small(r, 1, 2), max_steps=50)
    assert not res.coupled and res.steps == 50


def test_coupling_rejects_mismatched_regions():
    with pytest.raises(TilingError):
        grand_coupling(ChainConfig(), all_small(rectangle(4, 4), 1, 2), all_small(rectangle(4, 5), 1, 2))


def test_far_pair_takes_longer_on_average():
    r = rectangle(4, 4)
    top, bottom = greedy_big(r, 1, 2), all_small(r, 1, 2)
    near = Tiling(r, 1, 2, [Tile(0, 0, 2)] + [Tile(x, y, 1) for x in range(4) for y in range(4)
                                              if not (x < 2 and y < 2)])
    far = [grand_coupling(ChainConfig(seed=k), top, bottom).steps for k in range(200)]
    close = [grand_coupling(ChainConfig(seed=k), near, bottom).steps for k in range(200)]
    assert sum(far) > sum(close)
    assert sorted(far)[100] >= sorted(close)[100]
