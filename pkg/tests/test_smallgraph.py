from fractions import Fraction

import pytest

from tileflip.region import rectangle, torus
from tileflip.smallgraph import (
    BudgetExceeded, TilingGraph, build_flip_graph, canonical_path, congestion, descent_fixpoints,
    enumerate_tilings, graph_stats, is_connected, stationary_check,
)
from tileflip.tiling import TilingError, all_small, greedy_big

from conftest import tilings_of


@pytest.mark.parametrize("w,h,count", [(2, 2, 2), (2, 3, 3), (3, 3, 5), (4, 4, 35), (5, 5, 314)])
def test_rect_1_2_counts(w, h, count):
    assert len(tilings_of("rect", w, h, 1, 2)) == count


def kings_on_board(a, b):
    """Non-attacking king placements on an a x b board, by row-profile transfer."""
    rows = [m for m in range(1 << a) if not (m & (m >> 1))]
    counts = {m: 1 for m in rows}
    for _ in range(b - 1):
        counts = {m: sum(c for p, c in counts.items() if not (m & (p | p << 1 | p >> 1))) for m in rows}
    return sum(counts.values())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rect_counts_match_king_transfer_matrix(n):
    # big squares on an n x n square correspond to kings on the (n-1) x (n-1) inner vertices
    assert len(tilings_of("rect", n, n, 1, 2)) == kings_on_board(n - 1, n - 1)


def test_other_counts():
    assert len(tilings_of("rect", 6, 6, 1, 3)) == 60
    assert len(tilings_of("rect", 8, 8, 2, 3)) == 9
    assert len(tilings_of("rect", 10, 10, 2, 3)) == 28
    assert enumerate_tilings(rectangle(5, 5), 2, 3) == []


def test_enumeration_is_duplicate_free_and_valid():
    ts = tilings_of("rect", 5, 5, 1, 2)
    assert len(set(ts)) == len(ts)
    assert all(t.is_valid() for t in ts)


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_tilings(rectangle(6, 6), 1, 2, budget=100)


def test_small_graph_shapes():
    g = build_flip_graph(list(tilings_of("rect", 2, 2, 1, 2)))
    assert graph_stats(g) == {"vertices": 2, "edges": 1, "diameter": 1, "degree_histogram": {1: 2}}
    g = build_flip_graph(list(tilings_of("rect", 4, 4, 1, 2)))
    stats = graph_stats(g)
    assert (stats["vertices"], stats["edges"], stats["diameter"]) == (35, 113, 5)


def test_8x8_graph(square8_23):
    stats = graph_stats(build_flip_graph(square8_23))
    assert stats == {"vertices": 9, "edges": 12, "diameter": 4, "degree_histogram": {2: 4, 3: 4, 4: 1}}


def test_uniform_matrix_exactly_symmetric(square8_23):
    g = build_flip_graph(square8_23)
    rep = stationary_check(g)
    assert rep.residual == 0 and rep.symmetric and rep.rows_stochastic
    assert all(isinstance(p, Fraction) for row in g.matrix for p in row.values())


def test_flip_outside_state_space_is_caught():
    ts = list(tilings_of("rect", 3, 3, 1, 2))
    with pytest.raises(TilingError):
        build_flip_graph(ts[:2])


def test_disconnected_graph_reported():
    g = TilingGraph(rectangle(2, 2), 1, 2, "uniform", Fraction(1), [None, None], set(),
                    [{0: Fraction(1)}, {1: Fraction(1)}])
    assert not is_connected(g)
    with pytest.raises(TilingError):
        stationary_check(g)


def test_descent_fixpoints():
    assert descent_fixpoints(list(tilings_of("rect", 4, 4, 1, 2))) == {all_small(rectangle(4, 4), 1, 2)}


def test_canonical_path_basics():
    r = rectangle(4, 4)
    a, b = greedy_big(r, 1, 2), all_small(r, 1, 2)
    assert canonical_path(a, a).length == 0
    path = canonical_path(a, b)
    assert path.ok and path.states[0] == a and path.states[-1] == b
    g = build_flip_graph(list(tilings_of("rect", 4, 4, 1, 2)))
    index = {t: i for i, t in enumerate(g.vertices)}
    for x, y in zip(path.states, path.states[1:]):
        assert g.prob(index[x], index[y]) > 0
    with pytest.raises(TilingError):
        canonical_path(all_small(rectangle(6, 6), 2, 3), all_small(rectangle(6, 6), 2, 3))


def test_congestion_small():
    rep = congestion(rectangle(3, 3))
    assert rep.ok and rep.pairs == 25 and rep.max_length <= 9


def test_graph_json():
    g = build_flip_graph(list(tilings_of("rect", 2, 3, 1, 2)))
    doc = g.to_json(with_matrix=True)
    assert len(doc["vertices"]) == 3 and len(doc["matrix"]) == 3
    assert sum(Fraction(p) for p in doc["matrix"][0].values()) == 1


def test_torus_weighted_graph():
    g = build_flip_graph(list(tilings_of("torus", 3, 3, 1, 2)), "weighted_1_2", Fraction(1, 7))
    rep = stationary_check(g)
    assert rep.residual == 0 and not rep.symmetric and rep.detailed_balance
