import json

import pytest
from hypothesis import given, strategies as st

from tileflip.region import (
    RegionError, area, explicit, inner_vertices, is_simply_connected, parse_region,
    rectangle, region_from_json, region_to_json, staircase_hexagon, torus,
)


def stairhex_area(size, m, s):
    # 2k columns of width s; column depth min(j, 2k-1-j) adds 2m*depth rows each
    k = size // m
    return sum(s * (size + 2 * m * min(j, 2 * k - 1 - j)) for j in range(2 * k))


@given(st.integers(1, 64), st.integers(1, 64))
def test_rectangle_inner_vertex_count(w, h):
    r = rectangle(w, h)
    assert area(r) == w * h
    assert len(inner_vertices(r)) == (w - 1) * (h - 1)


@given(st.integers(1, 12), st.integers(1, 12))
def test_torus_every_vertex_is_inner(w, h):
    r = torus(w, h)
    assert len(inner_vertices(r)) == w * h
    assert r.wrap((w, -1)) == (0, h - 1)


def test_inner_vertices_row_major():
    assert inner_vertices(rectangle(3, 3)) == [(1, 1), (2, 1), (1, 2), (2, 2)]


@pytest.mark.parametrize("size,m,s", [(8, 2, 3), (50, 2, 3), (6, 1, 2), (9, 3, 4)])
def test_staircase_area_matches_column_sum(size, m, s):
    r = staircase_hexagon(size, m, s)
    assert area(r) == stairhex_area(size, m, s)
    assert is_simply_connected(r.cells)


def test_staircase_known_areas():
    assert area(staircase_hexagon(8, 2, 3)) == 336
    r = staircase_hexagon(50, 2, 3)
    assert area(r) == 14700
    assert r.bbox() == (0, 0, 150, 146)


@pytest.mark.parametrize("size,m,s", [(8, 2, 3), (12, 2, 5), (6, 1, 2)])
def test_staircase_is_centrally_symmetric(size, m, s):
    r = staircase_hexagon(size, m, s)
    x0, y0, w, h = r.bbox()
    assert {(2 * x0 + w - 1 - x, 2 * y0 + h - 1 - y) for x, y in r.cells} == set(r.cells)


def test_staircase_4_connected():
    cells = set(staircase_hexagon(8, 2, 3).cells)
    start = next(iter(cells))
    seen, todo = {start}, [start]
    while todo:
        x, y = todo.pop()
        for c in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if c in cells and c not in seen:
                seen.add(c)
                todo.append(c)
    assert seen == cells


@pytest.mark.parametrize("bad", [lambda: rectangle(0, 3), lambda: torus(-1), lambda: staircase_hexagon(7, 2, 3),
                                 lambda: staircase_hexagon(8, 3, 2), lambda: explicit([])])
def test_bad_parameters(bad):
    with pytest.raises(RegionError):
        bad()


def test_ring_is_rejected():
    ring = [(x, y) for x in range(3) for y in range(3) if (x, y) != (1, 1)]
    with pytest.raises(RegionError):
        explicit(ring)


def test_disconnected_is_rejected():
    with pytest.raises(RegionError):
        explicit([(0, 0), (2, 0)])


specs = st.one_of(
    st.tuples(st.just("rect"), st.integers(1, 20), st.integers(1, 20)).map(lambda t: f"rect:{t[1]}x{t[2]}"),
    st.tuples(st.just("torus"), st.integers(1, 20)).map(lambda t: f"torus:{t[1]}"),
    st.sampled_from(["stairhex:8,2,3", "stairhex:6,1,2", "torus:3x5"]),
)


@given(specs)
def test_json_round_trip(spec):
    r = parse_region(spec)
    back = region_from_json(json.loads(json.dumps(region_to_json(r))))
    assert back == r
    assert back.is_torus == r.is_torus


def test_explicit_round_trip(tmp_path):
    r = explicit([(0, 0), (1, 0), (1, 1), (2, 1)])
    path = tmp_path / "r.json"
    path.write_text(json.dumps(region_to_json(r)))
    assert parse_region(str(path)) == r


def test_parse_errors():
    with pytest.raises(RegionError):
        parse_region("hex:3")
    with pytest.raises(OSError):
        parse_region("/nonexistent/region.json")
