import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timemaps.errors import EmptyRange, InvalidKernel
from timemaps.events import interarrivals
from timemaps.timemap import (
    LogGrid,
    TimeMap,
    bin,
    build_map,
    default_range,
    plottable_points,
    points_from_csv,
    points_to_csv,
    smooth,
)

from .conftest import series, stream
from .oracles import direct_convolution

deltas = st.lists(st.floats(-10, 1e6, allow_nan=False), min_size=0, max_size=60)


def test_pairing_of_three_events(tiny_map):
    tmap = build_map(interarrivals(stream([0, 10, 30, 100])))
    assert tmap.points == [(10.0, 20.0, 2), (20.0, 70.0, 3)]
    assert tmap == tiny_map


@given(deltas)
def test_point_count_is_deltas_minus_one(values):
    tmap = build_map(series(values))
    assert len(tmap) == max(len(values) - 1, 0)


@given(deltas)
def test_adjacent_points_share_a_delta(values):
    tmap = build_map(series(values))
    assert np.array_equal(tmap.t_after[:-1], tmap.t_before[1:])
    assert tmap.event_index.tolist() == list(range(2, len(tmap) + 2))


@given(deltas)
def test_reversed_series_reflects_map(values):
    fwd = build_map(series(values))
    rev = build_map(series(values[::-1]))
    got = sorted(zip(rev.t_after.tolist(), rev.t_before.tolist()))
    assert got == sorted(zip(fwd.t_before.tolist(), fwd.t_after.tolist()))


def test_plottable_drops_nonpositive_points():
    tmap = plottable_points(build_map(series([1.0, 0.0, 2.0, 3.0, -1.0])))
    assert tmap.points == [(2.0, 3.0, 4)]
    assert tmap.dropped_nonpositive == 3


@settings(max_examples=200)
@given(deltas, st.integers(1, 20), st.integers(1, 20))
def test_bin_mass_accounting(values, bx, by):
    tmap = build_map(series(values))
    grid = bin(tmap, bx, by)
    assert grid.total_mass + grid.excluded == len(plottable_points(tmap))
    assert grid.cells.sum() == grid.total_mass
    assert grid.excluded == 0


def test_explicit_range_excludes_outside_points():
    tmap = TimeMap.from_points([(10.0, 10.0, 2), (1000.0, 10.0, 3), (10.0, 1e6, 4)])
    grid = bin(tmap, 4, 4, ((0.0, 2.0), (0.0, 2.0)))
    assert grid.total_mass == 1 and grid.excluded == 2


def test_upper_edge_is_inclusive():
    tmap = TimeMap.from_points([(100.0, 100.0, 2)])
    grid = bin(tmap, 4, 4, ((0.0, 2.0), (0.0, 2.0)))
    assert grid.cells[3, 3] == 1 and grid.excluded == 0


def test_empty_range_rejected():
    with pytest.raises(EmptyRange):
        bin(TimeMap.from_points([(1.0, 1.0, 2)]), 4, 4, ((1.0, 1.0), None))


def test_default_range_padding():
    assert default_range(np.array([0.0, 2.0])) == pytest.approx((-0.1, 2.1))
    assert default_range(np.array([3.0, 3.0])) == (2.5, 3.5)


def test_single_point_grid():
    grid = bin(TimeMap.from_points([(5.0, 5.0, 2)]), 50, 50)
    assert grid.total_mass == 1
    assert np.count_nonzero(grid.cells) == 1


@settings(max_examples=50)
@given(
    st.integers(1, 12),
    st.integers(1, 12),
    st.floats(0.3, 3.0),
    st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11), st.integers(1, 5)), min_size=1, max_size=10),
)
def test_smoothing_matches_direct_convolution(bx, by, sd, hits):
    cells = np.zeros((bx, by))
    for i, j, w in hits:
        cells[i % bx, j % by] += w
    grid = LogGrid(bx, by, (0, 1), (0, 1), cells, float(cells.sum()))
    out = smooth(grid, sd)
    assert np.allclose(out.cells, direct_convolution(cells, sd), rtol=1e-9, atol=1e-12)
    assert math.isclose(out.cells.sum(), cells.sum(), rel_tol=1e-9)
    assert out.excluded == grid.excluded


def test_smoothing_corner_mass_stays_on_grid():
    cells = np.zeros((10, 10))
    cells[0, 0] = 1.0
    cells[9, 9] = 2.0
    out = smooth(LogGrid(10, 10, (0, 1), (0, 1), cells, 3.0), 2.0)
    assert math.isclose(out.total_mass, 3.0, rel_tol=1e-12)
    assert out.cells[0, 0] > out.cells[1, 1]


def test_invalid_kernel():
    grid = bin(TimeMap.from_points([(5.0, 5.0, 2)]), 3, 3)
    for sd in (0.0, -1.0, float("nan")):
        with pytest.raises(InvalidKernel):
            smooth(grid, sd)


def test_grid_json_round_trip():
    tmap = build_map(series([1.0, 10.0, 100.0, 3.0, 40.0]))
    grid = bin(tmap, 5, 3)
    assert LogGrid.from_json(grid.to_json()) == grid
    assert len(json.loads(grid.to_json())["cells"]) == 15


@given(deltas)
def test_points_csv_round_trip(values):
    tmap = plottable_points(build_map(series(values, "hours")))
    again = points_from_csv(points_to_csv(tmap))
    assert again == tmap


def test_map_arrays_are_read_only(tiny_map):
    with pytest.raises(ValueError):
        tiny_map.t_before[0] = 1.0
