import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timemaps.dgp import Exponential, default_specs, sample
from timemaps.errors import DegenerateSeries, EmptyGrid
from timemaps.events import interarrivals
from timemaps.features import (
    DEFAULT_THRESHOLDS,
    FeatureProfile,
    burstiness_cv,
    coverage,
    diurnal_gap,
    line_features,
    nearest_dgp,
    profile_map,
    profile_stream,
)
from timemaps.synthetic import constant_stream, diurnal_stream, scheduler_stream
from timemaps.timemap import LogGrid, TimeMap, bin

from .conftest import series


def grid_of(cells):
    cells = np.asarray(cells, dtype=float)
    bx, by = cells.shape
    return LogGrid(bx, by, (0, 1), (0, 1), cells, float(cells.sum()))


def brute_gap(deltas_s, lo=600.0, hi=86400.0):
    """Widest empty log10 interval closed above by a delta in [lo, hi]."""
    vals = sorted({math.log10(d) for d in deltas_s if d > 0})
    best = None
    for i in range(1, len(vals)):
        if lo <= 10 ** vals[i] * (1 + 1e-12) and 10 ** vals[i] <= hi * (1 + 1e-12):
            w = vals[i] - vals[i - 1]
            best = w if best is None else max(best, w)
    return best


def test_vertical_line_detected():
    cells = np.zeros((10, 10))
    cells[3, :] = 1.0
    cells[3, 2] += 5.0
    lf = line_features(grid_of(cells))
    assert lf.vertical_detected and not lf.horizontal_detected
    assert lf.vertical_score >= 1.0


def test_horizontal_line_detected():
    cells = np.zeros((10, 10))
    cells[:, 0] = 1.0
    lf = line_features(grid_of(cells))
    assert lf.horizontal_detected and not lf.vertical_detected


def test_short_column_is_not_a_line():
    cells = np.zeros((10, 10))
    cells[3, 4:7] = 10.0
    cells[0, 0] = 1.0
    lf = line_features(grid_of(cells))
    assert not lf.vertical_detected
    assert lf.vertical_score == pytest.approx(0.3 / 0.5)


def test_empty_grid_rejected():
    with pytest.raises(EmptyGrid):
        line_features(grid_of(np.zeros((3, 3))))


def test_exponential_map_has_no_lines():
    hits = 0
    for seed in range(20):
        tmap = TimeMap(*_pairs(sample(Exponential(1.0), 1000, seed).deltas))
        lf = line_features(bin(tmap))
        hits += lf.vertical_detected or lf.horizontal_detected
    assert hits == 0


def _pairs(d):
    return d[:-1], d[1:], np.arange(2, len(d) + 1)


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), min_size=1, max_size=40), st.integers(0, 9), st.integers(0, 9))
def test_coverage_monotone_under_adding_points(hits, i, j):
    cells = np.zeros((10, 10))
    for a, b in hits:
        cells[a, b] += 1
    before = coverage(grid_of(cells))
    cells[i, j] += 1
    after = coverage(grid_of(cells))
    assert before <= after <= before + 0.01 + 1e-12


def test_diurnal_gap_simple():
    five_min, eight_h = 300.0, 8 * 3600.0
    hit, width = diurnal_gap(series([five_min] * 20 + [eight_h] * 3))
    assert hit and width == pytest.approx(math.log10(eight_h / five_min))


def test_diurnal_gap_outside_window_ignored():
    # the upper end (3 days) lies beyond 24 h
    hit, width = diurnal_gap(series([60.0] * 10 + [3 * 86400.0]))
    assert not hit and width is None


@settings(max_examples=200)
@given(st.lists(st.floats(1.0, 3e5), min_size=0, max_size=50))
def test_diurnal_gap_matches_brute_force(values):
    hit, width = diurnal_gap(series(values), 0.5)
    expected = brute_gap(values)
    if expected is None:
        assert width is None and not hit
    else:
        assert width == pytest.approx(expected, abs=1e-9)
        assert hit == (width >= 0.5)


def test_diurnal_gap_honours_units():
    hit, _ = diurnal_gap(series([5 / 60] * 20 + [8.0] * 3, "hours"))
    assert hit


def test_burstiness_cv():
    assert burstiness_cv(series([1.0, 3.0])) == pytest.approx(math.sqrt(2) / 2)
    assert burstiness_cv(series([5.0] * 10)) == 0.0
    with pytest.raises(DegenerateSeries):
        burstiness_cv(series([1.0]))
    with pytest.raises(DegenerateSeries):
        burstiness_cv(series([0.0, 0.0]))


@pytest.mark.parametrize("name", sorted(default_specs()))
def test_nearest_dgp_recovers_reference_process(name):
    cv = burstiness_cv(sample(default_specs()[name], 20000, 4))
    assert nearest_dgp(cv, 0.5, 0.02) == name


def test_nearest_dgp_small_dispersion():
    assert nearest_dgp(0.01, 0.005, 0.02) == "gaussian (small dispersion)"
    assert nearest_dgp(0.0, 0.0, 0.02) == "none"


def test_profile_of_constant_stream():
    p = profile_stream(constant_stream(100))
    assert p.n_events == 100 and p.n_points == 98
    assert p.coverage == pytest.approx(1 / 2500)
    assert p.burstiness_cv == 0.0
    assert p.occupancy[0] == 1.0


def test_profile_of_empty_series():
    p, tmap, grid = profile_map(series([]))
    assert p == FeatureProfile() and grid is None and len(tmap) == 0


def test_profile_counts_dropped_points():
    p, _, _ = profile_map(series([1.0, 0.0, 2.0, 3.0]))
    assert p.n_points == 1 and p.dropped_nonpositive == 2 and p.n_events == 5


def test_synthetic_signatures():
    sched = profile_stream(scheduler_stream(1))
    assert sched.vertical_detected or sched.horizontal_detected
    assert not sched.diurnal_gap_detected
    human = profile_stream(diurnal_stream(1))
    assert human.diurnal_gap_detected and not human.vertical_detected
    flat = profile_stream(diurnal_stream(1, with_nights=False))
    assert not flat.diurnal_gap_detected


def test_thresholds_are_parameters():
    s = interarrivals(diurnal_stream(2))
    p, _, _ = profile_map(s, thresholds={"gap_threshold": 5.0})
    assert not p.diurnal_gap_detected
    assert DEFAULT_THRESHOLDS["gap_threshold"] == 0.5


def test_alternating_short_and_sleep_gaps():
    rng = np.random.default_rng(3)
    short = 300.0 * rng.uniform(0.9, 1.1, 50)
    long = 8 * 3600.0 * rng.uniform(0.9, 1.1, 50)
    values = np.ravel(np.column_stack([short, long])).tolist()
    hit, width = diurnal_gap(series(values))
    assert hit
    assert width == pytest.approx(brute_gap(values))
    assert width == pytest.approx(math.log10(long.min() / short.max()))
