import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from timemaps import regions
from timemaps.errors import NonpositivePoint
from timemaps.events import interarrivals
from timemaps.regions import (
    RegionTaxonomy,
    band,
    classify_point,
    default_taxonomy,
    occupancy,
    occupancy_report,
)
from timemaps.synthetic import scheduler_stream
from timemaps.timemap import TimeMap, build_map

TAX = default_taxonomy()
positive = st.floats(1e-3, 1e7, allow_nan=False)


def test_named_regions():
    assert classify_point((1.0, 1.0), TAX) == regions.RAPID_BURSTS
    assert classify_point((7200.0, 10.0), TAX) == regions.LULL_THEN_BURST
    assert classify_point((10.0, 7200.0), TAX) == regions.BURST_THEN_LULL
    assert classify_point((600.0, 600.0), TAX) == regions.MAJOR_EVENTS
    assert classify_point((7200.0, 7200.0), TAX) == regions.MUNDANE_EVENTS
    assert classify_point((60000.0, 600.0), TAX) == regions.FIRST_OF_DAY
    assert classify_point((600.0, 60000.0), TAX) == regions.LAST_OF_DAY
    assert classify_point((1.0, 60000.0), TAX) == regions.UNANNOTATED


def test_bands_are_half_open():
    cuts = TAX.x_cuts
    assert band(math.log10(59.999), cuts) == 0
    assert band(math.log10(60.0), cuts) == 1
    assert band(math.log10(3600.0), cuts) == 2
    assert band(math.log10(36000.0), cuts) == 3
    assert band(99.0, cuts) == 3


def test_unit_scaling():
    assert classify_point((2.0, 2.0), TAX, unit="hours") == regions.MUNDANE_EVENTS


def test_nonpositive_point_rejected():
    with pytest.raises(NonpositivePoint):
        classify_point((0.0, 5.0), TAX)


def test_labels_mirror_across_diagonal_for_directional_pairs():
    lab = TAX.labels
    for r in range(4):
        for c in range(4):
            a, b = lab[r][c], lab[c][r]
            pair = {a, b}
            if pair == {regions.LULL_THEN_BURST, regions.BURST_THEN_LULL}:
                continue
            if pair == {regions.FIRST_OF_DAY, regions.LAST_OF_DAY}:
                continue
            assert a == b or regions.UNANNOTATED in pair


@given(st.lists(st.tuples(positive, positive), min_size=1, max_size=200))
def test_occupancy_sums_to_one_and_matches_tallies(pts):
    tmap = TimeMap.from_points([(b, a, k + 2) for k, (b, a) in enumerate(pts)])
    vec = occupancy(tmap, TAX)
    assert math.isclose(vec.sum(), 1.0, abs_tol=1e-9)
    tallies = np.zeros(16)
    for b, a in pts:
        label = classify_point((b, a), TAX)
        row = int(band(math.log10(a), TAX.y_cuts))
        col = int(band(math.log10(b), TAX.x_cuts))
        assert TAX.labels[row][col] == label
        tallies[row * 4 + col] += 1
    assert np.array_equal(vec, tallies / len(pts))


@given(positive, positive, st.floats(1.0, 10.0))
def test_scaling_a_coordinate_up_never_lowers_its_band(t, other, factor):
    base = band(math.log10(t), TAX.x_cuts)
    up = band(math.log10(t * factor), TAX.x_cuts)
    # with cuts at least one decade apart, one decade moves at most one band
    assert base <= up <= base + 1


def test_empty_map_occupancy_is_zero():
    assert occupancy(TimeMap.from_points([]), TAX).sum() == 0


def test_report_layout():
    vec = occupancy(TimeMap.from_points([(1.0, 1.0, 2)]), TAX)
    report = occupancy_report(vec, TAX)
    assert len(report) == 16
    assert report[0] == {"row": 0, "col": 0, "label": regions.RAPID_BURSTS, "fraction": 1.0}


def test_taxonomy_validation():
    with pytest.raises(ValueError):
        RegionTaxonomy((1.0, 1.0, 2.0), TAX.y_cuts, TAX.labels)
    with pytest.raises(ValueError):
        RegionTaxonomy(TAX.x_cuts, TAX.y_cuts, TAX.labels[:3])


def test_hourly_stream_sits_on_the_one_hour_corner():
    stream = scheduler_stream(4, hours=500, burst_probability=0.0)
    tmap = build_map(interarrivals(stream))
    # 1 h is a cut, so +/-1% jitter straddles bands 1 and 2 on both axes
    block = 0
    for p in tmap:
        col = int(band(math.log10(p.t_before), TAX.x_cuts))
        row = int(band(math.log10(p.t_after), TAX.y_cuts))
        block += col in (1, 2) and row in (1, 2)
    vec = occupancy(tmap, TAX)
    assert block == len(tmap)
    assert vec[[5, 6, 9, 10]].sum() >= 0.99
