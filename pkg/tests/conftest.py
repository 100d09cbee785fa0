import numpy as np
import pytest

from timemaps.events import EventStream, InterarrivalSeries
from timemaps.timemap import TimeMap


@pytest.fixture
def tiny_map():
    return TimeMap.from_points([(10.0, 20.0, 2), (20.0, 70.0, 3)])


def series(values, unit="seconds"):
    return InterarrivalSeries(np.asarray(values, dtype=float), unit)


def stream(times, source="s"):
    return EventStream.from_unsorted(source, times)
