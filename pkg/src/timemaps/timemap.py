"""Time-map construction, log binning and kernel smoothing.

Axis convention: x is the time since the previous event, y the time until
the next one.  Logarithms are base 10 throughout.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import EmptyRange, InvalidKernel
from .events import InterarrivalSeries

DEFAULT_BINS = 50
DEFAULT_SMOOTHING_SD = 1.0
RANGE_PAD = 0.05
# half-width used when every point sits on one value along an axis
DEGENERATE_HALF_WIDTH = 0.5
KERNEL_TRUNCATION_SD = 4.0

Range = tuple[float, float]


class TimeMapPoint(NamedTuple):
    t_before: float
    t_after: float
    event_index: int


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeMap:
    """Points of a time map held column-wise.

    ``event_index`` is the 1-based ordinal of the middle event in the
    original stream.
    """

    t_before: np.ndarray
    t_after: np.ndarray
    event_index: np.ndarray
    dropped_nonpositive: int = 0
    unit: str = "seconds"

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_before", _frozen(self.t_before, np.float64))
        object.__setattr__(self, "t_after", _frozen(self.t_after, np.float64))
        object.__setattr__(self, "event_index", _frozen(self.event_index, np.int64))
        if not (len(self.t_before) == len(self.t_after) == len(self.event_index)):
            raise ValueError("coordinate arrays differ in length")

    def __len__(self) -> int:
        return len(self.t_before)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeMap):
            return NotImplemented
        return (
            np.array_equal(self.t_before, other.t_before)
            and np.array_equal(self.t_after, other.t_after)
            and np.array_equal(self.event_index, other.event_index)
            and self.dropped_nonpositive == other.dropped_nonpositive
            and self.unit == other.unit
        )

    __hash__ = None

    def __iter__(self) -> Iterator[TimeMapPoint]:
        for b, a, k in zip(self.t_before.tolist(), self.t_after.tolist(), self.event_index.tolist()):
            yield TimeMapPoint(b, a, k)

    @property
    def points(self) -> list[TimeMapPoint]:
        return list(self)

    @classmethod
    def from_points(cls, points: Sequence[tuple[float, float, int]], **kwargs) -> "TimeMap":
        pts = list(points)
        return cls(
            [p[0] for p in pts], [p[1] for p in pts], [p[2] for p in pts], **kwargs
        )


def build_map(series: InterarrivalSeries) -> TimeMap:
    """Pair each delta with its successor; m deltas give m-1 points."""
    d = series.deltas
    m = len(d)
    if m < 2:
        return TimeMap([], [], [], 0, series.unit)
    return TimeMap(d[:-1], d[1:], np.arange(2, m + 1), 0, series.unit)


def plottable_points(tmap: TimeMap) -> TimeMap:
    keep = (tmap.t_before > 0) & (tmap.t_after > 0)
    removed = int(len(tmap) - keep.sum())
    if removed == 0:
        return tmap
    return TimeMap(
        tmap.t_before[keep],
        tmap.t_after[keep],
        tmap.event_index[keep],
        tmap.dropped_nonpositive + removed,
        tmap.unit,
    )


# -- grids ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LogGrid:
    """2D mass histogram over log10 coordinates.

    ``cells[i, j]`` holds the mass of x-bin ``i`` and y-bin ``j``.
    ``excluded`` counts plottable points that fell outside explicit ranges.
    """

    bins_x: int
    bins_y: int
    x_range: Range
    y_range: Range
    cells: np.ndarray
    total_mass: float
    excluded: int = 0

    def __post_init__(self) -> None:
        cells = _frozen(self.cells, np.float64)
        if cells.shape != (self.bins_x, self.bins_y):
            raise ValueError(f"cells shape {cells.shape} != ({self.bins_x}, {self.bins_y})")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "x_range", (float(self.x_range[0]), float(self.x_range[1])))
        object.__setattr__(self, "y_range", (float(self.y_range[0]), float(self.y_range[1])))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogGrid):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None

    def x_edges(self) -> np.ndarray:
        return np.linspace(*self.x_range, self.bins_x + 1)

    def y_edges(self) -> np.ndarray:
        return np.linspace(*self.y_range, self.bins_y + 1)

    def to_dict(self) -> dict:
        return {
            "bins_x": self.bins_x,
            "bins_y": self.bins_y,
            "x_range": list(self.x_range),
            "y_range": list(self.y_range),
            "cells": [float(v) for v in self.cells.ravel()],
            "total_mass": float(self.total_mass),
            "excluded": int(self.excluded),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=None) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "LogGrid":
        bx, by = int(data["bins_x"]), int(data["bins_y"])
        cells = np.asarray(data["cells"], dtype=np.float64).reshape(bx, by)
        return cls(
            bx, by, tuple(data["x_range"]), tuple(data["y_range"]), cells,
            float(data["total_mass"]), int(data.get("excluded", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "LogGrid":
        return cls.from_dict(json.loads(text))


def default_range(values: np.ndarray) -> Range:
    """Data min/max padded by 5% of the span on each side."""
    if len(values) == 0:
        return (0.0, 1.0)
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo
    if span <= 0:
        return (lo - DEGENERATE_HALF_WIDTH, hi + DEGENERATE_HALF_WIDTH)
    return (lo - RANGE_PAD * span, hi + RANGE_PAD * span)


def _bin_index(values: np.ndarray, rng: Range, bins: int) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = rng
    inside = (values >= lo) & (values <= hi)
    idx = np.floor((values - lo) / (hi - lo) * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1), inside


def _check_range(rng: Range, axis: str) -> Range:
    lo, hi = float(rng[0]), float(rng[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi - lo <= 0:
        raise EmptyRange(f"{axis} range [{lo}, {hi}] has no width")
    return lo, hi


def bin(
    tmap: TimeMap,
    bins_x: int = DEFAULT_BINS,
    bins_y: int = DEFAULT_BINS,
    ranges: tuple[Range | None, Range | None] | None = None,
) -> LogGrid:
    """Count points per cell of a log10 grid.

    Non-positive points are filtered first (they have no log).  Ranges
    default to the padded data extent; the last cell on each axis is closed
    on its upper edge.
    """
    if bins_x < 1 or bins_y < 1:
        raise ValueError("bins must be >= 1")
    pts = plottable_points(tmap)
    lx, ly = np.log10(pts.t_before), np.log10(pts.t_after)
    x_rng, y_rng = ranges if ranges is not None else (None, None)
    x_rng = _check_range(x_rng, "x") if x_rng is not None else default_range(lx)
    y_rng = _check_range(y_rng, "y") if y_rng is not None else default_range(ly)
    ix, in_x = _bin_index(lx, x_rng, bins_x)
    iy, in_y = _bin_index(ly, y_rng, bins_y)
    inside = in_x & in_y
    cells = np.zeros((bins_x, bins_y))
    np.add.at(cells, (ix[inside], iy[inside]), 1.0)
    return LogGrid(
        bins_x, bins_y, x_rng, y_rng, cells, float(inside.sum()), int(len(pts) - inside.sum())
    )


def _kernel_matrix(n: int, sd: float) -> np.ndarray:
    """Column ``c`` is the truncated Gaussian centred on bin ``c``, renormalised
    over the bins that exist, so every column sums to one."""
    radius = math.floor(KERNEL_TRUNCATION_SD * sd)
    offsets = np.arange(n)[:, None] - np.arange(n)[None, :]
    weights = np.exp(-0.5 * (offsets / sd) ** 2)
    weights[np.abs(offsets) > radius] = 0.0
    return weights / weights.sum(axis=0, keepdims=True)


def smooth(grid: LogGrid, kernel_sd_bins: float = DEFAULT_SMOOTHING_SD) -> LogGrid:
    """Gaussian blur in bin units that conserves total mass.

    The kernel is truncated at 4 sd per axis and renormalised at the grid
    boundary for each source cell, so no mass leaks off the edges.
    """
    if not kernel_sd_bins > 0:
        raise InvalidKernel(f"kernel sd must be > 0, got {kernel_sd_bins}")
    kx = _kernel_matrix(grid.bins_x, kernel_sd_bins)
    ky = _kernel_matrix(grid.bins_y, kernel_sd_bins)
    cells = kx @ grid.cells @ ky.T
    return LogGrid(
        grid.bins_x, grid.bins_y, grid.x_range, grid.y_range, cells,
        float(cells.sum()), grid.excluded,
    )


# -- points file --------------------------------------------------------------------------


def points_to_csv(tmap: TimeMap) -> str:
    buf = io.StringIO()
    buf.write(f"# unit={tmap.unit}\n")
    buf.write(f"# dropped_nonpositive={tmap.dropped_nonpositive}\n")
    buf.write("event_index,t_before,t_after\n")
    for b, a, k in zip(tmap.t_before.tolist(), tmap.t_after.tolist(), tmap.event_index.tolist()):
        buf.write(f"{k},{b!r},{a!r}\n")
    return buf.getvalue()


def points_from_csv(text: str) -> TimeMap:
    unit, dropped = "seconds", 0
    rows: list[tuple[float, float, int]] = []
    header_seen = False
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key.strip() == "unit":
                unit = value.strip()
            elif key.strip() == "dropped_nonpositive":
                dropped = int(value)
            continue
        if not header_seen:
            if line.split(",") != ["event_index", "t_before", "t_after"]:
                raise ValueError(f"unexpected points header {line!r}")
            header_seen = True
            continue
        k, b, a = line.split(",")
        rows.append((float(b), float(a), int(k)))
    return TimeMap.from_points(rows, dropped_nonpositive=dropped, unit=unit)
