"""Behavioural regions of a time map.

The map is split into a 4x4 grid by three cuts per axis (log10 seconds).
``labels[row][col]`` names the region for y band ``row`` (bottom to top) and
x band ``col`` (left to right).  Bands are half-open ``[low, high)``, the top
band running to infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonpositivePoint
from .events import SECONDS_PER_UNIT
from .timemap import TimeMap, TimeMapPoint, plottable_points

UNANNOTATED = "unannotated"

RAPID_BURSTS = "Extremely rapid bursts"
LULL_THEN_BURST = "Lulls followed by bursts"
BURST_THEN_LULL = "Bursts followed by lulls"
MAJOR_EVENTS = "Major events"
MUNDANE_EVENTS = "Mundane events"
FIRST_OF_DAY = "First tweets of the day"
LAST_OF_DAY = "Last tweets of the day"

_DEFAULT_LABELS = (
    (RAPID_BURSTS, LULL_THEN_BURST, LULL_THEN_BURST, UNANNOTATED),
    (BURST_THEN_LULL, MAJOR_EVENTS, UNANNOTATED, FIRST_OF_DAY),
    (BURST_THEN_LULL, UNANNOTATED, MUNDANE_EVENTS, FIRST_OF_DAY),
    (UNANNOTATED, LAST_OF_DAY, LAST_OF_DAY, UNANNOTATED),
)

# 1 minute, 1 hour, 10 hours
DEFAULT_CUTS_SECONDS = (60.0, 3600.0, 36000.0)


@dataclass(frozen=True)
class RegionTaxonomy:
    x_cuts: tuple[float, float, float]
    y_cuts: tuple[float, float, float]
    labels: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        for cuts in (self.x_cuts, self.y_cuts):
            if len(cuts) != 3 or any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise ValueError(f"cuts must be 3 strictly ascending values, got {cuts}")
        labels = tuple(tuple(str(c) or UNANNOTATED for c in row) for row in self.labels)
        if len(labels) != 4 or any(len(r) != 4 for r in labels):
            raise ValueError("labels must be a 4x4 matrix")
        object.__setattr__(self, "x_cuts", tuple(float(c) for c in self.x_cuts))
        object.__setattr__(self, "y_cuts", tuple(float(c) for c in self.y_cuts))
        object.__setattr__(self, "labels", labels)

    def cells(self) -> list[tuple[int, int, str]]:
        """Regions in occupancy order: row-major, bottom row first."""
        return [(r, c, self.labels[r][c]) for r in range(4) for c in range(4)]


def default_taxonomy() -> RegionTaxonomy:
    cuts = tuple(math.log10(s) for s in DEFAULT_CUTS_SECONDS)
    return RegionTaxonomy(cuts, cuts, _DEFAULT_LABELS)


def band(log_value, cuts) -> np.ndarray:
    """Number of cuts at or below ``log_value``."""
    return np.searchsorted(np.asarray(cuts), log_value, side="right")


def classify_point(
    p: TimeMapPoint | tuple[float, float], tax: RegionTaxonomy, unit: str = "seconds"
) -> str:
    t_before, t_after = p[0], p[1]
    if not (t_before > 0 and t_after > 0):
        raise NonpositivePoint(f"point ({t_before}, {t_after}) is not strictly positive")
    scale = SECONDS_PER_UNIT[unit]
    col = int(band(np.log10(t_before * scale), tax.x_cuts))
    row = int(band(np.log10(t_after * scale), tax.y_cuts))
    return tax.labels[row][col]


def occupancy(tmap: TimeMap, tax: RegionTaxonomy) -> np.ndarray:
    """Fraction of plottable points in each of the 16 regions (row-major)."""
    pts = plottable_points(tmap)
    out = np.zeros(16)
    if len(pts) == 0:
        return out
    scale = SECONDS_PER_UNIT[tmap.unit]
    cols = band(np.log10(pts.t_before * scale), tax.x_cuts)
    rows = band(np.log10(pts.t_after * scale), tax.y_cuts)
    counts = np.bincount(rows * 4 + cols, minlength=16).astype(np.float64)
    return counts / counts.sum()


def occupancy_report(vector: np.ndarray, tax: RegionTaxonomy) -> list[dict]:
    return [
        {"row": r, "col": c, "label": label, "fraction": float(vector[r * 4 + c])}
        for r, c, label in tax.cells()
    ]
