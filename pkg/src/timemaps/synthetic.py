"""Constructed event streams with known temporal signatures."""

from __future__ import annotations

import numpy as np

from .events import EventStream
from .rng import Stream

HOUR = 3600
DAY = 24 * HOUR


def scheduler_stream(
    seed: int,
    hours: int = 1000,
    jitter: float = 0.01,
    burst_probability: float = 0.25,
    burst_size: int = 10,
    burst_spacing: int = 30,
    start: int = 1_449_360_000,
) -> EventStream:
    """Hourly scheduled posts plus bursts of rapid posts, with no sleep gap.

    Consecutive scheduled posts are ``1 h * (1 +/- jitter)`` apart.  In each
    hour, with probability ``burst_probability``, a cluster of
    ``burst_size`` events at ``burst_spacing`` seconds starts at a uniformly
    drawn offset after the scheduled post.
    """
    rng = Stream(seed)
    gaps = np.rint(HOUR * (1.0 + jitter * (2.0 * rng.uniform(hours) - 1.0))).astype(np.int64)
    burst_on = rng.uniform(hours) < burst_probability
    offsets = rng.uniform(hours)
    times: list[int] = []
    t = start
    burst_len = (burst_size - 1) * burst_spacing
    for gap, on, u in zip(gaps.tolist(), burst_on.tolist(), offsets.tolist()):
        times.append(t)
        room = gap - burst_len - 1
        if on and room > 1:
            b0 = t + 1 + int(u * room)
            times.extend(b0 + k * burst_spacing for k in range(burst_size))
        t += gap
    times.append(t)
    return EventStream("synthetic-scheduler", tuple(times), meta={"format": "csv"})


def diurnal_stream(
    seed: int,
    days: int = 10,
    mean_gap: float = 600.0,
    active_hours: float = 16.0,
    night_hours: float = 8.0,
    start: int = 1_449_360_000,
    with_nights: bool = True,
) -> EventStream:
    """Exponential (Poisson) daytime activity; optional nightly silence.

    The same daytime draws are used whether or not nights are injected, so
    the two variants differ only by the added nightly lulls.
    """
    rng = Stream(seed)
    per_day = int(np.ceil(active_hours * HOUR / mean_gap * 1.5)) + 10
    draws = -mean_gap * np.log(rng.uniform_open(per_day * days))
    times = [start]
    clock = float(start)
    used = 0
    for day in range(days):
        active = 0.0
        while True:
            if used == len(draws):
                draws = np.concatenate([draws, -mean_gap * np.log(rng.uniform_open(per_day))])
            d = draws[used]
            used += 1
            if active + d > active_hours * HOUR:
                break
            active += d
            clock += d
            times.append(int(clock))
        if day < days - 1:
            clock += d + (night_hours * HOUR if with_nights else 0.0)
            times.append(int(clock))
    return EventStream("synthetic-diurnal", tuple(times), meta={"format": "csv"})


def constant_stream(n: int, spacing: int = 5, start: int = 1_449_360_000) -> EventStream:
    return EventStream("synthetic-constant", tuple(start + spacing * k for k in range(n)))
