"""Event ingestion, interarrival computation and resampling.

Timestamps are held as integer epoch seconds (UTC).  Inputs may carry
ISO-8601 strings, Twitter's legacy ``created_at`` format, or raw epoch
integers in the same column; an integer parse is always tried first.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Literal, Mapping

import numpy as np

from .errors import InvalidN, MalformedTimestamp, MissingField, ParseError, SampleTooLarge
from .rng import Stream

log = logging.getLogger(__name__)

TIME_FIELD = "created_at"
SOURCE_FIELD = "source_id"

Unit = Literal["seconds", "hours", "unitless"]
UNITS: tuple[str, ...] = ("seconds", "hours", "unitless")
SECONDS_PER_UNIT = {"seconds": 1.0, "hours": 3600.0, "unitless": 1.0}

_TWITTER_FORMAT = "%a %b %d %H:%M:%S %z %Y"


@dataclass(frozen=True)
class EventStream:
    source_id: str
    timestamps: tuple[int, ...]
    meta: Mapping[str, str] = field(default_factory=dict)
    subsecond_truncated: int = 0

    def __post_init__(self) -> None:
        ts = tuple(int(t) for t in self.timestamps)
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise ValueError("timestamps must be sorted ascending")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "meta", dict(self.meta))

    def __len__(self) -> int:
        return len(self.timestamps)

    @classmethod
    def from_unsorted(cls, source_id: str, timestamps: Iterable[int], **kwargs) -> "EventStream":
        return cls(source_id, tuple(sorted(int(t) for t in timestamps)), **kwargs)


@dataclass(frozen=True)
class InterarrivalSeries:
    deltas: np.ndarray
    unit: str = "seconds"

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise ValueError(f"unknown unit {self.unit!r}")
        arr = np.array(self.deltas, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "deltas", arr)

    def __len__(self) -> int:
        return len(self.deltas)

    def in_seconds(self) -> np.ndarray:
        return self.deltas * SECONDS_PER_UNIT[self.unit]


# -- parsing -----------------------------------------------------------------


def parse_timestamp(value: object) -> tuple[int, bool]:
    """Return ``(epoch_seconds, had_subsecond_part)``.

    Raises ``ValueError`` when ``value`` is not a recognised timestamp.
    """
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, int):
        return value, False
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite timestamp")
        whole = math.floor(value)
        return int(whole), whole != value
    if not isinstance(value, str):
        raise ValueError(f"unsupported timestamp type {type(value).__name__}")
    text = value.strip()
    try:
        return int(text), False
    except ValueError:
        pass
    try:
        dt = datetime.fromisoformat(text[:-1] + "+00:00" if text.endswith(("Z", "z")) else text)
    except ValueError:
        try:
            dt = datetime.strptime(text, _TWITTER_FORMAT)
        except ValueError:
            raise ValueError(f"unparseable timestamp {text!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    sub = dt.microsecond != 0
    return int(dt.replace(microsecond=0).timestamp()), sub


def _looks_like_epoch(value: object) -> bool:
    if isinstance(value, int) and not isinstance(value, bool):
        return True
    if isinstance(value, str):
        try:
            int(value.strip())
            return True
        except ValueError:
            return False
    return False


def _build(rows: list[tuple[int, object]], source_id: str | None, fmt: str) -> EventStream:
    times: list[int] = []
    truncated = 0
    first_raw = None
    for row, value in rows:
        try:
            t, sub = parse_timestamp(value)
        except ValueError as exc:
            raise MalformedTimestamp(row, str(exc)) from None
        truncated += sub
        times.append(t)
        if first_raw is None:
            first_raw = value
    if truncated:
        log.warning("discarded sub-second precision on %d timestamps", truncated)
    meta = {"format": fmt}
    if first_raw is not None:
        meta["timestamp_style"] = "epoch" if _looks_like_epoch(first_raw) else "iso"
    return EventStream.from_unsorted(source_id or "", times, meta=meta, subsecond_truncated=truncated)


def parse_events(raw: bytes | str, format: str = "csv") -> EventStream:
    """Parse a CSV or JSONL document into an :class:`EventStream`.

    Rows are numbered from 1 (the first data row for CSV, the first line for
    JSONL).  Empty input gives an empty stream.
    """
    text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw
    if text.startswith("\ufeff"):
        text = text[1:]
    if format == "csv":
        return _parse_csv(text)
    if format == "jsonl":
        return _parse_jsonl(text)
    raise ValueError(f"unknown format {format!r}")


def _parse_csv(text: str) -> EventStream:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        return EventStream("", (), meta={"format": "csv"})
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if TIME_FIELD not in (reader.fieldnames or []):
        raise MissingField(0, f"CSV header lacks required column {TIME_FIELD!r}")
    rows: list[tuple[int, object]] = []
    source_id = None
    for i, rec in enumerate(reader, start=1):
        value = rec.get(TIME_FIELD)
        if value is None or value.strip() == "":
            raise MissingField(i, f"empty {TIME_FIELD!r}")
        rows.append((i, value))
        if source_id is None and rec.get(SOURCE_FIELD):
            source_id = rec[SOURCE_FIELD]
    return _build(rows, source_id, "csv")


def _parse_jsonl(text: str) -> EventStream:
    rows: list[tuple[int, object]] = []
    source_id = None
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(i, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict) or TIME_FIELD not in obj:
            raise MissingField(i, f"missing key {TIME_FIELD!r}")
        rows.append((i, obj[TIME_FIELD]))
        if source_id is None and obj.get(SOURCE_FIELD):
            source_id = str(obj[SOURCE_FIELD])
    return _build(rows, source_id, "jsonl")


def format_timestamp(t: int, style: str = "iso") -> str:
    if style == "epoch":
        return str(t)
    return datetime.fromtimestamp(t, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def serialize_events(stream: EventStream, format: str | None = None) -> str:
    """Write a stream back out in the schema it was read from."""
    format = format or stream.meta.get("format", "csv")
    style = stream.meta.get("timestamp_style", "iso")
    with_source = bool(stream.source_id)
    if format == "jsonl":
        out = []
        for t in stream.timestamps:
            rec: dict[str, object] = {TIME_FIELD: int(t) if style == "epoch" else format_timestamp(t)}
            if with_source:
                rec[SOURCE_FIELD] = stream.source_id
            out.append(json.dumps(rec))
        return "".join(line + "\n" for line in out)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([TIME_FIELD, SOURCE_FIELD] if with_source else [TIME_FIELD])
    for t in stream.timestamps:
        cell = format_timestamp(t, style)
        writer.writerow([cell, stream.source_id] if with_source else [cell])
    return buf.getvalue()


# -- derived series ------------------------------------------------------------


def interarrivals(stream: EventStream) -> InterarrivalSeries:
    ts = np.asarray(stream.timestamps, dtype=np.int64)
    return InterarrivalSeries(np.diff(ts).astype(np.float64), "seconds")


def resample_events(
    stream: EventStream, n: int, mode: str = "uniform_events", seed: int = 0
) -> EventStream:
    """Subsample ``n`` events from ``stream`` deterministically.

    ``uniform_events`` draws ``n`` events without replacement (partial
    Fisher-Yates) and re-sorts them; ``contiguous_window`` keeps a uniformly
    chosen run of ``n`` consecutive events.
    """
    size = len(stream)
    if n < 1:
        raise InvalidN(f"n must be >= 1, got {n}")
    if n > size:
        raise SampleTooLarge(f"cannot draw {n} events from a stream of {size}")
    rng = Stream(seed)
    if mode == "uniform_events":
        pool = list(range(size))
        for i in range(n):
            j = i + rng.randbelow(size - i)
            pool[i], pool[j] = pool[j], pool[i]
        keep = sorted(pool[:n])
    elif mode == "contiguous_window":
        start = rng.randbelow(size - n + 1)
        keep = range(start, start + n)
    else:
        raise ValueError(f"unknown resample mode {mode!r}")
    return EventStream(
        stream.source_id,
        tuple(stream.timestamps[i] for i in keep),
        meta=stream.meta,
        subsecond_truncated=stream.subsecond_truncated,
    )
