"""Command-line entry point.

Exit codes: 0 success, 1 usage or argument error, 2 data or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from . import __version__
from .config import RESAMPLE_MODES, ConfigError, RunConfig, load_config
from .dgp import default_specs, format_dgp, parse_dgp, sample
from .errors import InvalidSpec, LayoutOverflow, SampleTooLarge, TimemapError
from .events import (
    UNITS,
    EventStream,
    InterarrivalSeries,
    interarrivals,
    parse_events,
    resample_events,
    serialize_events,
)
from .features import profile_map
from .regions import occupancy_report
from .render import heatmap_spec, heatmap_svg, panel, scatter_spec, scatter_svg
from .rng import derive_seed
from .rules import classify
from .timemap import LogGrid, bin, build_map, plottable_points, points_from_csv, points_to_csv, smooth

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- input handling -----------------------------------------------------------------


def write_deltas(series: InterarrivalSeries) -> str:
    lines = [f"# unit={series.unit}", "delta"]
    lines.extend(repr(float(v)) for v in series.deltas)
    return "\n".join(lines) + "\n"


def read_deltas(text: str) -> InterarrivalSeries:
    unit, values, header = "unitless", [], False
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key.strip() == "unit":
                unit = value.strip()
                if unit not in UNITS:
                    raise DataError(f"unknown unit {unit!r}")
            continue
        if not header:
            if line != "delta":
                raise DataError(f"expected header 'delta', got {line!r}")
            header = True
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise DataError(f"row {len(values) + 1}: not a number: {line!r}") from None
    return InterarrivalSeries(values, unit)


def detect_kind(text: str) -> str:
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("{"):
            return "jsonl"
        cols = [c.strip() for c in s.split(",")]
        if "created_at" in cols:
            return "events"
        if cols == ["delta"]:
            return "deltas"
        raise DataError(f"cannot detect input kind from header {s!r}; use --kind")
    return "events"


@dataclass
class Loaded:
    series: InterarrivalSeries
    n_events: int
    source_id: str
    kind: str
    stream: EventStream | None = None


def read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def load_input(path: str, kind: str = "auto") -> Loaded:
    text = read_text(path)
    if kind == "auto":
        kind = detect_kind(text)
    try:
        if kind == "deltas":
            series = read_deltas(text)
            return Loaded(series, len(series) + 1 if len(series) else 0, Path(path).stem, kind)
        stream = parse_events(text, "jsonl" if kind == "jsonl" else "csv")
    except TimemapError as exc:
        raise DataError(str(exc)) from None
    return Loaded(interarrivals(stream), len(stream), stream.source_id or Path(path).stem, kind, stream)


def write_text(path: str, text: str) -> None:
    try:
        if path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def _pair(text: str | None, cast=float):
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated values, got {text!r}")
    try:
        return cast(parts[0]), cast(parts[1])
    except ValueError:
        raise UsageError(f"not numeric: {text!r}") from None


def _config(args) -> RunConfig:
    overrides = {
        "seed": None if getattr(args, "seed", None) is None else str(args.seed),
        "bins_x": None if getattr(args, "bins", None) is None else str(args.bins[0]),
        "bins_y": None if getattr(args, "bins", None) is None else str(args.bins[1]),
        "smoothing_sd": None if getattr(args, "smoothing_sd", None) is None else str(args.smoothing_sd),
    }
    try:
        return load_config(getattr(args, "config", None), overrides)
    except OSError as exc:
        raise DataError(f"cannot read config: {exc}") from None
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _emit(obj: dict, stream=None) -> None:
    print(json.dumps(obj, sort_keys=False), file=stream or sys.stdout)


# -- commands -------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    try:
        spec = parse_dgp(args.dgp)
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    cfg = _config(args)
    series = sample(spec, args.n, cfg.seed)
    write_text(args.out, write_deltas(series))
    _emit({"command": "simulate", "dgp": format_dgp(spec), "n": args.n, "seed": cfg.seed,
           "unit": series.unit, "out": args.out},
          sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


def cmd_map(args) -> int:
    loaded = load_input(args.input, args.kind)
    raw = build_map(loaded.series)
    pts = plottable_points(raw)
    cfg = _config(args)
    ranges = (_pair(args.x_range), _pair(args.y_range))
    try:
        grid = bin(pts, cfg.bins_x, cfg.bins_y, ranges)
    except TimemapError as exc:
        raise UsageError(str(exc)) from None
    if args.points:
        write_text(args.points, points_to_csv(pts))
    if args.grid:
        write_text(args.grid, grid.to_json())
    _emit({"command": "map", "input": args.input, "kind": loaded.kind, "unit": loaded.series.unit,
           "n_events": loaded.n_events, "points": len(raw), "plottable": len(pts),
           "dropped_nonpositive": pts.dropped_nonpositive, "excluded": grid.excluded,
           "bins": [cfg.bins_x, cfg.bins_y], "x_range": list(grid.x_range),
           "y_range": list(grid.y_range)},
          sys.stderr if "-" in (args.points, args.grid) else sys.stdout)
    return EXIT_OK


def analyze_one(path: str, cfg: RunConfig, kind: str = "auto") -> dict:
    loaded = load_input(path, kind)
    if loaded.series.unit == "unitless":
        print(f"warning: {path}: unitless deltas treated as seconds", file=sys.stderr)
    profile, _, _ = profile_map(
        loaded.series, loaded.n_events, bins=(cfg.bins_x, cfg.bins_y),
        taxonomy=cfg.taxonomy, thresholds=cfg.thresholds,
    )
    verdict = classify(profile, cfg.rules)
    features = profile.to_dict()
    occ = features.pop("occupancy")
    params = cfg.echo()
    params.update(input=path, kind=loaded.kind, unit=loaded.series.unit)
    return {
        "source_id": loaded.source_id,
        "n_events": loaded.n_events,
        "features": features,
        "occupancy": occupancy_report(occ, cfg.taxonomy),
        **verdict.to_dict(),
        "parameters": params,
    }


def cmd_analyze(args) -> int:
    cfg = _config(args)
    if not args.batch:
        if len(args.inputs) != 1:
            raise UsageError("analyze takes one input unless --batch is given")
        report = analyze_one(args.inputs[0], cfg, args.kind)
        write_text(args.out, json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    out_dir = Path(args.out_dir or ".")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create {out_dir}: {exc}") from None

    def job(item):
        idx, path = item
        sub = replace(cfg, seed=derive_seed(cfg.seed, idx, Path(path).name))
        report = analyze_one(path, sub, args.kind)
        target = out_dir / f"{Path(path).stem}.report.json"
        write_text(str(target), json.dumps(report, indent=2) + "\n")
        return path, report["verdict"], str(target)

    with ThreadPoolExecutor(max_workers=min(8, len(args.inputs)) or 1) as pool:
        results = list(pool.map(job, enumerate(args.inputs)))
    for path, verdict, target in results:
        _emit({"input": path, "verdict": verdict, "report": target})
    return EXIT_OK


def _load_document(path: str, mode: str, title: str | None, cfg: RunConfig, fixed) -> str:
    text = read_text(path)
    if mode == "auto":
        mode = "heatmap" if text.lstrip().startswith("{") else "scatter"
    try:
        if mode == "scatter":
            tmap = points_from_csv(text)
            spec = None
            if title is not None or fixed is not None:
                n_deltas = len(tmap) + tmap.dropped_nonpositive
                default = f"n = {n_deltas + 1 if n_deltas else 0}"
                spec = scatter_spec(default if title is None else title, fixed_range=fixed)
            return scatter_svg(tmap, spec)
        grid = LogGrid.from_json(text)
        if cfg.smoothing_sd > 0:
            grid = smooth(grid, cfg.smoothing_sd)
        return heatmap_svg(grid, heatmap_spec(title or ""))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None


def cmd_render(args) -> int:
    cfg = _config(args)
    titles = args.titles.split(";") if args.titles is not None else [None] * len(args.inputs)
    if len(titles) != len(args.inputs):
        raise UsageError("--titles needs one entry per input (separated by ';')")
    fixed = _pair(args.fixed_range)
    layout = _pair(args.layout, int) if args.layout else (1, len(args.inputs))
    if len(args.inputs) > layout[0] * layout[1]:
        raise UsageError(f"{len(args.inputs)} inputs do not fit a {layout[0]}x{layout[1]} layout")
    docs = [_load_document(p, args.mode, t, cfg, fixed) for p, t in zip(args.inputs, titles)]
    if len(docs) == 1 and not args.layout and not args.banner:
        svg = docs[0]
    else:
        try:
            svg = panel(docs, layout, args.banner or "")
        except LayoutOverflow as exc:
            raise UsageError(str(exc)) from None
    write_text(args.out, svg)
    return EXIT_OK


def cmd_resample(args) -> int:
    cfg = _config(args)
    loaded = load_input(args.input, args.kind)
    if loaded.stream is None:
        raise UsageError("resample needs an events file, not deltas")
    mode = args.mode or cfg.resample_mode
    try:
        out = resample_events(loaded.stream, args.n, mode, cfg.seed)
    except SampleTooLarge as exc:
        raise UsageError(str(exc)) from None
    except TimemapError as exc:
        raise UsageError(str(exc)) from None
    write_text(args.out, serialize_events(out))
    _emit({"command": "resample", "input": args.input, "n": args.n, "mode": mode,
           "seed": cfg.seed, "events_in": len(loaded.stream), "events_out": len(out)},
          sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="timemap", description="Build, render and analyse interarrival time maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=True, grid=False):
        sp.add_argument("--config", help="key = value config file")
        if seed:
            sp.add_argument("--seed", type=lambda s: int(s, 0),
                            help="64-bit seed (default: config, then $TIMEMAP_SEED, then 0)")
        if grid:
            sp.add_argument("--bins", type=lambda s: _bins(s), help="N or NX,NY (default 50)")

    sp = sub.add_parser("simulate", help="draw interarrivals from a reference process")
    sp.add_argument("--dgp", required=True,
                    help=f"one of {', '.join(default_specs())} or a spec such as 'gaussian(mean=1, sd=0.1)'")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", default="-")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("map", help="build time-map points and a log grid")
    sp.add_argument("input")
    sp.add_argument("--points", help="points CSV output")
    sp.add_argument("--grid", help="grid JSON output")
    sp.add_argument("--kind", choices=("auto", "events", "jsonl", "deltas"), default="auto")
    sp.add_argument("--x-range", help="log10 lo,hi")
    sp.add_argument("--y-range", help="log10 lo,hi")
    common(sp, seed=False, grid=True)
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("analyze", help="profile a stream and classify it")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--out", default="-")
    sp.add_argument("--batch", action="store_true", help="analyse several inputs concurrently")
    sp.add_argument("--out-dir", help="report directory for --batch")
    sp.add_argument("--kind", choices=("auto", "events", "jsonl", "deltas"), default="auto")
    common(sp, grid=True)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("render", help="render points CSV / grid JSON files to SVG")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--mode", choices=("auto", "scatter", "heatmap"), default="auto")
    sp.add_argument("--layout", help="ROWS,COLS")
    sp.add_argument("--banner")
    sp.add_argument("--titles", help="';'-separated per-plot titles")
    sp.add_argument("--fixed-range", help="log10 lo,hi shared by all scatter axes")
    sp.add_argument("--smoothing-sd", type=float, help="heatmap kernel sd in bins; 0 disables")
    sp.add_argument("--out", default="-")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("resample", help="subsample an event file")
    sp.add_argument("input")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=RESAMPLE_MODES)
    sp.add_argument("--out", default="-")
    sp.add_argument("--kind", choices=("auto", "events", "jsonl"), default="auto")
    common(sp)
    sp.set_defaults(func=cmd_resample)
    return p


def _bins(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) == 1:
        parts = parts * 2
    values = tuple(int(p) for p in parts)
    if len(values) != 2 or min(values) < 1:
        raise argparse.ArgumentTypeError("bins must be N or NX,NY with values >= 1")
    return values


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"timemap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"timemap {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
