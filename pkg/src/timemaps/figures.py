"""Regenerate the reference figure set.

* ``sweep_<dgp>.svg``: 1x4 scatter panels at n = 10, 100, 1000, 10000 for
  each of the five reference processes, seed ``SEED + n``.
* ``combo3.svg``: 2x3 panel, scatter maps over smoothed heatmaps for three
  constructed accounts.

Every step passes through the CLI's file formats (delta CSV, events CSV,
points CSV, grid JSON), so ``scripts/figures.sh``, which runs the same
pipeline through the ``timemap`` command, writes identical bytes.

Usage::

    python -m timemaps.figures OUT_DIR [--seed N]
    python -m timemaps.figures --accounts DIR [--seed N]   # combo inputs only
"""

from __future__ import annotations

import argparse
from pathlib import Path

from .cli import read_deltas, write_deltas
from .dgp import default_specs, parse_dgp, sample
from .events import interarrivals, parse_events, serialize_events
from .render import heatmap_spec, heatmap_svg, panel, scatter_spec, scatter_svg
from .synthetic import diurnal_stream, scheduler_stream
from .timemap import (
    DEFAULT_SMOOTHING_SD,
    LogGrid,
    bin,
    build_map,
    plottable_points,
    points_from_csv,
    points_to_csv,
    smooth,
)

FIGURE_SEED = 2015
SAMPLE_SIZES = (10, 100, 1000, 10000)
BANNERS = {
    "exponential": "Time Maps for Exponential Interarrivals (Mean = 1)",
    "uniform": "Time Maps for Uniform Interarrivals (Min = 0, Max = 24)",
    "gaussian": "Time Maps for Gaussian Interarrivals (Mean = 12, SD = 3)",
    "lognormal": "Time Maps for Lognormal Interarrivals (Log Mean = 0, Log SD = 1)",
    "mixture": "Time Maps for Mixed Gaussian Interarrivals",
}
COMBO_BANNER = "Time Maps for Three Synthetic Accounts"
COMBO_TITLES = ("human, nightly gaps", "hourly scheduler + bursts", "narrow Gaussian bot")
NARROW_DGP = "gaussian(mean=3600, sd=60, unit=seconds)"
NARROW_N = 500


def sweep_panel(name: str, seed: int = FIGURE_SEED) -> str:
    spec = default_specs()[name]
    docs = []
    for n in SAMPLE_SIZES:
        series = read_deltas(write_deltas(sample(spec, n, seed + n)))
        pts = points_from_csv(points_to_csv(plottable_points(build_map(series))))
        docs.append(scatter_svg(pts))
    return panel(docs, (1, 4), BANNERS[name])


def write_accounts(out_dir: str | Path, seed: int = FIGURE_SEED) -> list[Path]:
    """Write the two constructed event files used by the combo panel."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "human.csv", out / "scheduler.csv"]
    paths[0].write_text(serialize_events(diurnal_stream(seed + 1)), encoding="utf-8")
    paths[1].write_text(serialize_events(scheduler_stream(seed + 2, hours=300)), encoding="utf-8")
    return paths


def combo_series(seed: int = FIGURE_SEED):
    human = parse_events(serialize_events(diurnal_stream(seed + 1)))
    scheduler = parse_events(serialize_events(scheduler_stream(seed + 2, hours=300)))
    narrow = read_deltas(write_deltas(sample(parse_dgp(NARROW_DGP), NARROW_N, seed + 3)))
    return [interarrivals(human), interarrivals(scheduler), narrow]


def combo_panel(seed: int = FIGURE_SEED, smoothing_sd: float = DEFAULT_SMOOTHING_SD) -> str:
    tops, bottoms = [], []
    for title, series in zip(COMBO_TITLES, combo_series(seed)):
        pts = plottable_points(build_map(series))
        tmap = points_from_csv(points_to_csv(pts))
        grid = LogGrid.from_json(bin(pts).to_json())
        tops.append(scatter_svg(tmap, scatter_spec(title)))
        bottoms.append(heatmap_svg(smooth(grid, smoothing_sd), heatmap_spec(title)))
    return panel(tops + bottoms, (2, 3), COMBO_BANNER)


def generate(out_dir: str | Path, seed: int = FIGURE_SEED) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in BANNERS:
        path = out / f"sweep_{name}.svg"
        path.write_text(sweep_panel(name, seed), encoding="utf-8")
        written.append(path)
    path = out / "combo3.svg"
    path.write_text(combo_panel(seed), encoding="utf-8")
    written.append(path)
    return written


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="python -m timemaps.figures")
    p.add_argument("out_dir", nargs="?")
    p.add_argument("--accounts", metavar="DIR", help="only write the combo input event files")
    p.add_argument("--seed", type=int, default=FIGURE_SEED)
    args = p.parse_args(argv)
    if args.accounts:
        paths = write_accounts(args.accounts, args.seed)
    elif args.out_dir:
        paths = generate(args.out_dir, args.seed)
    else:
        p.error("give OUT_DIR or --accounts DIR")
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
