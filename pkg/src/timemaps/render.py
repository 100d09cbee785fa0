"""Standalone SVG 1.1 rendering of time maps and heatmaps.

Output is a plain string built from fixed-precision numbers, so the same
inputs always give byte-identical documents.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import LayoutOverflow
from .timemap import LogGrid, TimeMap, plottable_points

# "red" followed by the ten stops of R's heat.colors(10)
HEAT_PALETTE: tuple[str, ...] = (
    "#FF0000", "#FF0000", "#FF2400", "#FF4900", "#FF6D00", "#FF9200",
    "#FFB600", "#FFDB00", "#FFFF00", "#FFFF40", "#FFFFBF",
)

MARGIN_LEFT = 62
MARGIN_RIGHT = 16
MARGIN_TOP = 34
MARGIN_BOTTOM = 48
BANNER_HEIGHT = 48
POINT_RADIUS = 2.5
FONT = "Helvetica, Arial, sans-serif"


@dataclass(frozen=True)
class PlotSpec:
    mode: str = "scatter"
    title: str = ""
    axis_labels: tuple[str, str] = ("Time Before Tweet", "Time After Tweet")
    point_color: str = "blue"
    palette: tuple[str, ...] = HEAT_PALETTE
    width: int = 360
    height: int = 360
    # log10 (lo, hi) applied to both axes instead of autoscaling
    fixed_range: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("scatter", "heatmap"):
            raise ValueError(f"unknown plot mode {self.mode!r}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")
        if self.mode == "heatmap" and not self.palette:
            raise ValueError("heatmap mode needs a non-empty palette")


def scatter_spec(title: str = "", **kwargs) -> PlotSpec:
    return PlotSpec(mode="scatter", title=title, **kwargs)


def heatmap_spec(title: str = "", **kwargs) -> PlotSpec:
    kwargs.setdefault("axis_labels", ("Log(Time Before Tweets)", "Log(Time After Tweets)"))
    return PlotSpec(mode="heatmap", title=title, **kwargs)


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


class _Frame:
    """Maps data coordinates (already in log10 units) onto the plot area."""

    def __init__(self, spec: PlotSpec, x_range, y_range) -> None:
        self.spec = spec
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.left = MARGIN_LEFT
        self.right = spec.width - MARGIN_RIGHT
        self.top = MARGIN_TOP
        self.bottom = spec.height - MARGIN_BOTTOM

    def px(self, x):
        return self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def py(self, y):
        return self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)


def _open(spec: PlotSpec, kind: str) -> list[str]:
    w, h = spec.width, spec.height
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}" class="{kind}">',
        f'<path class="page" d="M0,0H{w}V{h}H0Z" fill="white"/>',
    ]


def _text(x: float, y: float, text: str, size: int = 11, anchor: str = "middle",
          extra: str = "", cls: str = "") -> str:
    c = f' class="{cls}"' if cls else ""
    return (f'<text{c} x="{_f(x)}" y="{_f(y)}" font-family="{FONT}" font-size="{size}" '
            f'text-anchor="{anchor}"{extra}>{escape(text)}</text>')


def _decorate(fr: _Frame, xticks, yticks) -> list[str]:
    """Frame, ticks, tick labels, axis labels and title."""
    spec = fr.spec
    out = [
        f'<path class="frame" d="M{_f(fr.left)},{_f(fr.top)}H{_f(fr.right)}V{_f(fr.bottom)}'
        f'H{_f(fr.left)}Z" fill="none" stroke="black" stroke-width="1"/>'
    ]
    for value, label in xticks:
        x = fr.px(value)
        out.append(f'<path class="tick" d="M{_f(x)},{_f(fr.bottom)}V{_f(fr.bottom + 5)}" stroke="black"/>')
        out.append(_text(x, fr.bottom + 17, label, 10, cls="tick-label"))
    for value, label in yticks:
        y = fr.py(value)
        out.append(f'<path class="tick" d="M{_f(fr.left - 5)},{_f(y)}H{_f(fr.left)}" stroke="black"/>')
        out.append(_text(fr.left - 8, y + 3.5, label, 10, anchor="end", cls="tick-label"))
    xl, yl = spec.axis_labels
    out.append(_text((fr.left + fr.right) / 2, spec.height - 10, xl, 12, cls="xlabel"))
    cy = (fr.top + fr.bottom) / 2
    out.append(_text(16, cy, yl, 12, extra=f' transform="rotate(-90 16 {_f(cy)})"', cls="ylabel"))
    if spec.title:
        out.append(_text(spec.width / 2, 22, spec.title, 14, extra=' font-weight="bold"', cls="title"))
    return out


def _decade_label(k: int) -> str:
    if 0 <= k <= 4:
        return str(10**k)
    if -4 <= k < 0:
        return f"{10.0**k:.{-k}f}"
    return f"1e{k}"


def _decade_axis(values: np.ndarray) -> tuple[float, float]:
    if len(values) == 0:
        return 0.0, 1.0
    lo = math.floor(float(values.min()))
    hi = math.ceil(float(values.max()))
    if hi <= lo:
        hi = lo + 1
    return float(lo), float(hi)


def scatter_svg(tmap: TimeMap, spec: PlotSpec | None = None) -> str:
    """Log-log scatter, one filled circle per plottable point.

    Axes span whole decades around the data unless ``spec.fixed_range`` is
    set; points outside a fixed range are still drawn and clipped.
    """
    if spec is None:
        n_deltas = len(tmap) + tmap.dropped_nonpositive
        spec = scatter_spec(f"n = {n_deltas + 1 if n_deltas else 0}")
    pts = plottable_points(tmap)
    lx, ly = np.log10(pts.t_before), np.log10(pts.t_after)
    if spec.fixed_range is not None:
        x_rng = y_rng = (float(spec.fixed_range[0]), float(spec.fixed_range[1]))
    else:
        x_rng, y_rng = _decade_axis(lx), _decade_axis(ly)
    fr = _Frame(spec, x_rng, y_rng)
    xticks = [(k, _decade_label(k)) for k in range(math.ceil(x_rng[0]), math.floor(x_rng[1]) + 1)]
    yticks = [(k, _decade_label(k)) for k in range(math.ceil(y_rng[0]), math.floor(y_rng[1]) + 1)]
    out = _open(spec, "scatter")
    out.append(f'<clipPath id="plot-area"><rect x="{_f(fr.left)}" y="{_f(fr.top)}" '
               f'width="{_f(fr.right - fr.left)}" height="{_f(fr.bottom - fr.top)}"/></clipPath>')
    out.append(f'<g class="points" fill="{escape(spec.point_color)}" clip-path="url(#plot-area)">')
    for x, y in zip(fr.px(lx).tolist(), fr.py(ly).tolist()):
        out.append(f'<circle class="pt" cx="{_f(x)}" cy="{_f(y)}" r="{POINT_RADIUS}"/>')
    out.append("</g>")
    out.extend(_decorate(fr, xticks, yticks))
    if len(pts) == 0:
        out.append(_text((fr.left + fr.right) / 2, (fr.top + fr.bottom) / 2,
                         "no plottable points", 12, extra=' fill="#888888"', cls="warning"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _hex(color: str) -> tuple[int, int, int]:
    m = re.fullmatch(r"#([0-9a-fA-F]{6})", color.strip())
    if not m:
        raise ValueError(f"palette colours must be #RRGGBB, got {color!r}")
    v = int(m.group(1), 16)
    return v >> 16, (v >> 8) & 0xFF, v & 0xFF


def ramp(palette: Sequence[str], t: float) -> str:
    """Linear RGB interpolation along ``palette`` for ``t`` in [0, 1]."""
    stops = [_hex(c) for c in palette]
    if len(stops) == 1:
        r, g, b = stops[0]
        return f"#{r:02X}{g:02X}{b:02X}"
    t = min(max(t, 0.0), 1.0) * (len(stops) - 1)
    i = min(int(t), len(stops) - 2)
    frac = t - i
    rgb = [round(a + (b - a) * frac) for a, b in zip(stops[i], stops[i + 1])]
    return "#{:02X}{:02X}{:02X}".format(*rgb)


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    k = first
    while k * step <= hi + 1e-9 * step:
        ticks.append(round(k * step, 10))
        k += 1
    return ticks


def heatmap_svg(grid: LogGrid, spec: PlotSpec | None = None) -> str:
    """Density heatmap in log10 units, one rectangle per non-empty cell.

    Empty space takes the first palette colour and the densest cell the
    last, as a smoothed scatter would.
    """
    spec = spec or heatmap_spec()
    fr = _Frame(spec, grid.x_range, grid.y_range)
    out = _open(spec, "heatmap")
    out.append(f'<path class="plot-bg" d="M{_f(fr.left)},{_f(fr.top)}H{_f(fr.right)}V{_f(fr.bottom)}'
               f'H{_f(fr.left)}Z" fill="{spec.palette[0]}"/>')
    peak = float(grid.cells.max()) if grid.cells.size else 0.0
    if peak > 0:
        xe, ye = fr.px(grid.x_edges()), fr.py(grid.y_edges())
        out.append('<g class="cells" shape-rendering="crispEdges">')
        for i, j in zip(*np.nonzero(grid.cells > 0)):
            color = ramp(spec.palette, float(grid.cells[i, j]) / peak)
            x, y = xe[i], ye[j + 1]
            out.append(f'<rect class="cell" x="{_f(x)}" y="{_f(y)}" width="{_f(xe[i + 1] - x)}" '
                       f'height="{_f(ye[j] - y)}" fill="{color}"/>')
        out.append("</g>")
    xt = [(v, f"{v:g}") for v in nice_ticks(*grid.x_range)]
    yt = [(v, f"{v:g}") for v in nice_ticks(*grid.y_range)]
    out.extend(_decorate(fr, xt, yt))
    out.append("</svg>")
    return "\n".join(out) + "\n"


_SIZE = re.compile(r'<svg [^>]*?width="(\d+)" height="(\d+)"')


def panel(documents: Sequence[str], layout: tuple[int, int], banner: str = "") -> str:
    """Arrange documents row-major on a grid under a shared banner."""
    rows, cols = layout
    if rows < 1 or cols < 1:
        raise LayoutOverflow(f"layout must be at least 1x1, got {rows}x{cols}")
    if len(documents) > rows * cols:
        raise LayoutOverflow(f"{len(documents)} documents do not fit a {rows}x{cols} layout")
    sizes = []
    for doc in documents:
        m = _SIZE.search(doc)
        if not m:
            raise ValueError("document is not an SVG produced by this module")
        sizes.append((int(m.group(1)), int(m.group(2))))
    cw = max((w for w, _ in sizes), default=PlotSpec.width)
    ch = max((h for _, h in sizes), default=PlotSpec.height)
    top = BANNER_HEIGHT if banner else 0
    width, height = cols * cw, top + rows * ch
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" class="panel">',
        f'<path class="page" d="M0,0H{width}V{height}H0Z" fill="white"/>',
    ]
    if banner:
        out.append(_text(width / 2, 32, banner, 20, extra=' fill="blue"', cls="banner"))
    for k, doc in enumerate(documents):
        r, c = divmod(k, cols)
        body = doc.split("?>", 1)[1].strip() if doc.startswith("<?xml") else doc.strip()
        # clip-path ids must stay unique once documents share a file
        body = body.replace('id="plot-area"', f'id="plot-area-{k}"').replace(
            "url(#plot-area)", f"url(#plot-area-{k})")
        body = body.replace("<svg ", f'<svg x="{c * cw}" y="{top + r * ch}" ', 1)
        out.append(body)
    out.append("</svg>")
    return "\n".join(out) + "\n"
