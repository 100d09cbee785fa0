import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from timemaps.errors import LayoutOverflow
from timemaps.render import (
    HEAT_PALETTE,
    PlotSpec,
    heatmap_spec,
    heatmap_svg,
    nice_ticks,
    panel,
    ramp,
    scatter_spec,
    scatter_svg,
)
from timemaps.timemap import LogGrid, TimeMap, bin, smooth

NS = "{http://www.w3.org/2000/svg}"


def parse(doc):
    return ET.fromstring(doc.split("?>", 1)[1] if doc.startswith("<?xml") else doc)


def test_scatter_one_circle_per_plottable_point(tiny_map):
    doc = scatter_svg(tiny_map)
    root = parse(doc)
    assert len(root.findall(f".//{NS}circle")) == 2
    assert 'fill="blue"' in doc
    assert "Time Before Tweet" in doc and "Time After Tweet" in doc
    assert "n = 3" in doc  # interarrival draws: points + 1


def test_scatter_is_deterministic(tiny_map):
    assert scatter_svg(tiny_map) == scatter_svg(TimeMap.from_points(tiny_map.points))


def test_scatter_decade_ticks(tiny_map):
    doc = scatter_svg(tiny_map)
    # points span 10..70 s, so the axes run from 10 to 100
    labels = re.findall(r'class="tick-label"[^>]*>([^<]+)<', doc)
    assert "10" in labels and "100" in labels


def test_empty_map_draws_warning():
    doc = scatter_svg(TimeMap.from_points([(0.0, 5.0, 2)], dropped_nonpositive=0))
    assert "no plottable points" in doc
    assert "<circle" not in doc
    parse(doc)


def test_points_outside_fixed_range_are_clipped(tiny_map):
    doc = scatter_svg(tiny_map, scatter_spec("fixed", fixed_range=(0.0, 1.5)))
    assert 'clip-path="url(#plot-area)"' in doc
    assert doc.count("<circle") == 2


def test_heatmap_one_rect_per_occupied_cell():
    cells = np.zeros((5, 4))
    cells[0, 0], cells[4, 3], cells[2, 1] = 1.0, 3.0, 2.0
    grid = LogGrid(5, 4, (0, 5), (0, 4), cells, 6.0)
    doc = heatmap_svg(grid)
    assert doc.count("<rect") == 3
    assert f'fill="{HEAT_PALETTE[-1]}"' in doc
    assert "Log(Time Before Tweets)" in doc
    parse(doc)


def test_heatmap_of_smoothed_grid_fills_more_cells(tiny_map):
    grid = bin(tiny_map, 10, 10)
    assert heatmap_svg(smooth(grid, 1.0)).count("<rect") > heatmap_svg(grid).count("<rect")


def test_ramp_endpoints_and_midpoint():
    assert ramp(("#000000", "#FFFFFF"), 0.0) == "#000000"
    assert ramp(("#000000", "#FFFFFF"), 1.0) == "#FFFFFF"
    assert ramp(("#000000", "#FFFFFF"), 0.5) == "#808080"
    assert ramp(("#123456",), 0.7) == "#123456"
    with pytest.raises(ValueError):
        ramp(("red", "blue"), 0.5)


def test_nice_ticks():
    assert nice_ticks(0.0, 1.0) == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    assert nice_ticks(-0.3, 4.2) == [0.0, 1.0, 2.0, 3.0, 4.0]


def test_plot_spec_validation():
    with pytest.raises(ValueError):
        PlotSpec(mode="bars")
    with pytest.raises(ValueError):
        heatmap_spec(palette=())


def test_panel_layout(tiny_map):
    docs = [scatter_svg(tiny_map, scatter_spec(f"p{k}")) for k in range(3)]
    out = panel(docs, (2, 2), "Banner")
    root = parse(out)
    assert root.get("width") == "720" and root.get("height") == str(48 + 720)
    children = root.findall(f"{NS}svg")
    assert [(c.get("x"), c.get("y")) for c in children] == [("0", "48"), ("360", "48"), ("0", "408")]
    ids = re.findall(r'id="(plot-area[^"]*)"', out)
    assert ids == ["plot-area-0", "plot-area-1", "plot-area-2"]
    assert 'fill="blue"' in out and "Banner" in out


def test_panel_overflow(tiny_map):
    with pytest.raises(LayoutOverflow):
        panel([scatter_svg(tiny_map)] * 5, (2, 2))
    with pytest.raises(LayoutOverflow):
        panel([], (0, 1))
