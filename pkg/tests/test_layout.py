import xml.etree.ElementTree as ET

import numpy as np
import pytest

from transnet.layout import (
    DEFAULT_PALETTE, LayoutMismatchError, LayoutResult, SvgStyle, fruchterman_reingold, render_svg,
)

SVG = "{http://www.w3.org/2000/svg}"


def test_layout_deterministic(baseline_net):
    a = fruchterman_reingold(baseline_net, iterations=60, seed=3)
    b = fruchterman_reingold(baseline_net, iterations=60, seed=3)
    np.testing.assert_array_equal(a.positions, b.positions)
    c = fruchterman_reingold(baseline_net, iterations=60, seed=4)
    assert not np.array_equal(a.positions, c.positions)


def test_layout_in_frame(baseline_net):
    lay = fruchterman_reingold(baseline_net, iterations=80, seed=0, area=4.0)
    assert lay.width == 2.0
    assert lay.positions.min() >= 0 and lay.positions.max() <= 2.0
    assert np.isfinite(lay.positions).all()
    assert lay.labels == baseline_net.labels


def test_layout_pulls_neighbours_together():
    adj = {0: (1,), 1: (0,), 2: (3,), 3: (2,)}
    lay = fruchterman_reingold(adj, iterations=300, seed=1)
    p = lay.as_dict()
    near = np.hypot(*np.subtract(p[0], p[1]))
    far = np.hypot(*np.subtract(p[0], p[2]))
    assert near < far


def test_degenerate_layouts():
    assert fruchterman_reingold({}, iterations=5).positions.shape == (0, 2)
    one = fruchterman_reingold({7: ()}, iterations=5, area=4.0)
    assert one.position(7) == (1.0, 1.0)
    with pytest.raises(ValueError):
        fruchterman_reingold({0: ()}, iterations=0)


def test_svg_valid(baseline_net):
    lay = fruchterman_reingold(baseline_net, iterations=30, seed=0)
    text = render_svg(baseline_net, lay)
    root = ET.fromstring(text)
    nodes = root.find(f"{SVG}g[@id='nodes']")
    assert len(nodes.findall(f"{SVG}circle")) == baseline_net.n_nodes
    edges = root.find(f"{SVG}g[@id='edges']")
    assert len(edges.findall(f"{SVG}line")) == baseline_net.n_edges
    fills = {c.get("fill") for c in nodes.findall(f"{SVG}circle")}
    assert fills <= {DEFAULT_PALETTE[t] for t in range(4)}


def test_svg_palette_and_determinism(baseline_net):
    lay = fruchterman_reingold(baseline_net, iterations=30, seed=0)
    style = SvgStyle(palette=("#000000",), radius=2, size=300)
    a = render_svg(baseline_net, lay, style)
    assert a == render_svg(baseline_net, lay, style)
    assert 'width="300"' in a
    fills = {c.get("fill") for c in ET.fromstring(a).find(f"{SVG}g[@id='nodes']")}
    assert fills == {"#000000"}


def test_svg_missing_coordinates(baseline_net):
    lay = LayoutResult(baseline_net.labels[:-1], np.zeros((baseline_net.n_nodes - 1, 2)), 1, 0, 1, 1)
    with pytest.raises(LayoutMismatchError):
        render_svg(baseline_net, lay)
