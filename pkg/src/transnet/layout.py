"""Fruchterman-Reingold placement and SVG rendering of transition networks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

DEFAULT_ITERATIONS = 500

# Colour per node type, cycled when there are more types than entries.
DEFAULT_PALETTE = (
    "#1f77b4",  # blue
    "#d62728",  # red
    "#e5b800",  # yellow
    "#2ca02c",  # green
    "#e377c2",  # pink
    "#17becf",  # cyan
    "#9467bd",
    "#8c564b",
    "#7f7f7f",
    "#bcbd22",
)


class LayoutMismatchError(ValueError):
    pass


@dataclass
class LayoutResult:
    labels: list[int]
    positions: np.ndarray  # (N, 2)
    iterations: int
    seed: int
    width: float
    height: float

    def position(self, label: int) -> tuple[float, float]:
        k = self.labels.index(label)
        return float(self.positions[k, 0]), float(self.positions[k, 1])

    def as_dict(self) -> dict[int, tuple[float, float]]:
        return {lab: (float(x), float(y)) for lab, (x, y) in zip(self.labels, self.positions)}


def fruchterman_reingold(net, iterations: int = DEFAULT_ITERATIONS, seed: int = 0,
                         area: float = 1.0) -> LayoutResult:
    """Classic force-directed layout on a square frame of the given area.

    Repulsion ``k^2/d`` acts between all pairs, attraction ``d^2/k`` along
    edges, with ``k = sqrt(area / N)``. The displacement cap cools linearly
    from ``0.1 * sqrt(area)`` to zero and positions are clamped to the frame.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not area > 0:
        raise ValueError("area must be positive")
    adj = net.adjacency if hasattr(net, "adjacency") else net
    labels = sorted(adj)
    n = len(labels)
    side = math.sqrt(area)
    if n == 0:
        return LayoutResult([], np.zeros((0, 2)), iterations, seed, side, side)
    if n == 1:
        return LayoutResult(labels, np.array([[side / 2, side / 2]]), iterations, seed, side, side)

    index = {lab: i for i, lab in enumerate(labels)}
    edges = np.array([(index[u], index[v]) for u in labels for v in adj[u] if u < v],
                     dtype=np.int64).reshape(-1, 2)
    rng = np.random.Generator(np.random.PCG64(seed))
    pos = rng.uniform(0.0, side, size=(n, 2))
    k = math.sqrt(area / n)
    t0 = 0.1 * side
    eps = 1e-9 * side

    kk = k * k
    eps2 = eps * eps
    for it in range(iterations):
        temp = t0 * (1.0 - it / iterations)
        x, y = pos[:, 0], pos[:, 1]
        dx = x[:, None] - x[None, :]
        dy = y[:, None] - y[None, :]
        d2 = dx * dx
        d2 += dy * dy
        np.maximum(d2, eps2, out=d2)
        rep = np.divide(kk, d2)
        np.fill_diagonal(rep, 0.0)
        disp = np.empty((n, 2))
        disp[:, 0] = (rep * dx).sum(axis=1)
        disp[:, 1] = (rep * dy).sum(axis=1)
        if edges.size:
            d = pos[edges[:, 0]] - pos[edges[:, 1]]
            dl = np.maximum(np.sqrt(np.einsum("ij,ij->i", d, d)), eps)
            f = (d * (dl / k)[:, None])  # (d^2/k) * unit vector
            np.add.at(disp, edges[:, 0], -f)
            np.add.at(disp, edges[:, 1], f)
        length = np.maximum(np.sqrt(np.einsum("ij,ij->i", disp, disp)), eps)
        pos = pos + disp / length[:, None] * np.minimum(length, temp)[:, None]
        np.clip(pos, 0.0, side, out=pos)
    return LayoutResult(labels, pos, iterations, seed, side, side)


@dataclass
class SvgStyle:
    palette: tuple[str, ...] = DEFAULT_PALETTE
    radius: float = 4.0
    size: int = 800
    margin: int = 40
    edge_color: str = "#999999"
    edge_width: float = 0.8
    background: str = "#ffffff"
    legend: bool = True
    extra: dict = field(default_factory=dict)

    def color(self, t: int) -> str:
        return self.palette[t % len(self.palette)]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(net, layout: LayoutResult, style: SvgStyle | None = None) -> str:
    """SVG 1.1 drawing: edges as lines, nodes as circles coloured by best type."""
    style = style or SvgStyle()
    pos = layout.as_dict()
    missing = [n.label for n in net.nodes if n.label not in pos]
    if missing:
        raise LayoutMismatchError(f"layout lacks coordinates for {len(missing)} node(s), e.g. {missing[0]}")

    legend_h = 18 * len(net.names) + 10 if style.legend else 0
    w = style.size
    h = style.size + legend_h
    scale = (style.size - 2 * style.margin) / max(layout.width, layout.height, 1e-12)

    def xy(label):
        x, y = pos[label]
        # flip y so larger layout y is drawn higher
        return style.margin + x * scale, style.margin + (layout.height - y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="{style.background}"/>',
        f'<g id="edges" stroke="{style.edge_color}" stroke-width="{style.edge_width}">',
    ]
    for u, v in net.edges:
        x1, y1 = xy(int(u))
        x2, y2 = xy(int(v))
        out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>')
    out.append("</g>")
    out.append('<g id="nodes" stroke="#333333" stroke-width="0.3">')
    for node in net.nodes:
        x, y = xy(node.label)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{style.radius:g}" '
                   f'fill="{style.color(node.best_type)}"><title>{node.label} '
                   f'({escape(net.names[node.best_type])})</title></circle>')
    out.append("</g>")
    if style.legend:
        out.append('<g id="legend" font-family="sans-serif" font-size="12">')
        y0 = style.size + 5
        for t, name in enumerate(net.names):
            y = y0 + 18 * t
            out.append(f'<circle cx="{style.margin}" cy="{y + 6}" r="5" fill="{style.color(t)}"/>')
            out.append(f'<text x="{style.margin + 12}" y="{y + 10}">{escape(str(name))}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
