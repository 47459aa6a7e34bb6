"""Serialization of networks to JSON, DOT and GraphML.

JSON layout (keys in this order)::

    {
      "format": "transnet/network", "version": 1,
      "params": {tau_s, tau_d, alpha, L, grid, functions, ...},
      "functions": [names],
      "nodes": [{"label", "best_type", "delta", "sigma", "values",
                 "fits": [{"function", "delta", "sigma", "coefficients"}]}],
      "edges": [[u, v], ...]
    }

Nodes are sorted by label and edges lexicographically, so equal networks
serialize to identical bytes.
"""

from __future__ import annotations

import json
from xml.sax.saxutils import escape

import numpy as np

from .basis import ReferenceFunctionSpec
from .grid import GridSpec, labels_to_values
from .layout import DEFAULT_PALETTE
from .netbuild import Node, NodeFit, ReducedNetwork, TransitionNetwork

JSON_FORMAT = "transnet/network"
JSON_VERSION = 1


def dumps(obj) -> str:
    """Canonical JSON text used for all artifacts."""
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def network_to_dict(net: TransitionNetwork) -> dict:
    values = {lab: v for lab, v in zip(net.labels, _values(net))}
    nodes = []
    for n in net.nodes:
        best = n.best_fit
        nodes.append({
            "label": n.label,
            "best_type": n.best_type,
            "delta": best.delta,
            "sigma": best.sigma,
            "values": [float(x) for x in values[n.label]],
            "fits": [
                {"function": f.function_index, "delta": f.delta, "sigma": f.sigma,
                 "coefficients": list(f.coefficients)}
                for f in n.fits
            ],
        })
    return {
        "format": JSON_FORMAT,
        "version": JSON_VERSION,
        "params": net.params,
        "functions": list(net.names),
        "nodes": nodes,
        "edges": [[int(u), int(v)] for u, v in net.edges],
    }


def _values(net: TransitionNetwork) -> np.ndarray:
    if not net.nodes:
        return np.zeros((0, net.grid.n_x))
    return labels_to_values(net.labels, net.grid)


def network_to_json(net: TransitionNetwork) -> str:
    return dumps(network_to_dict(net))


def network_from_dict(doc: dict) -> TransitionNetwork:
    if doc.get("format") != JSON_FORMAT:
        raise ValueError("not a transnet network document")
    grid = GridSpec(**doc["params"]["grid"])
    nodes = [
        Node(int(n["label"]),
             tuple(NodeFit(int(f["function"]), float(f["delta"]), float(f["sigma"]),
                           tuple(float(c) for c in f["coefficients"])) for f in n["fits"]),
             int(n["best_type"]))
        for n in doc["nodes"]
    ]
    edges = np.asarray(doc["edges"], dtype=np.int64).reshape(-1, 2)
    return TransitionNetwork(grid, nodes, edges, list(doc["functions"]), dict(doc["params"]))


def _dot_str(s) -> str:
    return json.dumps(str(s), ensure_ascii=False)


def network_to_dot(net: TransitionNetwork, palette=DEFAULT_PALETTE) -> str:
    lines = ["graph transition_network {", '  node [shape=circle, style=filled, label=""];']
    for n in net.nodes:
        color = palette[n.best_type % len(palette)]
        lines.append(
            f'  {n.label} [type={n.best_type}, function={_dot_str(net.names[n.best_type])}, '
            f'delta="{n.best_fit.delta!r}", fillcolor="{color}"];'
        )
    for u, v in net.edges:
        lines.append(f"  {int(u)} -- {int(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_GRAPHML_KEYS = (
    ("label", "int"),
    ("best_type", "int"),
    ("function", "string"),
    ("delta", "double"),
    ("sigma", "double"),
)


def network_to_graphml(net: TransitionNetwork) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns" '
        'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
        'xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns '
        'http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
    ]
    for name, typ in _GRAPHML_KEYS:
        out.append(f'  <key id="{name}" for="node" attr.name="{name}" attr.type="{typ}"/>')
    out.append('  <graph id="transition_network" edgedefault="undirected">')
    for n in net.nodes:
        best = n.best_fit
        out.append(f'    <node id="n{n.label}">')
        out.append(f'      <data key="label">{n.label}</data>')
        out.append(f'      <data key="best_type">{n.best_type}</data>')
        out.append(f'      <data key="function">{escape(net.names[n.best_type])}</data>')
        out.append(f'      <data key="delta">{best.delta!r}</data>')
        out.append(f'      <data key="sigma">{best.sigma!r}</data>')
        out.append("    </node>")
    for k, (u, v) in enumerate(net.edges):
        out.append(f'    <edge id="e{k}" source="n{int(u)}" target="n{int(v)}"/>')
    out.append("  </graph>")
    out.append("</graphml>")
    return "\n".join(out) + "\n"


def reduced_to_dot(red: ReducedNetwork, palette=DEFAULT_PALETTE) -> str:
    lines = ["graph reduced_network {", "  node [shape=circle, style=filled];"]
    for t, name in enumerate(red.names):
        lines.append(f'  t{t} [label={_dot_str(name)}, count={red.node_counts[t]}, '
                     f'fillcolor="{palette[t % len(palette)]}"];')
    for (i, j), w in sorted(red.weights.items()):
        lines.append(f'  t{i} -- t{j} [weight={w}, label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def functions_fingerprint(specs: list[ReferenceFunctionSpec]) -> list[dict]:
    return [s.to_dict() for s in specs]
