import json
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from transnet.export import (
    dumps, network_from_dict, network_to_dict, network_to_dot, network_to_graphml,
    network_to_json, reduced_to_dot,
)
from transnet.netbuild import reduce_network

GML = "{http://graphml.graphdrawing.org/xmlns}"


def test_json_round_trip(baseline_net):
    doc = json.loads(network_to_json(baseline_net))
    assert doc["format"] == "transnet/network" and doc["version"] == 1
    assert [n["label"] for n in doc["nodes"]] == baseline_net.labels
    back = network_from_dict(doc)
    assert back.labels == baseline_net.labels
    np.testing.assert_array_equal(back.edges, baseline_net.edges)
    assert [n.best_type for n in back.nodes] == [n.best_type for n in baseline_net.nodes]
    assert network_to_json(back) == network_to_json(baseline_net)


def test_json_node_values(baseline_net):
    doc = network_to_dict(baseline_net)
    for n in doc["nodes"]:
        np.testing.assert_array_equal(n["values"], baseline_net.signal(n["label"]))
        assert n["delta"] == min(f["delta"] for f in n["fits"])


def test_json_rejects_foreign_doc():
    with pytest.raises(ValueError):
        network_from_dict({"format": "other"})


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_graphml_well_formed(baseline_net):
    root = ET.fromstring(network_to_graphml(baseline_net))
    graph = root.find(f"{GML}graph")
    assert len(graph.findall(f"{GML}node")) == baseline_net.n_nodes
    assert len(graph.findall(f"{GML}edge")) == baseline_net.n_edges


def test_graphml_readable_by_networkx(baseline_net, tmp_path):
    nx = pytest.importorskip("networkx")
    p = tmp_path / "g.graphml"
    p.write_text(network_to_graphml(baseline_net))
    g = nx.read_graphml(p)
    assert g.number_of_nodes() == baseline_net.n_nodes
    assert g.number_of_edges() == baseline_net.n_edges
    some = baseline_net.nodes[3]
    assert g.nodes[f"n{some.label}"]["best_type"] == some.best_type


def test_dot_structure(baseline_net):
    text = network_to_dot(baseline_net)
    assert text.startswith("graph transition_network {") and text.rstrip().endswith("}")
    assert len(re.findall(r"^\s+\d+ -- \d+;$", text, re.M)) == baseline_net.n_edges
    assert len(re.findall(r"^\s+\d+ \[type=", text, re.M)) == baseline_net.n_nodes


def test_dot_parsable_by_pydot(baseline_net):
    pydot = pytest.importorskip("pydot")
    (g,) = pydot.graph_from_dot_data(network_to_dot(baseline_net))
    assert len(g.get_edges()) == baseline_net.n_edges


def test_reduced_dot(baseline_net):
    red = reduce_network(baseline_net)
    text = reduced_to_dot(red)
    weights = [int(w) for w in re.findall(r"weight=(\d+)", text)]
    assert sum(weights) == baseline_net.n_edges
