import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_edges
from transnet.basis import build_engine, four_power_set, hybrid_set
from transnet.coverage import compute_adjustable
from transnet.grid import GridSpec, label_to_signal
from transnet.netbuild import (
    build_network, connected_components, digit_offsets, euclidean_distance,
    is_negation_automorphism, reduce_network,
)


def test_euclidean_examples():
    assert euclidean_distance([0, 0], [0, 0]) == 0
    assert euclidean_distance([0, 0, 0], [0.5, 0, 0]) == 0.5
    assert euclidean_distance([0.5, 0.5], [0, 0]) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        euclidean_distance([0], [0, 1])


def test_baseline_shape(baseline_net, sets55):
    assert baseline_net.n_nodes == len(sets55.labels)
    assert baseline_net.labels == sorted(baseline_net.labels)
    e = baseline_net.edges
    assert np.all(e[:, 0] < e[:, 1])
    assert len(baseline_net.edge_set()) == baseline_net.n_edges


def test_edges_respect_threshold(baseline_net):
    g = baseline_net.grid
    labels = set(baseline_net.labels)
    for u, v in baseline_net.edges:
        assert euclidean_distance(label_to_signal(int(u), g).values,
                                  label_to_signal(int(v), g).values) <= 0.6 + 1e-12
    # and no missing pair
    lab = sorted(labels)
    vals = {n: label_to_signal(n, g).values for n in lab}
    edges = baseline_net.edge_set()
    for i, a in enumerate(lab):
        for b in lab[i + 1:]:
            close = euclidean_distance(vals[a], vals[b]) <= 0.6 + 1e-12
            assert close == ((a, b) in edges)


def test_best_type_rule(baseline_net):
    for node in baseline_net.nodes:
        best = min(node.fits, key=lambda f: (f.delta, f.function_index))
        assert node.best_type == best.function_index
        assert node.best_fit.delta == best.delta


def test_constants_prefer_first_function(baseline_net, g55):
    for c in range(5):
        n = sum(c * 5**j for j in range(5))
        assert baseline_net.node(n).best_type == 0  # exact tie across all four


def test_one_node_per_label(sets55, baseline_net):
    assert sum(len(n.fits) for n in baseline_net.nodes) == sets55.n_adjustable


@pytest.mark.parametrize("nx, ny, tau, L", [
    (2, 3, 0.2, 1.0), (3, 3, 0.2, 1.0), (3, 3, 0.05, 1.5), (3, 2, 0.1, 2.0), (2, 2, 0.01, 3.0),
])
def test_brute_force_oracle(nx, ny, tau, L):
    g = GridSpec(nx, ny)
    # even powers are rank deficient on x = +-1
    fset = four_power_set() if nx > 2 else four_power_set()[0::2]
    sets = compute_adjustable(build_engine(fset, g), tau_s=tau)
    for method in ("offsets", "pairwise"):
        net = build_network(sets, g, L=L, method=method)
        assert net.edge_set() == brute_force_edges(g, sets.labels.tolist(), L)


@pytest.mark.parametrize("grid, fset, tau, L", [
    (GridSpec(5, 5), four_power_set, 0.05, 0.6),
    (GridSpec(5, 7), hybrid_set, 0.1, 0.5),
    (GridSpec(6, 5), four_power_set, 0.1, 0.75),
])
def test_offsets_equal_pairwise(grid, fset, tau, L):
    sets = compute_adjustable(build_engine(fset(), grid), tau_s=tau)
    a = build_network(sets, grid, L=L, method="offsets")
    b = build_network(sets, grid, L=L, method="pairwise", threads=3)
    np.testing.assert_array_equal(a.edges, b.edges)
    assert a.n_edges > 0


def test_threshold_slack_includes_boundary():
    # L equal to a level gap must include that neighbour
    g = GridSpec(3, 3)
    sets = compute_adjustable(build_engine(four_power_set(), g), tau_s=0.01)
    net = build_network(sets, g, L=1.0)
    assert (0, 1) in net.edge_set()


def test_digit_offsets_bound():
    g = GridSpec(3, 5)
    offs = digit_offsets(g, 0.6)
    assert len(offs) == 6  # a single +-1 step on each sample
    assert all(sum(abs(d) for d in o) == 1 for o in offs)


def test_invalid_link_threshold(sets55, g55):
    with pytest.raises(ValueError):
        build_network(sets55, g55, L=0)


def test_reduced_total(baseline_net):
    red = reduce_network(baseline_net)
    assert red.total_weight == baseline_net.n_edges
    assert red.node_counts == baseline_net.type_counts()
    m = red.matrix()
    assert np.array_equal(m, m.T)


def test_components_partition(baseline_net):
    comps = connected_components(baseline_net)
    flat = sorted(x for c in comps for x in c)
    assert flat == baseline_net.labels
    assert [c[0] for c in comps] == sorted(c[0] for c in comps)


def test_negation_symmetry_on_hybrid():
    g = GridSpec(5, 7)
    sets = compute_adjustable(build_engine(hybrid_set(), g), tau_s=0.15)
    assert is_negation_automorphism(build_network(sets, g, L=0.5))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.01, 0.6), st.floats(0.3, 1.2))
def test_automorphism_property(engine55, table55, g55, tau, L):
    sets = compute_adjustable(engine55, tau_s=tau, table=table55)
    assert is_negation_automorphism(build_network(sets, g55, L=L))


def test_params_recorded(baseline_net):
    p = baseline_net.params
    assert p["tau_s"] == 0.2 and p["L"] == 0.6 and p["alpha"] == 10
    assert p["tau_d"] == pytest.approx(-math.log(0.2) / 10)
