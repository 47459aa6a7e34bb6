import math
import statistics

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_shortest_paths_exhaustive, betweenness_exhaustive, floyd_warshall, random_graph
from transnet.graphops import (
    betweenness, bfs_distances, degree, path_length_statistics, random_walk, shortest_paths,
)

PATH4 = {0: (1,), 1: (0, 2), 2: (1, 3), 3: (2,)}
SQUARE = {0: (1, 2), 1: (0, 3), 2: (0, 3), 3: (1, 2)}
STAR = {0: (1, 2, 3), 1: (0,), 2: (0,), 3: (0,)}


def graphs(max_n=9):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        seed = draw(st.integers(0, 2**32 - 1))
        p = draw(st.floats(0.0, 1.0))
        return random_graph(np.random.default_rng(seed), n, p)
    return build()


def test_bfs_path_graph():
    assert bfs_distances(PATH4, 0) == {0: 0, 1: 1, 2: 2, 3: 3}


def test_shortest_paths_square():
    r = shortest_paths(SQUARE, 0, 3)
    assert r.length == 2 and r.count == 2
    assert r.paths == [[0, 1, 3], [0, 2, 3]]
    assert not r.capped


def test_shortest_paths_cap_keeps_exact_count():
    r = shortest_paths(SQUARE, 0, 3, cap=1)
    assert r.paths == [[0, 1, 3]] and r.count == 2 and r.capped


def test_shortest_path_to_self():
    r = shortest_paths(PATH4, 2, 2)
    assert r.length == 0 and r.paths == [[2]] and r.count == 1


def test_unreachable():
    adj = {0: (1,), 1: (0,), 2: ()}
    r = shortest_paths(adj, 0, 2)
    assert not r.reachable and r.count == 0 and r.paths == []
    with pytest.raises(KeyError):
        shortest_paths(adj, 0, 9)


def test_betweenness_examples():
    b = betweenness(PATH4)
    assert b[1] == pytest.approx(2 / 3) and b[2] == pytest.approx(2 / 3)
    assert b[0] == 0 and b[3] == 0
    assert betweenness(STAR)[0] == pytest.approx(1.0)
    assert betweenness(STAR, normalized=False)[0] == pytest.approx(3.0)


def test_degree():
    assert degree(STAR) == {0: 3, 1: 1, 2: 1, 3: 1}


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_bfs_matches_floyd_warshall(adj):
    fw = floyd_warshall(adj)
    for s in adj:
        d = bfs_distances(adj, s)
        for t in adj:
            assert d.get(t, math.inf) == fw[s][t]


@settings(max_examples=60, deadline=None)
@given(graphs(8))
def test_paths_match_exhaustive(adj):
    for s in adj:
        for t in adj:
            r = shortest_paths(adj, s, t, cap=10**6)
            ref = all_shortest_paths_exhaustive(adj, s, t)
            assert r.paths == ref
            assert r.count == len(ref)


@settings(max_examples=60, deadline=None)
@given(graphs(8))
def test_betweenness_matches_exhaustive(adj):
    got = betweenness(adj)
    ref = betweenness_exhaustive(adj)
    for k in adj:
        assert abs(got[k] - ref[k]) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(0, 2**63), st.integers(0, 20))
def test_walk_valid_and_reproducible(adj, seed, steps):
    start = min(adj)
    a = random_walk(adj, start, steps, seed)
    assert a.steps == random_walk(adj, start, steps, seed).steps
    assert a.steps[0] == start
    assert len(set(a.steps)) == len(a.steps)
    assert a.n_moves <= steps
    for x, y in zip(a.steps, a.steps[1:]):
        assert y in adj[x]
    if a.n_moves < steps:
        assert all(w in a.steps for w in adj[a.steps[-1]])


def test_walk_zero_steps_and_errors():
    assert random_walk(PATH4, 1, 0, 3).steps == [1]
    with pytest.raises(KeyError):
        random_walk(PATH4, 7, 1, 0)
    with pytest.raises(ValueError):
        random_walk(PATH4, 0, -1, 0)


def test_walk_forced_path():
    assert random_walk(PATH4, 0, 10, 123).steps == [0, 1, 2, 3]


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_path_statistics_pooled(adj):
    st_ = path_length_statistics(adj)
    fw = floyd_warshall(adj)
    ds = [fw[s][t] for s in adj for t in adj if s < t and fw[s][t] != math.inf]
    assert st_.n_pairs == len(ds)
    n = len(adj)
    assert st_.unreachable_pairs == n * (n - 1) // 2 - len(ds)
    if ds:
        assert st_.mean == pytest.approx(statistics.fmean(ds))
        assert st_.std == pytest.approx(statistics.pstdev(ds), abs=1e-9)
    else:
        assert st_.mean is None
    assert sum(c.size for c in st_.components) == n


def test_works_on_networks(baseline_net):
    adj = baseline_net.adjacency
    assert betweenness(baseline_net) == betweenness(adj)
    assert degree(baseline_net) == {k: len(v) for k, v in adj.items()}
