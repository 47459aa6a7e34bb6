"""Transition network over adjustable signals.

Nodes are the adjustable signals (one node per label, whatever the number
of functions fitting it). Two nodes are joined when the Euclidean distance
between their signals is at most ``L``. Each node's type is the passing
function with the smallest delta, ties going to the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._parallel import map_ranges
from .coverage import AdjustableSets
from .grid import GridSpec, labels_to_values, negate_label

# Slack on the ``omega <= L`` predicate, absorbing round-off in grid levels.
EDGE_SLACK = 1e-12

# Cap on the number of digit offsets before falling back to the pairwise scan.
MAX_OFFSETS = 200_000


@dataclass(frozen=True)
class NodeFit:
    function_index: int
    delta: float
    sigma: float
    coefficients: tuple[float, ...]


@dataclass(frozen=True)
class Node:
    label: int
    fits: tuple[NodeFit, ...]
    best_type: int

    @property
    def best_fit(self) -> NodeFit:
        return next(f for f in self.fits if f.function_index == self.best_type)

    @property
    def types(self) -> tuple[int, ...]:
        return tuple(f.function_index for f in self.fits)


@dataclass
class TransitionNetwork:
    grid: GridSpec
    nodes: list[Node]
    edges: np.ndarray  # (E, 2) int64, u < v, lexicographically sorted
    names: list[str]
    params: dict
    _index: dict = field(default=None, repr=False, compare=False)
    _adjacency: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self._index = {n.label: k for k, n in enumerate(self.nodes)}

    @property
    def labels(self) -> list[int]:
        return [n.label for n in self.nodes]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    def node(self, label: int) -> Node:
        return self.nodes[self._index[int(label)]]

    def __contains__(self, label) -> bool:
        return int(label) in self._index

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    @property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Label -> sorted neighbour labels."""
        if self._adjacency is None:
            adj = {n.label: [] for n in self.nodes}
            for u, v in self.edges:
                adj[int(u)].append(int(v))
                adj[int(v)].append(int(u))
            self._adjacency = {k: tuple(sorted(v)) for k, v in adj.items()}
        return self._adjacency

    def signal(self, label: int) -> np.ndarray:
        return labels_to_values([label], self.grid)[0]

    def type_counts(self) -> list[int]:
        counts = [0] * len(self.names)
        for n in self.nodes:
            counts[n.best_type] += 1
        return counts


@dataclass
class ReducedNetwork:
    names: list[str]
    node_counts: list[int]
    weights: dict[tuple[int, int], int]  # (i, j) with i <= j

    def weight(self, i: int, j: int) -> int:
        return self.weights.get((min(i, j), max(i, j)), 0)

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def matrix(self) -> np.ndarray:
        k = len(self.names)
        w = np.zeros((k, k), dtype=np.int64)
        for (i, j), c in self.weights.items():
            w[i, j] = w[j, i] = c
        return w

    def to_dict(self) -> dict:
        return {
            "functions": list(self.names),
            "node_counts": list(self.node_counts),
            "edges": [
                {"source": i, "target": j, "weight": w} for (i, j), w in sorted(self.weights.items())
            ],
        }


def euclidean_distance(f, h) -> float:
    f = np.asarray(f, dtype=float)
    h = np.asarray(h, dtype=float)
    if f.shape != h.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {h.shape}")
    return math.sqrt(float(np.sum((f - h) ** 2)))


def _sq_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Fixed column order so both edge routes compute identical distances.
    out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]))
    for j in range(a.shape[-1]):
        d = a[..., j] - b[..., j]
        out += d * d
    return out


def _adjacent(sq: np.ndarray, L: float) -> np.ndarray:
    return np.sqrt(sq) <= L + EDGE_SLACK


def _make_nodes(sets: AdjustableSets) -> list[Node]:
    sig = sets.sigmas()
    nodes = []
    for k, label in enumerate(sets.labels):
        idx = np.flatnonzero(sets.passing[k])
        fits = tuple(
            NodeFit(int(i), float(sets.deltas[k, i]), float(sig[k, i]),
                    tuple(float(c) for c in sets.coefficients[i][k]))
            for i in idx
        )
        # lowest delta, ties to lowest index
        best = min(fits, key=lambda f: (f.delta, f.function_index)).function_index
        nodes.append(Node(int(label), fits, best))
    return nodes


def digit_offsets(grid: GridSpec, L: float) -> list[tuple[int, ...]]:
    """Nonzero level offsets whose Euclidean length can be within ``L``."""
    dy = grid.dy
    kmax = int(math.floor((L + 1e-9) / dy))
    bound = (L + 1e-9) ** 2
    out = []

    def rec(prefix, acc):
        if len(prefix) == grid.n_x:
            if any(prefix):
                out.append(tuple(prefix))
            return
        for d in range(-kmax, kmax + 1):
            s = acc + (d * dy) ** 2
            if s <= bound:
                rec(prefix + [d], s)
            if len(out) > MAX_OFFSETS:
                return

    rec([], 0.0)
    return out


def _edges_offsets(labels: np.ndarray, values: np.ndarray, grid: GridSpec, L: float,
                   offsets: Sequence[tuple[int, ...]]) -> np.ndarray:
    digits = np.rint((values - grid.y_min) / grid.dy).astype(np.int64)
    weights = grid.n_y ** np.arange(grid.n_x, dtype=np.int64)
    found = []
    for off in offsets:
        off = np.asarray(off, dtype=np.int64)
        # u < v: only keep offsets whose label shift is positive
        shift = int(off @ weights)
        if shift <= 0:
            continue
        nd = digits + off
        ok = np.all((nd >= 0) & (nd < grid.n_y), axis=1)
        src = np.flatnonzero(ok)
        tgt_labels = labels[src] + shift
        pos = np.searchsorted(labels, tgt_labels)
        pos_c = np.minimum(pos, len(labels) - 1)
        hit = labels[pos_c] == tgt_labels
        a, b = src[hit], pos_c[hit]
        keep = _adjacent(_sq_dist(values[a], values[b]), L)
        found.append(np.column_stack([labels[a][keep], labels[b][keep]]))
    if not found:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(found, axis=0)


def _edges_pairwise(labels: np.ndarray, values: np.ndarray, L: float, threads: int = 1,
                    block: int = 512) -> np.ndarray:
    n = len(labels)

    def work(lo, hi):
        sq = _sq_dist(values[lo:hi, None, :], values[None, :, :])
        mask = _adjacent(sq, L)
        rows, cols = np.nonzero(mask)
        rows = rows + lo
        keep = cols > rows
        return np.column_stack([labels[rows[keep]], labels[cols[keep]]])

    parts = map_ranges(work, 0, n, threads=threads, chunk=block)
    if not parts:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(parts, axis=0)


def _sort_edges(e: np.ndarray) -> np.ndarray:
    e = np.asarray(e, dtype=np.int64).reshape(-1, 2)
    if e.size == 0:
        return e
    order = np.lexsort((e[:, 1], e[:, 0]))
    return e[order]


def build_network(sets: AdjustableSets, grid: GridSpec, L: float = 0.6, method: str = "auto",
                  threads: int = 1, extra_params: dict | None = None) -> TransitionNetwork:
    """Nodes from ``sets``; edges between nodes with ``omega <= L``.

    ``method`` selects the edge search: ``"offsets"`` walks bounded digit
    perturbations around each node, ``"pairwise"`` scans all node pairs.
    ``"auto"`` picks whichever is cheaper; both give the same edge set.
    """
    if not L > 0:
        raise ValueError(f"L must be positive, got {L!r}")
    labels = np.asarray(sets.labels, dtype=np.int64)
    values = labels_to_values(labels, grid) if labels.size else np.zeros((0, grid.n_x))
    nodes = _make_nodes(sets)

    if method not in ("auto", "offsets", "pairwise"):
        raise ValueError(f"unknown method {method!r}")
    offsets = None
    if method in ("auto", "offsets"):
        offsets = digit_offsets(grid, L)
        if method == "auto" and (len(offsets) > MAX_OFFSETS or len(offsets) > len(labels)):
            method = "pairwise"
        elif method == "offsets" and len(offsets) > MAX_OFFSETS:
            raise ValueError("too many digit offsets for this L; use the pairwise method")
        else:
            method = "offsets"
    if labels.size == 0:
        edges = np.zeros((0, 2), dtype=np.int64)
    elif method == "offsets":
        edges = _edges_offsets(labels, values, grid, L, offsets)
    else:
        edges = _edges_pairwise(labels, values, L, threads=threads)

    params = {
        "tau_s": sets.tau_s,
        "tau_d": sets.tau_d,
        "alpha": sets.alpha,
        "L": float(L),
        "grid": grid.to_dict(),
    }
    if extra_params:
        params.update(extra_params)
    return TransitionNetwork(grid, nodes, _sort_edges(edges), list(sets.names), params)


def reduce_network(net: TransitionNetwork) -> ReducedNetwork:
    weights: dict[tuple[int, int], int] = {}
    for u, v in net.edges:
        a, b = net.node(u).best_type, net.node(v).best_type
        key = (min(a, b), max(a, b))
        weights[key] = weights.get(key, 0) + 1
    return ReducedNetwork(list(net.names), net.type_counts(), dict(sorted(weights.items())))


def connected_components(net) -> list[list[int]]:
    """Components as sorted label lists, ordered by their smallest label."""
    adj = net.adjacency if hasattr(net, "adjacency") else net
    seen = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        seen.add(start)
        stack, comp = [start], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def negation_map(net: TransitionNetwork) -> dict[int, int]:
    """Label -> label of the mirrored signal, for every node."""
    return {n.label: negate_label(n.label, net.grid) for n in net.nodes}


def is_negation_automorphism(net: TransitionNetwork, check_types: bool = True) -> bool:
    m = negation_map(net)
    if any(v not in net for v in m.values()):
        return False
    if check_types and any(net.node(u).best_type != net.node(v).best_type for u, v in m.items()):
        return False
    mapped = {(min(m[u], m[v]), max(m[u], m[v])) for u, v in net.edge_set()}
    return mapped == net.edge_set()


__all__ = [
    "Node", "NodeFit", "TransitionNetwork", "ReducedNetwork", "euclidean_distance",
    "build_network", "reduce_network", "connected_components", "digit_offsets",
    "negation_map", "is_negation_automorphism",
]
