"""Analyses over an undirected transition network.

All functions accept either a :class:`~transnet.netbuild.TransitionNetwork`
or a plain mapping ``label -> iterable of neighbour labels``.

Random walks draw from NumPy's PCG64 generator seeded with the given
integer; one ``integers(k)`` draw picks among the ``k`` unvisited
neighbours listed in ascending label order.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

DEFAULT_PATH_CAP = 64


def _adj(net) -> Mapping[int, Sequence[int]]:
    adj = net.adjacency if hasattr(net, "adjacency") else net
    return adj


def _sorted_adj(net) -> dict[int, tuple[int, ...]]:
    return {u: tuple(sorted(vs)) for u, vs in _adj(net).items()}


def bfs_distances(net, source: int) -> dict[int, int]:
    adj = _adj(net)
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


@dataclass
class PathResult:
    source: int
    target: int
    length: int | None
    count: int
    paths: list[list[int]] = field(default_factory=list)
    capped: bool = False

    @property
    def reachable(self) -> bool:
        return self.length is not None

    def to_dict(self, signals: Mapping[int, Sequence[float]] | None = None) -> dict:
        out = {
            "source": self.source,
            "target": self.target,
            "reachable": self.reachable,
            "length": self.length,
            "count": self.count,
            "capped": self.capped,
            "paths": self.paths,
        }
        if signals is not None:
            out["signals"] = {str(k): list(map(float, signals[k]))
                              for k in sorted({n for p in self.paths for n in p})}
        return out


def shortest_paths(net, u: int, v: int, cap: int = DEFAULT_PATH_CAP) -> PathResult:
    """All minimal-hop paths from ``u`` to ``v``, lexicographic, at most ``cap`` listed.

    ``count`` is always the exact number of shortest paths.
    """
    adj = _sorted_adj(net)
    for x in (u, v):
        if x not in adj:
            raise KeyError(f"label {x} is not a node")
    du = bfs_distances(adj, u)
    if v not in du:
        return PathResult(u, v, None, 0, [])
    dv = bfs_distances(adj, v)
    length = du[v]

    # path counts from each on-path node to v
    onpath = sorted((w for w in du if w in dv and du[w] + dv[w] == length), key=lambda w: -du[w])
    ways = {}
    for w in onpath:
        ways[w] = 1 if w == v else sum(ways[x] for x in adj[w]
                                       if x in ways and du.get(x) == du[w] + 1)
    count = ways[u]

    paths: list[list[int]] = []

    def dfs(node, path):
        if len(paths) >= cap:
            return
        if node == v:
            paths.append(list(path))
            return
        for w in adj[node]:
            if w in ways and du.get(w) == du[node] + 1:
                path.append(w)
                dfs(w, path)
                path.pop()
                if len(paths) >= cap:
                    return

    if cap > 0:
        dfs(u, [u])
    return PathResult(u, v, length, count, paths, capped=count > len(paths))


@dataclass
class ComponentStats:
    smallest_label: int
    size: int
    n_pairs: int
    mean: float | None
    std: float | None
    diameter: int


@dataclass
class PathStats:
    n_pairs: int
    unreachable_pairs: int
    mean: float | None
    std: float | None
    components: list[ComponentStats]

    def to_dict(self) -> dict:
        return {
            "n_pairs": self.n_pairs,
            "unreachable_pairs": self.unreachable_pairs,
            "mean": self.mean,
            "std": self.std,
            "components": [c.__dict__.copy() for c in self.components],
        }


def _mean_std(total: int, total_sq: int, n: int) -> tuple[float | None, float | None]:
    if n == 0:
        return None, None
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, math.sqrt(var)


def path_length_statistics(net) -> PathStats:
    """Mean and population std of shortest-path lengths over unordered reachable pairs."""
    adj = _sorted_adj(net)
    labels = sorted(adj)
    n = len(labels)
    comp_of: dict[int, int] = {}
    comps = []
    for s in labels:
        if s in comp_of:
            continue
        members = sorted(bfs_distances(adj, s))
        for m in members:
            comp_of[m] = len(comps)
        comps.append(members)

    out = []
    pooled = [0, 0, 0]
    for members in comps:
        tot = tot_sq = pairs = diam = 0
        for s in members:
            for t, d in bfs_distances(adj, s).items():
                if t > s:
                    tot += d
                    tot_sq += d * d
                    pairs += 1
                    diam = max(diam, d)
        mean, std = _mean_std(tot, tot_sq, pairs)
        out.append(ComponentStats(members[0], len(members), pairs, mean, std, diam))
        pooled[0] += tot
        pooled[1] += tot_sq
        pooled[2] += pairs
    mean, std = _mean_std(*pooled)
    unreachable = n * (n - 1) // 2 - pooled[2]
    return PathStats(pooled[2], unreachable, mean, std, out)


@dataclass
class WalkTrace:
    seed: int
    steps: list[int]

    @property
    def n_moves(self) -> int:
        return len(self.steps) - 1

    def to_dict(self, signals: Mapping[int, Sequence[float]] | None = None) -> dict:
        out = {"seed": self.seed, "steps": self.steps}
        if signals is not None:
            out["signals"] = [list(map(float, signals[k])) for k in self.steps]
        return out


def random_walk(net, start: int, max_steps: int, seed: int) -> WalkTrace:
    """Self-avoiding walk with uniform choice among unvisited neighbours."""
    adj = _sorted_adj(net)
    if start not in adj:
        raise KeyError(f"label {start} is not a node")
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    rng = np.random.Generator(np.random.PCG64(seed))
    steps = [start]
    visited = {start}
    cur = start
    for _ in range(max_steps):
        cands = [w for w in adj[cur] if w not in visited]
        if not cands:
            break
        cur = cands[int(rng.integers(len(cands)))]
        steps.append(cur)
        visited.add(cur)
    return WalkTrace(int(seed), steps)


def degree(net) -> dict[int, int]:
    return {u: len(vs) for u, vs in sorted(_adj(net).items())}


def betweenness(net, normalized: bool = True) -> dict[int, float]:
    """Brandes' dependency accumulation on the unweighted graph.

    Each unordered pair counts once. With ``normalized`` the values are
    divided by ``(N-1)(N-2)/2`` when ``N >= 3``.
    """
    adj = _sorted_adj(net)
    labels = sorted(adj)
    cb = dict.fromkeys(labels, 0.0)
    for s in labels:
        stack = []
        preds = {s: []}
        sigma = {s: 1}
        dist = {s: 0}
        q = deque([s])
        while q:
            v = q.popleft()
            stack.append(v)
            dv = dist[v]
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dv + 1
                    sigma[w] = 0
                    preds[w] = []
                    q.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(stack, 0.0)
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
    n = len(labels)
    scale = 0.5
    if normalized and n >= 3:
        scale /= (n - 1) * (n - 2) / 2
    return {k: v * scale for k, v in cb.items()}
