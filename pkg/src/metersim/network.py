"""Small world contact network between households.

Watts-Strogatz construction: a ring lattice where every node links to its
K nearest neighbours (K/2 each side), then each lattice edge is rewired
with probability beta to a uniformly drawn new endpoint.  Rewiring keeps
the edge count at n*K/2, never creates self loops or duplicate edges, and
leaves a node alone once it is connected to everyone else.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class BadDegreeError(ValueError):
    """K is odd, too small, or not below the node count."""


class UnknownNodeError(ValueError):
    """Node id outside [0, node_count)."""


@dataclass(frozen=True, slots=True)
class Network:
    """Undirected graph as sorted per node adjacency tuples."""

    node_count: int
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2


def generate_small_world(
    n: int, mean_degree_k: int, rewire_beta: float, rng: np.random.Generator,
) -> Network:
    """Build a Watts-Strogatz graph on nodes 0..n-1."""
    if mean_degree_k < 2 or mean_degree_k % 2 != 0:
        raise BadDegreeError(f"mean degree must be even and >= 2, got {mean_degree_k}")
    if mean_degree_k >= n:
        raise BadDegreeError(f"mean degree {mean_degree_k} must be below node count {n}")
    if not 0.0 <= rewire_beta <= 1.0:
        raise ValueError(f"rewire probability must be in [0, 1], got {rewire_beta}")

    adj: list[set[int]] = [set() for _ in range(n)]
    half = mean_degree_k // 2
    for offset in range(1, half + 1):
        for i in range(n):
            j = (i + offset) % n
            adj[i].add(j)
            adj[j].add(i)

    # rewire pass, lattice edge order: ring offset outer, node inner
    if rewire_beta > 0.0:
        for offset in range(1, half + 1):
            for i in range(n):
                if rng.random() >= rewire_beta:
                    continue
                if len(adj[i]) >= n - 1:
                    continue  # already connected to everyone
                j = (i + offset) % n
                if j not in adj[i]:
                    continue  # that lattice edge was already rewired away
                target = int(rng.integers(0, n))
                while target == i or target in adj[i]:
                    target = int(rng.integers(0, n))
                adj[i].discard(j)
                adj[j].discard(i)
                adj[i].add(target)
                adj[target].add(i)

    return Network(
        node_count=n,
        adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adj),
    )


def neighbors(net: Network, node_id: int) -> tuple[int, ...]:
    """Sorted neighbour ids of node_id."""
    if not 0 <= node_id < net.node_count:
        raise UnknownNodeError(f"node {node_id} not in [0, {net.node_count})")
    return net.adjacency[node_id]


def clustering_coefficient(net: Network) -> float:
    """Mean local clustering: closed neighbour pairs over possible pairs.

    Nodes with degree below 2 contribute 0.
    """
    if net.node_count == 0:
        return 0.0
    sets = [set(nbrs) for nbrs in net.adjacency]
    total = 0.0
    for nbrs in net.adjacency:
        d = len(nbrs)
        if d < 2:
            continue
        closed = 0
        for a in range(d):
            na = sets[nbrs[a]]
            for b in range(a + 1, d):
                if nbrs[b] in na:
                    closed += 1
        total += closed / (d * (d - 1) / 2)
    return total / net.node_count


def mean_path_length_sampled(
    net: Network, rng: np.random.Generator, max_pairs: int = 1000,
) -> float:
    """Mean shortest path length, exact over all pairs when the graph has
    at most max_pairs of them, estimated from max_pairs sampled pairs
    otherwise.

    Unreachable pairs are skipped; returns nan when nothing was reachable.
    """
    n = net.node_count
    if n < 2:
        return float("nan")

    total = 0.0
    counted = 0
    if n * (n - 1) // 2 <= max_pairs:
        for s in range(n):
            dist = _bfs_distances(net, s)
            for t in range(s + 1, n):
                if dist[t] >= 0:
                    total += dist[t]
                    counted += 1
        return total / counted if counted else float("nan")

    sources = rng.integers(0, n, size=max_pairs)
    targets = rng.integers(0, n - 1, size=max_pairs)
    # shift to avoid self pairs
    targets = np.where(targets >= sources, targets + 1, targets)

    by_source: dict[int, list[int]] = {}
    for s, t in zip(sources.tolist(), targets.tolist()):
        by_source.setdefault(s, []).append(t)

    for s, ts in by_source.items():
        dist = _bfs_distances(net, s)
        for t in ts:
            if dist[t] >= 0:
                total += dist[t]
                counted += 1
    return total / counted if counted else float("nan")


def _bfs_distances(net: Network, source: int) -> list[int]:
    dist = [-1] * net.node_count
    dist[source] = 0
    queue = deque([source])
    adjacency = net.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in adjacency[u]:
            if dist[v] < 0:
                dist[v] = du + 1
                queue.append(v)
    return dist
