"""Brute-force distance oracle: plain queue BFS, memoized per source.

Deliberately independent of the scipy-based routines so it can serve as
ground truth for them."""

from __future__ import annotations

from collections import deque

from osmc.errors import IndexOutOfRange
from osmc.planar import OSInstance, PlanarGraph


def bfs(graph: PlanarGraph, source: int) -> list[int]:
    nbrs = graph.neighbor_lists
    dist = [-1] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


class Oracle:
    def __init__(self, inst: OSInstance):
        self.inst = inst
        self._cache: dict[int, list[int]] = {}

    def from_vertex(self, source: int) -> list[int]:
        d = self._cache.get(source)
        if d is None:
            d = self._cache[source] = bfs(self.inst.graph, source)
        return d

    def distance(self, v: int, i: int) -> int:
        """``d(v, s_i)`` with 1-based ``i``."""
        if not 1 <= i <= self.inst.k:
            raise IndexOutOfRange(f"source index {i} outside 1..{self.inst.k}")
        return self.from_vertex(self.inst.S[i - 1])[v]


def oracle_distance(inst: OSInstance, v: int, i: int, oracle: Oracle | None = None) -> int:
    return (oracle or Oracle(inst)).distance(v, i)
