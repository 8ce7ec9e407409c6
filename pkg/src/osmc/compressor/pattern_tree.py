"""Deduplicated pattern tree.

A BFS spanning tree of the subdivided graph, rooted at ``s_1``, is walked
parents-first.  Each vertex's fingerprint comes from its parent's by adding or
removing ``b^j`` for each of the (at most two) flipped positions ``j``.  A
vertex whose fingerprint is already known is merged into the earlier vertex,
which adopts its children; merges are verified by exact row comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import breadth_first_order

from osmc.compressor.fingerprint import MERSENNE_61, draw_base, fingerprint, powers
from osmc.distances import BINARY, PatternMatrix, bit_at, flip_positions
from osmc.errors import FingerprintCollisionDetected, ModeMismatch
from osmc.planar import SubdividedInstance


@dataclass(frozen=True, eq=False)
class PatternTree:
    """``vertex[t]`` is the subdivided vertex that introduced node ``t``;
    ``parent[t]`` is a node id (``-1`` at the root); ``label[t]`` lists the
    0-based positions flipped on the edge into ``t`` (padded with -1);
    ``node_of[v]`` maps every subdivided vertex to its node."""

    vertex: np.ndarray
    parent: np.ndarray
    label: np.ndarray
    node_of: np.ndarray
    fingerprints: np.ndarray
    root_bits: np.ndarray
    seed: int
    base: int
    modulus: int

    @property
    def size(self) -> int:
        return len(self.vertex)

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.size)]
        for t, p in enumerate(self.parent.tolist()):
            if p >= 0:
                out[p].append(t)
        return out

    def label_of(self, t: int) -> list[int]:
        return [int(p) for p in self.label[t] if p >= 0]

    def pattern_bits(self, t: int) -> np.ndarray:
        """Bits of node ``t`` recovered by replaying labels from the root."""
        bits = self.root_bits.copy()
        path = []
        while self.parent[t] >= 0:
            path.append(t)
            t = int(self.parent[t])
        for s in path:
            for p in self.label_of(s):
                bits[p] ^= 1
        return bits


def bfs_spanning_tree(sub: SubdividedInstance) -> tuple[np.ndarray, np.ndarray]:
    """``(order, parent)`` of a BFS tree rooted at ``s_1``; parents precede children."""
    order, pred = breadth_first_order(sub.graph.adjacency, sub.sources[0], directed=False,
                                      return_predecessors=True)
    if len(order) != sub.graph.n:
        raise ValueError("subdivided graph is disconnected")
    return order, pred


def build_pattern_tree(sub: SubdividedInstance, patterns: PatternMatrix, seed: int = 0,
                       modulus: int = MERSENNE_61) -> PatternTree:
    if patterns.mode != BINARY:
        raise ModeMismatch("the pattern tree is built over binary patterns")
    L = patterns.length
    base = draw_base(seed, modulus)
    pw = powers(base, L, modulus)
    order, pred = bfs_spanning_tree(sub)
    n = len(order)
    children = order[1:]
    parents = pred[children]
    flips = flip_positions(patterns, np.stack([parents, children], axis=1)) if len(children) else \
        np.zeros((0, 2), dtype=np.int64)
    # sign of each flip: +b^j when the child's bit is 1
    signs = np.zeros_like(flips)
    for c in range(flips.shape[1]):
        has = flips[:, c] >= 0
        signs[has, c] = np.where(bit_at(patterns, children[has], flips[has, c]) == 1, 1, -1)

    root = int(order[0])
    root_bits = patterns.bits(root).astype(np.uint8)
    fp = [0] * n
    fp[root] = fingerprint(root_bits.tolist(), base, modulus).value
    packed = patterns.packed
    known: dict[int, int] = {fp[root]: root}
    node_of = np.full(n, -1, dtype=np.int64)
    node_of[root] = 0
    vertex = [root]
    parent_node = [-1]
    labels = [(-1, -1)]
    fps = [fp[root]]
    flips_l = flips.tolist()
    signs_l = signs.tolist()
    for idx, (v, u) in enumerate(zip(children.tolist(), parents.tolist())):
        f = fp[u]
        for p, s in zip(flips_l[idx], signs_l[idx]):
            if p >= 0:
                f = (f + s * pw[p]) % modulus
        fp[v] = f
        w = known.get(f)
        if w is not None:
            if packed[w].tobytes() != packed[v].tobytes():
                raise FingerprintCollisionDetected(
                    f"vertices {w} and {v} share fingerprint {f} (seed {seed}) but differ")
            node_of[v] = node_of[w]
            continue
        known[f] = v
        node_of[v] = len(vertex)
        vertex.append(v)
        parent_node.append(int(node_of[u]))
        labels.append(tuple(flips_l[idx]))
        fps.append(f)
    return PatternTree(vertex=np.asarray(vertex, dtype=np.int64),
                       parent=np.asarray(parent_node, dtype=np.int64),
                       label=np.asarray(labels, dtype=np.int64).reshape(-1, 2),
                       node_of=node_of, fingerprints=np.asarray(fps, dtype=np.uint64),
                       root_bits=root_bits, seed=seed, base=base, modulus=modulus)


def build_pattern_tree_reseeding(sub: SubdividedInstance, patterns: PatternMatrix, seed: int = 0,
                                 modulus: int = MERSENNE_61, attempts: int = 8) -> PatternTree:
    """Rebuilds with seeds ``seed, seed + 1, ...`` after a detected collision."""
    last: FingerprintCollisionDetected | None = None
    for a in range(attempts):
        try:
            return build_pattern_tree(sub, patterns, seed + a, modulus)
        except FingerprintCollisionDetected as exc:
            last = exc
    raise FingerprintCollisionDetected(f"{attempts} seeds collided; last: {last}")
