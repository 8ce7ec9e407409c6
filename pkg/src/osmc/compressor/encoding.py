"""The compressed S x T distance encoding.

Every terminal ``v`` stores ``d(v, s_1)`` in the original graph and a pointer
to a version of a persistent prefix-count index holding its binary pattern.
Then ``d(v, s_i) = d(v, s_1) + ones(2(i-1)) - (i-1)``, where ``ones(j)``
counts ``+1`` entries among the first ``j`` pattern entries.

Three ways to produce the versions:

* ``general``: the deduplicated pattern tree is traversed depth-first; every
  descent applies the edge label (at most two flips) and creates a version.
* ``connected``: ``T`` induces a connected subgraph; a BFS tree of it is
  traversed instead, one version per terminal whose pattern differs from its
  parent's.
* ``face``: ``T`` lies on one face; the face boundary is walked through the
  edge midpoints and a version is created at each pattern change.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from osmc.compressor.fingerprint import MERSENNE_61
from osmc.compressor.pattern_tree import PatternTree, build_pattern_tree_reseeding
from osmc.compressor.persistent import PTR_MASK, VersionedPrefixIndex
from osmc.distances import PatternMatrix, all_source_bfs, lift_binary_patterns
from osmc.errors import IndexOutOfRange, ModePreconditionFailed, UnknownTerminal
from osmc.planar import OSInstance, SubdividedInstance, subdivide

MODES = ("general", "connected", "face")
HEADER_WORDS = 4


@dataclass(frozen=True, eq=False)
class EncodingInputs:
    """Everything the builders need: the subdivided instance, base distances
    ``dist[i][v] = d_G(v, s_{i+1})`` and binary patterns of all subdivided vertices."""

    inst: OSInstance
    sub: SubdividedInstance
    dist: np.ndarray
    patterns: PatternMatrix


def prepare(inst: OSInstance, threads: int = 1) -> EncodingInputs:
    sub = subdivide(inst)
    field_ = all_source_bfs(inst, threads=threads)
    return EncodingInputs(inst, sub, field_.dist, lift_binary_patterns(field_, sub))


@dataclass(eq=False)
class Encoding:
    mode: str
    k: int
    n: int
    seed: int
    x: int
    index: VersionedPrefixIndex
    versions: list[int]
    terminals: list[int]
    base: list[int]
    pointer: list[int]
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self._slot = {v: t for t, v in enumerate(self.terminals)}
        self._levels = tuple(range(self.index.levels - 1, -1, -1))

    @property
    def length(self) -> int:
        return 2 * self.k - 1

    def _lookup(self, v: int) -> int:
        t = self._slot.get(v)
        if t is None:
            raise UnknownTerminal(f"vertex {v} is not a terminal")
        return t

    def distance(self, v: int, i: int) -> int:
        """``d_G(v, s_i)`` for terminal ``v`` and 1-based source index ``i``."""
        t = self._slot.get(v)
        if t is None:
            raise UnknownTerminal(f"vertex {v} is not a terminal")
        if not 1 <= i <= self.k:
            raise IndexOutOfRange(f"source index {i} outside 1..{self.k}")
        i -= 1
        if i == 0:
            return self.base[t]
        # inlined prefix_ones(root, 2i): this is the hot path of every query
        j = 2 * i - 1
        c = j >> 6
        pool = self.index.pool
        node = self.versions[self.pointer[t]]
        acc = 0
        for level in self._levels:
            w = pool[node]
            if (c >> level) & 1:
                acc += w >> 48
                node = (w >> 24) & PTR_MASK
            else:
                node = w & PTR_MASK
        return self.base[t] + acc + (pool[node] & ((2 << (j & 63)) - 1)).bit_count() - i

    def subdivided_distance(self, v: int, j: int) -> int:
        """``d_{G'}(v, s'_j)`` for 1-based ``j`` over ``s_1, w_1, ..., s_k, w_k``."""
        t = self._lookup(v)
        if not 1 <= j <= 2 * self.k:
            raise IndexOutOfRange(f"subdivided source index {j} outside 1..{2 * self.k}")
        return 2 * self.base[t] + self.index.prefix_sum(self.versions[self.pointer[t]], j - 1)

    def pattern_bits(self, v: int) -> list[int]:
        return self.index.bits(self.versions[self.pointer[self._lookup(v)]])


def query(enc: Encoding, v: int, i: int) -> int:
    return enc.distance(v, i)


def size_report(enc: Encoding) -> dict:
    """Machine words by component (every pointer counts as one word)."""
    words = {
        "header": HEADER_WORDS,
        "index_nodes": len(enc.index.pool),
        "versions": len(enc.versions),
        "terminal_table": 3 * len(enc.terminals),
    }
    words["total"] = sum(words.values())
    return words


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _flips(patterns: PatternMatrix, u: int, v: int) -> list[int]:
    x = np.bitwise_xor(patterns.packed[u], patterns.packed[v])
    return np.flatnonzero(np.unpackbits(x, count=patterns.length)).tolist()


def _terminal_table(inp: EncodingInputs, pointer_of: dict[int, int]):
    T = list(inp.inst.T)
    base = inp.dist[0][T].astype(np.int64).tolist() if T else []
    return T, base, [pointer_of[v] for v in T]


def build_general(inp: EncodingInputs, seed: int = 0, modulus: int = MERSENNE_61,
                  tree: PatternTree | None = None) -> Encoding:
    if tree is None:
        tree = build_pattern_tree_reseeding(inp.sub, inp.patterns, seed, modulus)
    index = VersionedPrefixIndex(inp.patterns.length)
    versions = [index.build(tree.root_bits.tolist())]
    node_version = [-1] * tree.size
    node_version[0] = 0
    children = tree.children()
    labels = tree.label.tolist()
    max_flips = 0
    # Euler tour: a descent creates a version, an ascent returns to the parent's version
    stack = [iter(children[0])]
    while stack:
        c = next(stack[-1], None)
        if c is None:
            stack.pop()
            continue
        parent_version = versions[node_version[int(tree.parent[c])]]
        flips = [p for p in labels[c] if p >= 0]
        max_flips = max(max_flips, len(flips))
        versions.append(index.toggle(parent_version, flips))
        node_version[c] = len(versions) - 1
        stack.append(iter(children[c]))
    node_of = tree.node_of
    T, base, ptr = _terminal_table(inp, {v: node_version[node_of[v]] for v in inp.inst.T})
    return Encoding("general", inp.inst.k, inp.inst.n, tree.seed, tree.size, index, versions, T, base, ptr,
                    stats={"tour_steps": 2 * (tree.size - 1), "max_flips_per_step": max_flips,
                           "tree_size": tree.size})


def _induced_bfs(inst: OSInstance) -> tuple[list[int], dict[int, int]]:
    T = set(inst.T)
    root = inst.T[0]
    parent = {root: -1}
    order = [root]
    queue = deque([root])
    nbrs = inst.graph.neighbor_lists
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w in T and w not in parent:
                parent[w] = u
                order.append(w)
                queue.append(w)
    if len(order) != len(T):
        missing = min(T - set(order))
        raise ModePreconditionFailed(
            f"terminals do not induce a connected subgraph: {missing} unreachable from {root} inside T")
    return order, parent


def build_connected(inp: EncodingInputs, seed: int = 0) -> Encoding:
    inst = inp.inst
    if not inst.T:
        raise ModePreconditionFailed("connected mode needs at least one terminal")
    order, parent = _induced_bfs(inst)
    P = inp.patterns
    index = VersionedPrefixIndex(P.length)
    versions = [index.build(P.bits(order[0]).tolist())]
    ptr = {order[0]: 0}
    max_flips = 0
    for v in order[1:]:
        u = parent[v]
        flips = _flips(P, u, v)
        max_flips = max(max_flips, len(flips))
        if flips:
            versions.append(index.toggle(versions[ptr[u]], flips))
            ptr[v] = len(versions) - 1
        else:
            ptr[v] = ptr[u]
    T, base, pointer = _terminal_table(inp, ptr)
    return Encoding("connected", inst.k, inst.n, seed, len(versions), index, versions, T, base, pointer,
                    stats={"tour_steps": 2 * (len(order) - 1), "max_flips_per_step": max_flips})


def face_containing(inst: OSInstance, vertices) -> int:
    """A face of the base graph whose boundary contains every given vertex."""
    g = inst.graph
    vertices = sorted(set(vertices))
    if not vertices:
        return g.f_inf
    want = set(vertices)
    candidates = sorted({int(g.face_of[a]) for a in g.rotation[vertices[0]]},
                        key=lambda f: (f != g.f_inf, f))
    for f in candidates:
        if want <= set(g.face_vertices(f)):
            return f
    raise ModePreconditionFailed(
        f"no single face contains all {len(vertices)} terminals (checked faces at vertex {vertices[0]})")


def build_face(inp: EncodingInputs, seed: int = 0, face: int | None = None) -> Encoding:
    inst = inp.inst
    g = inst.graph
    f = face_containing(inst, inst.T) if face is None else face
    darts = list(g.faces[f])
    if inst.T:
        first = min(inst.T)
        start = next(p for p, a in enumerate(darts) if int(g.tail[a]) == first)
        darts = darts[start:] + darts[:start]
    n = g.n
    P = inp.patterns
    index = VersionedPrefixIndex(P.length)
    here = int(g.tail[darts[0]])
    versions = [index.build(P.bits(here).tolist())]
    ptr = {here: 0}
    changes = 0
    flips_seen = 0
    # the walk ends at the tail of the last dart: every face vertex has been seen
    for a in darts[:-1]:
        v = int(g.tail[a ^ 1])
        for nxt in (n + (a >> 1), v):
            flips = _flips(P, here, nxt)
            if flips:
                versions.append(index.toggle(versions[-1], flips))
                changes += 1
                flips_seen += len(flips)
            here = nxt
        ptr.setdefault(v, len(versions) - 1)
    T, base, pointer = _terminal_table(inp, ptr)
    return Encoding("face", inst.k, inst.n, seed, len(versions), index, versions, T, base, pointer,
                    stats={"face": f, "face_length": len(g.faces[f]), "pattern_changes": changes,
                           "flips": flips_seen})


def build_encoding(inst: OSInstance, mode: str = "auto", seed: int = 0, threads: int = 1,
                   modulus: int = MERSENNE_61, inputs: EncodingInputs | None = None) -> Encoding:
    """``mode`` is one of ``general``, ``connected``, ``face`` or ``auto``.

    ``auto`` builds every mode whose precondition holds and keeps the one
    with the fewest words."""
    inp = inputs if inputs is not None else prepare(inst, threads)
    if mode == "general":
        return build_general(inp, seed, modulus)
    if mode == "connected":
        return build_connected(inp, seed)
    if mode == "face":
        return build_face(inp, seed)
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}; expected auto or one of {MODES}")
    built = []
    for builder in (build_face, build_connected):
        try:
            built.append(builder(inp, seed))
        except ModePreconditionFailed:
            pass
    built.append(build_general(inp, seed, modulus))
    return min(built, key=lambda e: size_report(e)["total"])
