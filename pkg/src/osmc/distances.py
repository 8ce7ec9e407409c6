"""Distance fields from the source face and pattern vectors.

Ternary patterns live on the base graph: entry ``i`` is
``d(v, s_{i+1}) - d(v, s_i)`` for ``i = 1..k-1``.  Binary patterns live on the
subdivided graph over ``S' = s_1, w_1, ..., s_k, w_k`` and have ``2k - 1``
entries in ``{-1, +1}``.

Pattern matrices are stored bit-packed (one bit per binary entry, two bits
per ternary entry).  For binary patterns a set bit means ``+1``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from osmc.errors import AdjacentPatternViolation, IndexOutOfRange, ModeMismatch
from osmc.planar import OSInstance, PlanarGraph, SubdividedInstance

TERNARY = "ternary"
BINARY = "binary"

_CHUNK = 4096


def _dist_dtype(n: int):
    return np.int16 if n < np.iinfo(np.int16).max else np.int32


def bfs_distances(graph: PlanarGraph, sources: Sequence[int], threads: int = 1) -> np.ndarray:
    """Hop distances, shape ``(len(sources), n)``."""
    sources = np.asarray(sources, dtype=np.int64)
    dtype = _dist_dtype(graph.n)
    out = np.empty((len(sources), graph.n), dtype=dtype)
    adj = graph.adjacency
    step = 64
    blocks = [(lo, sources[lo:lo + step]) for lo in range(0, len(sources), step)]

    def run(block):
        lo, src = block
        d = shortest_path(adj, method="D", directed=False, unweighted=True, indices=src)
        out[lo:lo + len(src)] = d.astype(dtype)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, blocks))
    else:
        for b in blocks:
            run(b)
    return out


@dataclass(frozen=True, eq=False)
class DistanceField:
    """``dist[i][v]`` = hop count from the i-th source to ``v``."""

    graph: PlanarGraph
    sources: tuple[int, ...]
    dist: np.ndarray
    subdivided: bool = False

    def __getitem__(self, i):
        return self.dist[i]


def all_source_bfs(inst: OSInstance | SubdividedInstance, threads: int = 1) -> DistanceField:
    """One BFS per source-face vertex (``S`` or ``S'``)."""
    if isinstance(inst, SubdividedInstance):
        g, sources, sub = inst.graph, inst.sources, True
    else:
        g, sources, sub = inst.graph, inst.S, False
    return DistanceField(g, tuple(sources), bfs_distances(g, sources, threads), sub)


# ---------------------------------------------------------------------------
# pattern matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pattern:
    entries: tuple[int, ...]
    mode: str

    def __len__(self):
        return len(self.entries)

    def to_ternary(self) -> Pattern:
        if self.mode == TERNARY:
            return self
        e = self.entries
        return Pattern(tuple((e[2 * i] + e[2 * i + 1]) // 2 for i in range(len(e) // 2)), TERNARY)


@dataclass(frozen=True, eq=False)
class PatternMatrix:
    """Bit-packed patterns, one row per vertex."""

    mode: str
    length: int
    packed: np.ndarray

    def __len__(self) -> int:
        return self.packed.shape[0]

    @property
    def bits_per_entry(self) -> int:
        return 1 if self.mode == BINARY else 2

    def dense(self, rows=None) -> np.ndarray:
        """``int8`` matrix of entries (values in {-1, 0, 1})."""
        p = self.packed if rows is None else self.packed[rows]
        if self.mode == BINARY:
            bits = np.unpackbits(p, axis=-1, count=self.length)
            return bits.astype(np.int8) * 2 - 1
        bits = np.unpackbits(p, axis=-1, count=2 * self.length).astype(np.int8)
        return bits[..., 0::2] * 2 + bits[..., 1::2] - 1

    def bits(self, rows=None) -> np.ndarray:
        if self.mode != BINARY:
            raise ModeMismatch("bit view exists only for binary patterns")
        p = self.packed if rows is None else self.packed[rows]
        return np.unpackbits(p, axis=-1, count=self.length)

    def pattern(self, v: int) -> Pattern:
        return Pattern(tuple(int(x) for x in self.dense(v)), self.mode)

    def row_bytes(self, v: int) -> bytes:
        return self.packed[v].tobytes()

    @property
    def nbytes(self) -> int:
        return self.packed.nbytes


def pack_dense(entries: np.ndarray, mode: str) -> PatternMatrix:
    entries = np.asarray(entries)
    if entries.ndim == 1:
        entries = entries[None, :]
    length = entries.shape[1]
    if mode == BINARY:
        if entries.size and not np.all(np.abs(entries) == 1):
            raise ValueError("binary patterns must have entries in {-1, +1}")
        return PatternMatrix(BINARY, length, np.packbits(entries > 0, axis=1))
    if entries.size and np.any(np.abs(entries) > 1):
        raise ValueError("ternary patterns must have entries in {-1, 0, 1}")
    code = (entries + 1).astype(np.uint8)
    two = np.empty((entries.shape[0], 2 * length), dtype=np.uint8)
    two[:, 0::2] = code >> 1
    two[:, 1::2] = code & 1
    return PatternMatrix(TERNARY, length, np.packbits(two, axis=1))


def compute_patterns(field: DistanceField, mode: str) -> PatternMatrix:
    """Consecutive differences of the distance field, per vertex."""
    if mode == BINARY and not field.subdivided:
        raise ModeMismatch("binary patterns need the distance field of the subdivided instance")
    if mode == TERNARY and field.subdivided:
        raise ModeMismatch("ternary patterns are defined on the base (unsubdivided) instance")
    if mode not in (BINARY, TERNARY):
        raise ValueError(f"unknown mode {mode!r}")
    D = field.dist
    n = D.shape[1]
    rows = []
    for lo in range(0, n, _CHUNK):
        block = D[:, lo:lo + _CHUNK].astype(np.int32)
        diff = (block[1:] - block[:-1]).T
        rows.append(pack_dense(diff, mode).packed)
    packed = np.concatenate(rows) if rows else np.zeros((0, 0), np.uint8)
    return PatternMatrix(mode, D.shape[0] - 1, packed)


def _binary_bits_from_base(M: np.ndarray) -> np.ndarray:
    """Binary pattern bits of vertices whose (half-shifted) base distances to
    ``s_1..s_k`` are the columns of ``M`` (shape ``(k, c)``)."""
    k, c = M.shape
    nxt = np.roll(M, -1, axis=0)
    out = np.empty((c, 2 * k - 1), dtype=bool)
    out[:, 0::2] = (nxt >= M).T
    out[:, 1::2] = (nxt[:-1] > M[:-1]).T
    return out


def lift_binary_patterns(base_field: DistanceField, sub: SubdividedInstance) -> PatternMatrix:
    """Binary patterns of every subdivided vertex computed from base distances.

    For a base vertex ``u`` with distances ``D_i = d(u, s_i)``:
    ``d'(u, s_i) = 2 D_i`` and ``d'(u, w_i) = 1 + 2 min(D_i, D_{i+1})``.  A
    midpoint of ``{a, b}`` behaves like a vertex with ``min(D(a), D(b)) + 1/2``,
    except on the face midpoint ``w_j`` itself where the distance is 0.
    """
    if base_field.subdivided:
        raise ModeMismatch("lift_binary_patterns expects the base distance field")
    base = sub.base
    D = base_field.dist
    k = base.k
    n = base.n
    edges = base.graph.edges
    L = 2 * k - 1
    nbytes = (L + 7) // 8
    packed = np.empty((n + len(edges), nbytes), dtype=np.uint8)
    for lo in range(0, n, _CHUNK):
        hi = min(n, lo + _CHUNK)
        packed[lo:hi] = np.packbits(_binary_bits_from_base(D[:, lo:hi]), axis=1)
    for lo in range(0, len(edges), _CHUNK):
        e = edges[lo:lo + _CHUNK]
        M = np.minimum(D[:, e[:, 0]], D[:, e[:, 1]])
        packed[n + lo:n + lo + len(e)] = np.packbits(_binary_bits_from_base(M), axis=1)
    # face midpoints: d(w_j, w_j) = 0 flips the two entries around w_j
    for j in range(k):
        w = sub.sources[2 * j + 1]
        bits = np.unpackbits(packed[w], count=L)
        bits[2 * j] = 0
        if 2 * j + 1 < L:
            bits[2 * j + 1] = 1
        packed[w] = np.packbits(bits)
    return PatternMatrix(BINARY, L, packed)


def ternary_from_binary(binary: PatternMatrix, rows=None) -> np.ndarray:
    """``p[i] = (p^[2i-1] + p^[2i]) / 2`` on dense rows."""
    d = binary.dense(rows).astype(np.int16)
    return ((d[..., 0:-1:2] + d[..., 1::2]) // 2).astype(np.int8)


def reconstruct_distance(base: int, p: Pattern, i: int) -> int:
    """``d(v, s_i)`` from ``d(v, s_1)`` and the pattern of ``v`` (``i`` is 1-based)."""
    if p.mode == TERNARY:
        k = len(p) + 1
        if not 1 <= i <= k:
            raise IndexOutOfRange(f"source index {i} outside 1..{k}")
        return base + sum(p.entries[: i - 1])
    k = (len(p) + 1) // 2
    if not 1 <= i <= k:
        raise IndexOutOfRange(f"source index {i} outside 1..{k}")
    return base + sum(p.entries[: 2 * (i - 1)]) // 2


# ---------------------------------------------------------------------------
# distinct patterns and edge labels
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PatternClasses:
    x: int
    class_of: np.ndarray
    representative: np.ndarray
    sizes: np.ndarray

    @property
    def max_class_size(self) -> int:
        return int(self.sizes.max()) if len(self.sizes) else 0


def distinct_patterns(patterns: PatternMatrix, rows=None) -> PatternClasses:
    """Exact grouping of equal pattern rows (hash, then byte comparison).

    Classes are numbered by first occurrence; the representative of a class
    is its smallest row index."""
    idx = np.arange(len(patterns)) if rows is None else np.asarray(rows)
    table: dict[bytes, int] = {}
    class_of = np.empty(len(idx), dtype=np.int64)
    reps = []
    packed = patterns.packed
    for pos, v in enumerate(idx.tolist()):
        key = packed[v].tobytes()
        c = table.get(key)
        if c is None:
            c = table[key] = len(reps)
            reps.append(v)
        class_of[pos] = c
    sizes = np.bincount(class_of, minlength=len(reps)) if len(reps) else np.zeros(0, np.int64)
    return PatternClasses(len(reps), class_of, np.asarray(reps, dtype=np.int64), sizes)


def hamming_across(patterns: PatternMatrix, pairs: np.ndarray) -> np.ndarray:
    """Number of differing entries between the rows of each ``(u, v)`` pair."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    out = np.empty(len(pairs), dtype=np.int64)
    for lo in range(0, len(pairs), _CHUNK * 4):
        p = pairs[lo:lo + _CHUNK * 4]
        x = np.bitwise_xor(patterns.packed[p[:, 0]], patterns.packed[p[:, 1]])
        out[lo:lo + len(p)] = np.bitwise_count(x).sum(axis=1)
    return out


def flip_positions(patterns: PatternMatrix, pairs: np.ndarray, limit: int = 2) -> np.ndarray:
    """0-based positions where the binary patterns of each pair differ.

    Returns shape ``(len(pairs), limit)``, padded with -1.  Raises
    ``AdjacentPatternViolation`` when a pair differs in more than ``limit``
    positions."""
    if patterns.mode != BINARY:
        raise ModeMismatch("flip positions are defined on binary patterns")
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    out = np.full((len(pairs), limit), -1, dtype=np.int64)
    for lo in range(0, len(pairs), _CHUNK):
        p = pairs[lo:lo + _CHUNK]
        x = np.bitwise_xor(patterns.packed[p[:, 0]], patterns.packed[p[:, 1]])
        bits = np.unpackbits(x, axis=1, count=patterns.length)
        counts = bits.sum(axis=1)
        if counts.size and counts.max() > limit:
            bad = int(np.argmax(counts))
            u, v = p[bad]
            raise AdjacentPatternViolation(
                f"patterns of {u} and {v} differ in {int(counts[bad])} > {limit} positions")
        r, c = np.nonzero(bits)
        rank = np.zeros(len(r), dtype=np.int64)
        if len(r):
            first = np.r_[True, r[1:] != r[:-1]]
            starts = np.flatnonzero(first)
            rank = np.arange(len(r)) - np.repeat(starts, np.diff(np.r_[starts, len(r)]))
        out[lo + r, rank] = c
    return out


def bit_at(patterns: PatternMatrix, rows: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Bit (1 = +1) of ``rows[t]`` at 0-based ``positions[t]``."""
    rows = np.asarray(rows)
    positions = np.asarray(positions)
    byte = patterns.packed[rows, positions >> 3]
    return (byte >> (7 - (positions & 7))) & 1
