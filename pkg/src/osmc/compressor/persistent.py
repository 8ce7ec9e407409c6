"""Persistent prefix-count index over a bit string, one machine word per node.

Leaves hold 64 consecutive bits (position ``p`` is bit ``p & 63`` of leaf
``p >> 6``).  An internal node packs ``left | right << 24 | ones(left) << 48``.
The tree is complete over a power-of-two number of leaves, so a node's kind
follows from its depth.  Updates copy only the touched root-to-leaf paths;
children are always allocated before their parent, so ids strictly decrease
along every root-to-leaf path.
"""

from __future__ import annotations

from typing import Iterable

PTR_BITS = 24
PTR_MASK = (1 << PTR_BITS) - 1
MAX_NODES = 1 << PTR_BITS
MAX_LENGTH = (1 << 16) - 1
WORD_MASK = (1 << 64) - 1


class VersionedPrefixIndex:
    def __init__(self, length: int, pool: list[int] | None = None):
        if not 1 <= length <= MAX_LENGTH:
            raise ValueError(f"pattern length {length} outside 1..{MAX_LENGTH}")
        self.length = length
        self.chunks = (length + 63) >> 6
        self.levels = max(0, (self.chunks - 1).bit_length())
        self.pool: list[int] = [] if pool is None else pool

    def _alloc(self, word: int) -> int:
        if len(self.pool) >= MAX_NODES:
            raise OverflowError("node pool exceeds 24-bit pointer range")
        self.pool.append(word)
        return len(self.pool) - 1

    # -- construction ---------------------------------------------------------

    def build(self, bits: Iterable[int]) -> int:
        """Materializes a fresh tree for ``bits`` (0/1, length ``self.length``)."""
        words = [0] * (1 << self.levels)
        count = 0
        for p, b in enumerate(bits):
            if b:
                words[p >> 6] |= 1 << (p & 63)
            count += 1
        if count != self.length:
            raise ValueError(f"expected {self.length} bits, got {count}")
        nodes = [self._alloc(w) for w in words]
        ones = [w.bit_count() for w in words]
        while len(nodes) > 1:
            nxt, nxt_ones = [], []
            for t in range(0, len(nodes), 2):
                nxt.append(self._alloc(nodes[t] | nodes[t + 1] << 24 | ones[t] << 48))
                nxt_ones.append(ones[t] + ones[t + 1])
            nodes, ones = nxt, nxt_ones
        return nodes[0]

    # -- queries --------------------------------------------------------------

    def prefix_ones(self, root: int, j: int) -> int:
        """Number of set bits among positions ``0..j-1``."""
        if j <= 0:
            return 0
        pool = self.pool
        j -= 1
        c = j >> 6
        node = root
        acc = 0
        for level in range(self.levels - 1, -1, -1):
            w = pool[node]
            if (c >> level) & 1:
                acc += w >> 48
                node = (w >> 24) & PTR_MASK
            else:
                node = w & PTR_MASK
        return acc + (pool[node] & ((2 << (j & 63)) - 1)).bit_count()

    def prefix_sum(self, root: int, j: int) -> int:
        """Sum of the first ``j`` entries read as ``{-1, +1}``."""
        if not 0 <= j <= self.length:
            raise IndexError(f"prefix length {j} outside 0..{self.length}")
        return 2 * self.prefix_ones(root, j) - j

    def bits(self, root: int) -> list[int]:
        out: list[int] = []
        self._collect(root, self.levels, out)
        return out[: self.length]

    def _collect(self, node: int, level: int, out: list[int]) -> None:
        w = self.pool[node]
        if level == 0:
            out.extend((w >> b) & 1 for b in range(64))
            return
        self._collect(w & PTR_MASK, level - 1, out)
        self._collect((w >> 24) & PTR_MASK, level - 1, out)

    # -- updates --------------------------------------------------------------

    def toggle(self, root: int, positions: Iterable[int]) -> int:
        """New version with the given positions flipped.  Positions sharing a
        chunk share the copied path."""
        masks: dict[int, int] = {}
        for p in positions:
            if not 0 <= p < self.length:
                raise IndexError(f"position {p} outside 0..{self.length - 1}")
            masks[p >> 6] = masks.get(p >> 6, 0) ^ (1 << (p & 63))
        masks = {c: m for c, m in masks.items() if m}
        if not masks:
            return root
        new_root, _ = self._toggle(root, self.levels, sorted(masks.items()))
        return new_root

    def _toggle(self, node: int, level: int, items: list[tuple[int, int]]) -> tuple[int, int]:
        w = self.pool[node]
        if level == 0:
            mask = items[0][1]
            nw = w ^ mask
            return self._alloc(nw), nw.bit_count() - w.bit_count()
        half = level - 1
        left, right, left_ones = w & PTR_MASK, (w >> 24) & PTR_MASK, w >> 48
        lo = [(c, m) for c, m in items if not (c >> half) & 1]
        hi = [(c, m) for c, m in items if (c >> half) & 1]
        delta = 0
        if lo:
            left, d = self._toggle(left, half, lo)
            left_ones += d
            delta += d
        if hi:
            right, d = self._toggle(right, half, hi)
            delta += d
        return self._alloc(left | right << 24 | left_ones << 48), delta

    # -- validation -----------------------------------------------------------

    def check_version(self, root: int, memo: dict[int, tuple[int, int]] | None = None) -> None:
        """Raises ``ValueError`` on any structural inconsistency below ``root``."""
        memo = {} if memo is None else memo
        self._check(root, self.levels, memo)

    def _check(self, node: int, level: int, memo: dict[int, tuple[int, int]]) -> int:
        if not 0 <= node < len(self.pool):
            raise ValueError(f"node id {node} outside pool of {len(self.pool)}")
        seen = memo.get(node)
        if seen is not None:
            if seen[0] != level:
                raise ValueError(f"node {node} reached at two depths")
            return seen[1]
        w = self.pool[node]
        if not 0 <= w <= WORD_MASK:
            raise ValueError(f"node {node} is not a 64-bit word")
        if level == 0:
            ones = w.bit_count()
        else:
            left, right = w & PTR_MASK, (w >> 24) & PTR_MASK
            if left >= node or right >= node:
                raise ValueError(f"node {node} points forward")
            lo = self._check(left, level - 1, memo)
            if lo != w >> 48:
                raise ValueError(f"node {node} stores {w >> 48} ones on the left, subtree has {lo}")
            ones = lo + self._check(right, level - 1, memo)
        memo[node] = (level, ones)
        return ones
