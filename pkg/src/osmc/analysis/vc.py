"""Shattering checks on binary pattern matrices.

A column set ``C`` is shattered when the rows restricted to ``C`` realize all
``2^|C|`` sign vectors.  Row codes put the first column of ``C`` in the most
significant bit, so the forbidden pair ``(-1,1,-1,1)`` / ``(1,-1,1,-1)`` is
the code pair 5 / 10.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from osmc.distances import PatternMatrix
from osmc.errors import BudgetExceeded

DEFAULT_BUDGET = 2 * 10**9  # row-column-set evaluations
EXHAUSTIVE_MAX_K = 16


@dataclass(frozen=True)
class ShatterResult:
    d: int
    shattered: tuple[int, ...] | None
    forbidden: tuple[int, ...] | None
    complete: bool
    column_sets: int

    @property
    def found(self) -> bool:
        return self.shattered is not None


def _unique_bits(patterns) -> np.ndarray:
    if isinstance(patterns, PatternMatrix):
        bits = patterns.bits() if patterns.mode == "binary" else (patterns.dense() > 0)
    else:
        bits = np.asarray(patterns) > 0
    return np.unique(bits.astype(np.int64), axis=0)


def _masks(U: np.ndarray, prefix: tuple[int, ...], last: np.ndarray) -> np.ndarray:
    """Bitmask of realized codes for ``prefix + (c,)`` for every ``c`` in ``last``."""
    code = np.zeros(U.shape[0], dtype=np.int64)
    for a in prefix:
        code = code * 2 + U[:, a]
    codes = code[:, None] * 2 + U[:, last]
    return np.bitwise_or.reduce(np.left_shift(1, codes), axis=0)


def shattering_check(patterns, d: int = 4, mode: str = "auto", k: int | None = None,
                     budget: int = DEFAULT_BUDGET, samples: int = 20000, seed: int = 0) -> ShatterResult:
    """Searches for a shattered ``d``-set of columns (and, for ``d = 4``, the
    forbidden alternating pair).  ``mode`` is ``exhaustive``, ``sampled`` or
    ``auto`` (exhaustive when ``k <= 16``)."""
    if d > 5:
        raise ValueError(f"d must be at most 5 (2^d-bit masks are packed into int64), got {d}")
    U = _unique_bits(patterns)
    rows, L = U.shape
    if k is None:
        k = (L + 1) // 2
    if mode == "auto":
        mode = "exhaustive" if k <= EXHAUSTIVE_MAX_K else "sampled"
    full = (1 << (1 << d)) - 1
    shattered = forbidden = None
    if d < 1 or L < d or rows == 0:
        return ShatterResult(d, None, None, True, 0)
    if mode == "exhaustive":
        total = comb(L, d)
        if total * rows > budget:
            raise BudgetExceeded(f"{total} column sets x {rows} rows exceeds budget {budget}")
        checked = 0
        for prefix in combinations(range(L), d - 1):
            last = np.arange(prefix[-1] + 1 if prefix else 0, L)
            if len(last) == 0:
                continue
            m = _masks(U, prefix, last)
            checked += len(last)
            if shattered is None:
                hit = np.flatnonzero(m == full)
                if len(hit):
                    shattered = prefix + (int(last[hit[0]]),)
            if d == 4 and forbidden is None:
                hit = np.flatnonzero(((m >> 5) & 1) & ((m >> 10) & 1))
                if len(hit):
                    forbidden = prefix + (int(last[hit[0]]),)
            if shattered is not None and (d != 4 or forbidden is not None):
                break
        return ShatterResult(d, shattered, forbidden, True, checked)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    checked = 0
    for _ in range(samples):
        cols = tuple(sorted(rng.sample(range(L), d)))
        m = int(_masks(U, cols[:-1], np.array([cols[-1]]))[0])
        checked += 1
        if shattered is None and m == full:
            shattered = cols
        if d == 4 and forbidden is None and (m >> 5) & 1 and (m >> 10) & 1:
            forbidden = cols
    return ShatterResult(d, shattered, forbidden, False, checked)


def vc_dimension_lower_bound(patterns, max_d: int = 4, **kw) -> int:
    """Largest ``d <= max_d`` with a shattered ``d``-set found."""
    best = 0
    for d in range(1, max_d + 1):
        if shattering_check(patterns, d, **kw).found:
            best = d
        else:
            break
    return best
