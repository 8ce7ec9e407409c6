"""Karp-Rabin fingerprints of binary patterns.

A pattern with bits ``c_1..c_L`` (``-1 -> 0``, ``+1 -> 1``) has fingerprint
``sum_j c_j * b^j mod q``.  Concatenation composes in O(1):
``phi(S1 S2) = phi(S1) + b^|S1| * phi(S2)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

MERSENNE_61 = (1 << 61) - 1


def draw_base(seed: int, modulus: int = MERSENNE_61) -> int:
    return random.Random(seed).randint(2, modulus - 2)


@dataclass(frozen=True)
class Fingerprint:
    value: int
    length: int


def _bits(pattern: Sequence[int]) -> list[int]:
    """Accepts ``{-1, +1}`` entries or ``{0, 1}`` bits."""
    return [1 if e > 0 else 0 for e in pattern]


def fingerprint(pattern: Sequence[int], base: int, modulus: int = MERSENNE_61) -> Fingerprint:
    value = 0
    power = base % modulus
    for c in _bits(pattern):
        if c:
            value += power
        power = power * base % modulus
    return Fingerprint(value % modulus, len(pattern))


def compose(f1: Fingerprint, f2: Fingerprint, base: int, modulus: int = MERSENNE_61) -> Fingerprint:
    return Fingerprint((f1.value + pow(base, f1.length, modulus) * f2.value) % modulus,
                       f1.length + f2.length)


def powers(base: int, length: int, modulus: int = MERSENNE_61) -> list[int]:
    """``[b^1, ..., b^length] mod q``."""
    out = []
    p = base % modulus
    for _ in range(length):
        out.append(p)
        p = p * base % modulus
    return out


class FingerprintTree:
    """Complete binary tree over pattern positions; every node holds the
    fingerprint of its span (padding leaves are empty strings)."""

    def __init__(self, pattern: Sequence[int], base: int, modulus: int = MERSENNE_61):
        self.base = base
        self.modulus = modulus
        self.length = len(pattern)
        size = 1
        while size < max(1, self.length):
            size *= 2
        self.size = size
        self.depth = size.bit_length() - 1
        self.value = [0] * (2 * size)
        self.span = [0] * (2 * size)
        self._pow = [1] + powers(base, size, modulus)
        for j, c in enumerate(_bits(pattern)):
            self.value[size + j] = base * c % modulus
            self.span[size + j] = 1
        for node in range(size - 1, 0, -1):
            self._pull(node)

    def _pull(self, node: int) -> None:
        left, right = 2 * node, 2 * node + 1
        self.value[node] = (self.value[left] + self._pow[self.span[left]] * self.value[right]) % self.modulus
        self.span[node] = self.span[left] + self.span[right]

    @property
    def root(self) -> Fingerprint:
        return Fingerprint(self.value[1], self.length)

    def set(self, position: int, bit: int) -> int:
        """Sets the 0-based ``position``; returns the number of nodes rewritten."""
        if not 0 <= position < self.length:
            raise IndexError(position)
        node = self.size + position
        self.value[node] = self.base * (1 if bit > 0 else 0) % self.modulus
        touched = 1
        node //= 2
        while node:
            self._pull(node)
            touched += 1
            node //= 2
        return touched

    def flip(self, position: int) -> int:
        node = self.size + position
        return self.set(position, 0 if self.value[node] else 1)
