"""Cuts, bisector dual cycles and their pairwise crossings.

Cut ``i`` (1-based, ``1 <= i <= 2k-1``) collects the subdivided vertices whose
binary pattern has ``-1`` at entry ``i``, i.e. the vertices strictly closer to
``s'_{i+1}`` than to ``s'_i``.  Its bisector is the set of boundary darts
``u -> v`` with ``u`` inside and ``v`` outside, read as dual darts and ordered
into a cycle that starts at the dual of ``s'_{i+1} -> s'_i`` (which leaves the
outer face).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.sparse.csgraph import connected_components

from osmc.distances import BINARY, PatternMatrix
from osmc.errors import DisconnectedCutSide, InvariantViolation, ModeMismatch, NotASimpleCycle
from osmc.planar import PlanarGraph, SubdividedInstance


@dataclass(frozen=True, eq=False)
class Cut:
    index: int
    members: np.ndarray  # bool per subdivided vertex

    @property
    def size(self) -> int:
        return int(self.members.sum())


def cut_column(patterns: PatternMatrix, i: int) -> np.ndarray:
    """Membership of cut ``i``: True where entry ``i`` of the pattern is -1."""
    c = i - 1
    return ((patterns.packed[:, c >> 3] >> (7 - (c & 7))) & 1) == 0


def _side_connected(graph: PlanarGraph, mask: np.ndarray) -> bool:
    idx = np.flatnonzero(mask)
    if len(idx) <= 1:
        return True
    sub = graph.adjacency[idx][:, idx]
    ncomp, _ = connected_components(sub, directed=False)
    return ncomp == 1


def make_cut(sub: SubdividedInstance, patterns: PatternMatrix, i: int, check: bool = True) -> Cut:
    if patterns.mode != BINARY:
        raise ModeMismatch("cuts are defined on binary patterns")
    L = patterns.length
    if not 1 <= i <= L:
        raise IndexError(f"cut index {i} outside 1..{L}")
    members = cut_column(patterns, i)
    if check:
        S = sub.sources
        inside, outside = S[i % len(S)], S[i - 1]
        if not members[inside] or members[outside]:
            raise InvariantViolation(
                f"cut {i}: expected s'_{i + 1}={inside} inside and s'_{i}={outside} outside")
        for label, mask in (("inside", members), ("outside", ~members)):
            if not _side_connected(sub.graph, mask):
                raise DisconnectedCutSide(f"cut {i}: {label} side induces a disconnected subgraph")
    return Cut(i, members)


def compute_cuts(sub: SubdividedInstance, patterns: PatternMatrix, check: bool = True) -> list[Cut]:
    return [make_cut(sub, patterns, i, check) for i in range(1, patterns.length + 1)]


@dataclass(frozen=True, eq=False)
class Bisector:
    """Directed dual cycle.  ``darts[p]`` leaves face ``faces[p]`` and enters
    ``faces[p + 1]`` (cyclically); ``faces[0]`` is the outer face."""

    index: int
    darts: np.ndarray
    faces: np.ndarray
    members: np.ndarray
    face_pos: dict = field(repr=False)
    dart_set: frozenset = field(repr=False)

    def __len__(self) -> int:
        return len(self.darts)


def extract_bisector(sub: SubdividedInstance, cut: Cut) -> Bisector:
    g = sub.graph
    inside = cut.members
    tail, head = g.tail, g.head
    boundary = np.flatnonzero(inside[tail] & ~inside[head])
    out_of: dict[int, int] = {}
    for a in boundary.tolist():
        f = int(g.face_of[a])
        if f in out_of:
            raise NotASimpleCycle(f"bisector {cut.index}: face {f} is left twice (darts {out_of[f]}, {a})")
        out_of[f] = a
    S = sub.sources
    i = cut.index
    start = g.dart(S[i % len(S)], S[i - 1])
    if int(g.face_of[start]) != g.f_inf:
        raise NotASimpleCycle(f"bisector {i}: first dart does not leave the outer face")
    order = [start]
    face_of = g.face_of
    a = start
    while True:
        f_next = int(face_of[a ^ 1])
        a = out_of.get(f_next)
        if a is None:
            raise NotASimpleCycle(f"bisector {i}: walk stops at face {f_next}")
        if a == start:
            break
        order.append(a)
        if len(order) > len(boundary):
            raise NotASimpleCycle(f"bisector {i}: walk does not close")
    if len(order) != len(boundary):
        raise NotASimpleCycle(
            f"bisector {i}: cycle through the outer face has {len(order)} of {len(boundary)} boundary darts")
    darts = np.asarray(order, dtype=np.int64)
    faces = face_of[darts]
    return Bisector(index=i, darts=darts, faces=faces, members=inside,
                    face_pos={int(f): p for p, f in enumerate(faces.tolist())},
                    dart_set=frozenset(order))


def extract_bisectors(sub: SubdividedInstance, patterns: PatternMatrix, check: bool = True) -> list[Bisector]:
    return [extract_bisector(sub, c) for c in compute_cuts(sub, patterns, check)]


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

def arc_conflicts(bisectors: list[Bisector], num_darts: int) -> list[tuple[int, int, int]]:
    """``(dart, i, j)`` for every dart claimed by two bisectors."""
    owner = np.full(num_darts, -1, dtype=np.int64)
    out = []
    for b in bisectors:
        prev = owner[b.darts]
        for a, o in zip(b.darts[prev >= 0].tolist(), prev[prev >= 0].tolist()):
            out.append((a, o, b.index))
        owner[b.darts] = b.index
    return out


def face_incidences(b: Bisector, graph: PlanarGraph) -> Counter:
    """Number of bisector darts incident to each face (as tail or head)."""
    c = Counter(b.faces.tolist())
    c.update(graph.face_of[b.darts ^ 1].tolist())
    return c


# ---------------------------------------------------------------------------
# crossings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingPart:
    """Maximal common subpath.  Along ``beta_i`` it covers positions
    ``start_i .. start_i + length - 1``; along ``beta_j`` it runs backwards and
    covers ``start_j .. start_j + length - 1`` (positions mod cycle length)."""

    start_i: int
    start_j: int
    length: int
    crossing: bool
    at_infinity: bool


@dataclass(frozen=True)
class CrossingReport:
    i: int
    j: int
    parts: tuple[CrossingPart, ...]

    @property
    def inner_parts(self) -> list[CrossingPart]:
        return [p for p in self.parts if not p.at_infinity]

    @property
    def crossings(self) -> list[CrossingPart]:
        """Crossing parts away from the outer face, ordered along ``beta_i``."""
        return [p for p in self.parts if p.crossing and not p.at_infinity]

    @property
    def r(self) -> int:
        return len(self.crossings)

    @property
    def total_crossings(self) -> int:
        """All crossing parts, including one at the outer face."""
        return sum(p.crossing for p in self.parts)


def _side(b: Bisector, graph: PlanarGraph, dart: int) -> bool:
    u, v = int(graph.tail[dart]), int(graph.tail[dart ^ 1])
    su, sv = bool(b.members[u]), bool(b.members[v])
    if su != sv:
        raise InvariantViolation(
            f"dart {u}->{v} next to a common part crosses cut {b.index} but is not shared")
    return su


def enumerate_crossings(bi: Bisector, bj: Bisector, graph: PlanarGraph) -> CrossingReport:
    """Maximal common subpaths of two bisectors, classified cross/touch."""
    if bi.index == bj.index:
        raise ValueError("crossings are defined for two distinct bisectors")
    li, lj = len(bi), len(bj)
    fi = bi.faces.tolist()
    di = bi.darts.tolist()
    shared = [bj.face_pos.get(f, -1) >= 0 for f in fi]
    # link[p]: faces at p and p+1 are joined by a dart of beta_i whose reverse is on beta_j
    link = [shared[p] and shared[(p + 1) % li] and (di[p] ^ 1) in bj.dart_set for p in range(li)]
    if all(link):
        q = bj.face_pos[fi[li - 1]]
        return CrossingReport(bi.index, bj.index, (CrossingPart(0, q, li, False, True),))
    # start scanning right after a position that does not link forward
    first = next(p for p in range(li) if not link[p])
    parts = []
    p = (first + 1) % li
    for _ in range(li):
        if shared[p]:
            start = p
            length = 1
            while link[p]:
                p = (p + 1) % li
                length += 1
            end_face = fi[p]
            q = bj.face_pos[end_face]
            before = int(bj.darts[(q - 1) % lj])
            after = int(bj.darts[(q + length - 1) % lj])
            crossing = _side(bi, graph, before) != _side(bi, graph, after)
            at_inf = start + length > li or start == 0
            parts.append(CrossingPart(start, q, length, crossing, at_inf))
        if p == first:
            break
        p = (p + 1) % li
    parts.sort(key=lambda c: c.start_i)
    return CrossingReport(bi.index, bj.index, tuple(parts))


def verify_crossing_order(report: CrossingReport) -> bool:
    """Crossing parts appear along ``beta_j`` in reverse of their order along ``beta_i``."""
    qs = [p.start_j for p in sorted(report.crossings, key=lambda c: c.start_i)]
    return all(a > b for a, b in zip(qs, qs[1:]))


def enumerate_all_crossings(bisectors: list[Bisector], graph: PlanarGraph) -> list[CrossingReport]:
    return [enumerate_crossings(a, b, graph) for a, b in combinations(bisectors, 2)]


@dataclass(frozen=True)
class CrossingTotals:
    t: int
    max_r: int
    histogram: dict
    pairs: int
    odd_parity: tuple
    order_failures: tuple


def crossing_totals(reports: list[CrossingReport]) -> CrossingTotals:
    hist: Counter = Counter()
    odd = []
    bad_order = []
    t = 0
    for rep in reports:
        r = rep.r
        t += r
        hist[r] += 1
        if rep.total_crossings % 2:
            odd.append((rep.i, rep.j))
        if not verify_crossing_order(rep):
            bad_order.append((rep.i, rep.j))
    return CrossingTotals(t=t, max_r=max(hist) if hist else 0, histogram=dict(sorted(hist.items())),
                          pairs=len(reports), odd_parity=tuple(odd), order_failures=tuple(bad_order))
