"""Embedded planar graphs (rotation systems), duals, faces and subdivision.

Vertices are dense integers ``0..n-1``.  Every undirected edge ``e`` owns the
two darts ``2e`` and ``2e + 1``; reversal is ``a ^ 1``.  ``rotation[v]`` lists
the darts leaving ``v`` in counterclockwise order.  Faces are traced with
``next(a) = rot_next[a ^ 1]`` which keeps the traced face on the right-hand
side of every dart, so ``face_of[a]`` is the face to the right of ``a``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from osmc.errors import (
    BadTerminal,
    Disconnected,
    InconsistentRotation,
    InstanceError,
    NonPlanarRotation,
    NotSimple,
    SNotFullFace,
    TooFewSources,
)


@dataclass(frozen=True, eq=False)
class PlanarGraph:
    n: int
    tail: np.ndarray
    rotation: tuple[tuple[int, ...], ...]
    rot_next: np.ndarray
    face_of: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    f_inf: int | None = None

    @property
    def m(self) -> int:
        return len(self.tail) // 2

    @property
    def num_darts(self) -> int:
        return len(self.tail)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @cached_property
    def head(self) -> np.ndarray:
        return self.tail[np.arange(len(self.tail)) ^ 1]

    @cached_property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edge endpoints, row ``e`` = dart ``2e``."""
        return np.stack([self.tail[0::2], self.tail[1::2]], axis=1)

    @cached_property
    def _dart_index(self) -> dict[tuple[int, int], int]:
        t = self.tail.tolist()
        h = self.head.tolist()
        return {(t[a], h[a]): a for a in range(len(t))}

    def dart(self, u: int, v: int) -> int:
        try:
            return self._dart_index[(u, v)]
        except KeyError:
            raise KeyError(f"no edge {u}-{v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._dart_index

    def neighbors(self, v: int) -> list[int]:
        return [int(self.tail[a ^ 1]) for a in self.rotation[v]]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def face_vertices(self, f: int) -> list[int]:
        return [int(self.tail[a]) for a in self.faces[f]]

    @cached_property
    def adjacency(self) -> csr_matrix:
        e = self.edges
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def neighbor_lists(self) -> list[list[int]]:
        return [self.neighbors(v) for v in range(self.n)]

    def rotations_as_vertices(self) -> list[list[int]]:
        """Rotation system in the ``.osg`` form (neighbor ids, ccw)."""
        return self.neighbor_lists

    def mirrored(self) -> PlanarGraph:
        """Same abstract graph with every rotation reversed (mirror image)."""
        rotation = tuple(tuple(reversed(r)) for r in self.rotation)
        return _assemble(self.n, self.tail, rotation)


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def _rotation_problems(n: int, rotations: Sequence[Sequence[int]]) -> list[InstanceError]:
    problems: list[InstanceError] = []
    if len(rotations) != n:
        problems.append(InconsistentRotation(f"expected {n} rotations, got {len(rotations)}"))
        return problems
    nbr_sets = []
    for v, rot in enumerate(rotations):
        seen = set()
        for u in rot:
            if not isinstance(u, (int, np.integer)) or not 0 <= u < n:
                problems.append(InconsistentRotation(f"rotation of {v} lists invalid vertex {u!r}"))
                continue
            if u == v:
                problems.append(NotSimple(f"self-loop at vertex {v}"))
            elif u in seen:
                problems.append(NotSimple(f"parallel edge {v}-{u}"))
            seen.add(int(u))
        nbr_sets.append(seen)
    if problems:
        return problems
    for v, nbrs in enumerate(nbr_sets):
        for u in nbrs:
            if v not in nbr_sets[u]:
                problems.append(
                    InconsistentRotation(f"rotation of {v} lists {u} but rotation of {u} omits {v}")
                )
    return problems


def _components(n: int, nbrs: Sequence[Iterable[int]]) -> list[list[int]]:
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] != -1:
            continue
        cid = len(out)
        comp[s] = cid
        members = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in nbrs[v]:
                if comp[u] == -1:
                    comp[u] = cid
                    members.append(u)
                    queue.append(u)
        out.append(members)
    return out


def _assemble(n: int, tail: np.ndarray, rotation: tuple[tuple[int, ...], ...]) -> PlanarGraph:
    nd = len(tail)
    rot_next = np.empty(nd, dtype=np.int64)
    for darts in rotation:
        d = len(darts)
        for idx, a in enumerate(darts):
            rot_next[a] = darts[(idx + 1) % d]
    face_of = np.full(nd, -1, dtype=np.int64)
    faces = []
    nxt = rot_next[np.arange(nd) ^ 1].tolist()
    fo = face_of
    for start in range(nd):
        if fo[start] != -1:
            continue
        fid = len(faces)
        cycle = []
        a = start
        while fo[a] == -1:
            fo[a] = fid
            cycle.append(a)
            a = nxt[a]
        faces.append(tuple(cycle))
    if nd == 0:
        faces.append(())
    return PlanarGraph(n=n, tail=tail, rotation=rotation, rot_next=rot_next, face_of=face_of,
                       faces=tuple(faces))


def _embedding_problems(n: int, rotations: Sequence[Sequence[int]]):
    """Returns ``(graph_or_None, problems)``."""
    problems = _rotation_problems(n, rotations)
    if problems:
        return None, problems
    dart_of: dict[tuple[int, int], int] = {}
    tails: list[int] = []
    for u in range(n):
        for v in rotations[u]:
            v = int(v)
            if u < v:
                dart_of[(u, v)] = len(tails)
                dart_of[(v, u)] = len(tails) + 1
                tails.extend((u, v))
    rotation = tuple(tuple(dart_of[(u, int(v))] for v in rotations[u]) for u in range(n))
    comps = _components(n, [[int(v) for v in r] for r in rotations])
    if len(comps) > 1:
        sizes = sorted(len(c) for c in comps)
        problems.append(Disconnected(
            f"graph has {len(comps)} components (sizes {sizes}); vertex {comps[1][0]} unreachable from 0"))
        return None, problems
    g = _assemble(n, np.asarray(tails, dtype=np.int64), rotation)
    euler = g.n - g.m + g.num_faces
    if euler != 2:
        problems.append(NonPlanarRotation(
            f"rotation system traces {g.num_faces} faces; n - m + f = {euler} != 2"))
        return None, problems
    return g, problems


def build_embedding(n: int, rotations: Sequence[Sequence[int]]) -> PlanarGraph:
    """Build a planar graph from per-vertex ccw neighbor cycles.

    Raises ``InconsistentRotation``, ``NotSimple``, ``Disconnected`` or
    ``NonPlanarRotation`` (Euler's formula fails for the traced faces).
    """
    g, problems = _embedding_problems(n, rotations)
    if problems:
        raise problems[0]
    return g


# ---------------------------------------------------------------------------
# dual graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DualGraph:
    """Dual of an embedded graph.  Dual dart ids equal primal dart ids:
    dual dart ``a`` is ``(uv)*`` for primal ``a = uv``; it runs from the face
    right of ``uv`` to the face left of ``uv``."""

    primal: PlanarGraph
    tail: np.ndarray
    head: np.ndarray
    rotation: tuple[tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return self.primal.num_faces

    def primal_of(self, d: int) -> int:
        return d

    def degree(self, f: int) -> int:
        return len(self.rotation[f])

    @cached_property
    def face_of(self) -> np.ndarray:
        """Face (of the dual embedding) to the right of every dual dart."""
        nd = len(self.tail)
        rot_next = np.empty(nd, dtype=np.int64)
        for darts in self.rotation:
            for idx, a in enumerate(darts):
                rot_next[a] = darts[(idx + 1) % len(darts)]
        out = np.full(nd, -1, dtype=np.int64)
        nxt = rot_next[np.arange(nd) ^ 1]
        fid = 0
        for start in range(nd):
            if out[start] != -1:
                continue
            a = start
            while out[a] == -1:
                out[a] = fid
                a = nxt[a]
            fid += 1
        return out


def build_dual(g: PlanarGraph) -> DualGraph:
    darts = np.arange(g.num_darts)
    # faces are traced clockwise, so the ccw order of dual darts is reversed
    rotation = tuple(tuple(reversed(f)) for f in g.faces)
    return DualGraph(primal=g, tail=g.face_of.copy(), head=g.face_of[darts ^ 1], rotation=rotation)


# ---------------------------------------------------------------------------
# Okamura-Seymour instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OSInstance:
    graph: PlanarGraph
    S: tuple[int, ...]
    T: tuple[int, ...]
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.S)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def f_inf(self) -> int:
        return self.graph.f_inf


def _face_problems(g: PlanarGraph, S: Sequence[int]):
    """Returns ``(oriented_graph_or_None, problems)``.

    The canonical orientation has the outer face to the right of every dart
    ``s_{i+1} -> s_i``.  When ``S`` runs the other way the embedding is
    mirrored, which keeps vertex and source numbering intact."""
    k = len(S)
    problems: list[InstanceError] = []
    if k < 3:
        return None, [TooFewSources(f"need k >= 3 source vertices, got {k}")]
    bad = [s for s in S if not (isinstance(s, (int, np.integer)) and 0 <= s < g.n)]
    if bad:
        return None, [SNotFullFace(f"outer face lists invalid vertices {bad}")]
    if len(set(S)) != k:
        return None, [SNotFullFace("outer face repeats a vertex")]
    for i in range(k):
        a, b = S[i], S[(i + 1) % k]
        if not g.has_edge(a, b):
            problems.append(SNotFullFace(
                f"consecutive outer-face vertices s_{i + 1}={a} and s_{(i + 1) % k + 1}={b} are not adjacent"))
    if problems:
        return None, problems

    def matching_face(graph: PlanarGraph, backward: bool):
        faces = set()
        for i in range(k):
            a, b = S[i], S[(i + 1) % k]
            faces.add(int(graph.face_of[graph.dart(b, a) if backward else graph.dart(a, b)]))
        if len(faces) == 1:
            f = faces.pop()
            if len(graph.faces[f]) == k:
                return f
        return None

    f = matching_face(g, backward=True)
    if f is not None:
        return _with_f_inf(g, f), []
    f = matching_face(g, backward=False)
    if f is not None:
        mg = g.mirrored()
        f = matching_face(mg, backward=True)
        return _with_f_inf(mg, f), []
    return None, [SNotFullFace(
        f"S (k={k}) is not the complete vertex sequence of a single face")]


def _with_f_inf(g: PlanarGraph, f: int) -> PlanarGraph:
    return PlanarGraph(n=g.n, tail=g.tail, rotation=g.rotation, rot_next=g.rot_next,
                       face_of=g.face_of, faces=g.faces, f_inf=f)


def _terminal_problems(n: int, T: Iterable[int]) -> list[InstanceError]:
    bad = [t for t in T if not (isinstance(t, (int, np.integer)) and 0 <= t < n)]
    return [BadTerminal(f"terminals outside 0..{n - 1}: {bad[:10]}")] if bad else []


def build_instance(graph: PlanarGraph, S: Sequence[int], T: Iterable[int] = (),
                   name: str = "", meta: dict | None = None) -> OSInstance:
    S = [int(s) for s in S]
    T = list(T)
    oriented, problems = _face_problems(graph, S)
    problems += _terminal_problems(graph.n, T)
    if problems:
        raise problems[0]
    return OSInstance(graph=oriented, S=tuple(S), T=tuple(sorted({int(t) for t in T})),
                      name=name, meta=dict(meta or {}))


@dataclass
class ValidationReport:
    problems: list[InstanceError]
    instance: OSInstance | None = None

    @property
    def ok(self) -> bool:
        return not self.problems

    def raise_first(self) -> None:
        if self.problems:
            raise self.problems[0]

    def lines(self) -> list[str]:
        return [f"{type(p).__name__}: {p}" for p in self.problems]


def validate_instance(n: int, rotations: Sequence[Sequence[int]], outer_face: Sequence[int],
                      terminals: Iterable[int] = (), name: str = "") -> ValidationReport:
    """Check every instance invariant, collecting all problems found."""
    terminals = list(terminals)
    g, problems = _embedding_problems(n, rotations)
    problems = list(problems) + _terminal_problems(n, terminals)
    if g is None:
        if len(outer_face) < 3:
            problems.append(TooFewSources(f"need k >= 3 source vertices, got {len(outer_face)}"))
        return ValidationReport(problems)
    oriented, face_problems = _face_problems(g, list(outer_face))
    problems += face_problems
    if problems:
        return ValidationReport(problems)
    inst = OSInstance(graph=oriented, S=tuple(int(s) for s in outer_face),
                      T=tuple(sorted({int(t) for t in terminals})), name=name)
    return ValidationReport([], inst)


def instance_from_rotations(n: int, rotations, outer_face, terminals=(), name: str = "",
                            meta: dict | None = None) -> OSInstance:
    report = validate_instance(n, rotations, outer_face, terminals, name=name)
    report.raise_first()
    inst = report.instance
    if meta:
        inst.meta.update(meta)
    return inst


# ---------------------------------------------------------------------------
# subdivision
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SubdividedInstance:
    """Every edge ``e = {a, b}`` of the base graph becomes ``a - w - b`` with
    the fresh midpoint ``w = n + e``.  ``instance.S`` interleaves
    ``s_1, w_1, ..., s_k, w_k`` where ``w_i`` splits ``{s_i, s_{i+1}}``."""

    base: OSInstance
    instance: OSInstance

    @property
    def graph(self) -> PlanarGraph:
        return self.instance.graph

    @property
    def sources(self) -> tuple[int, ...]:
        return self.instance.S

    @property
    def n_base(self) -> int:
        return self.base.n

    def midpoint(self, u: int, v: int) -> int:
        return self.n_base + (self.base.graph.dart(u, v) >> 1)

    def is_midpoint(self, v: int) -> bool:
        return v >= self.n_base

    def edge_of_midpoint(self, w: int) -> tuple[int, int]:
        e = w - self.n_base
        a, b = self.base.graph.edges[e]
        return int(a), int(b)


def subdivide(inst: OSInstance) -> SubdividedInstance:
    g = inst.graph
    n = g.n
    rotations: list[list[int]] = [[n + (a >> 1) for a in g.rotation[v]] for v in range(n)]
    for e, (a, b) in enumerate(g.edges.tolist()):
        rotations.append([a, b])
    sub_graph = build_embedding(n + g.m, rotations)
    k = inst.k
    s_prime = []
    for i in range(k):
        s_prime.append(inst.S[i])
        s_prime.append(n + (g.dart(inst.S[i], inst.S[(i + 1) % k]) >> 1))
    sub_inst = build_instance(sub_graph, s_prime, inst.T, name=inst.name + "'" if inst.name else "")
    return SubdividedInstance(base=inst, instance=sub_inst)
