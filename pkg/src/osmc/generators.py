"""Seeded instance factories.

All factories are deterministic functions of their arguments; randomness
comes from ``random.Random(seed)`` only.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

from osmc.errors import OddK
from osmc.planar import OSInstance, instance_from_rotations

TERMINAL_POLICIES = ("all", "boundary", "random", "blob", "none")
FAMILIES = ("cycle", "grid", "random_planar", "halin", "shalin_lower")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict = field(default_factory=dict)
    terminals: str = "all"
    fraction: float = 0.25
    seed: int = 0

    @property
    def instance_id(self) -> str:
        p = "-".join(f"{k}{v}" for k, v in sorted(self.params.items()))
        return f"{self.family}-{p}-{self.terminals}-s{self.seed}"


def _rotations_from_coords(coords: list[tuple[float, float]], adj: list[list[int]]) -> list[list[int]]:
    rot = []
    for v, nbrs in enumerate(adj):
        x0, y0 = coords[v]
        rot.append(sorted(nbrs, key=lambda u: math.atan2(coords[u][1] - y0, coords[u][0] - x0)))
    return rot


def _pick_terminals(n: int, S: list[int], adj: list[list[int]], policy: str, fraction: float,
                    rng: random.Random) -> list[int]:
    if policy == "all":
        return list(range(n))
    if policy == "none":
        return []
    if policy == "boundary":
        return list(S)
    size = max(1, min(n, round(fraction * n)))
    if policy == "random":
        return sorted(rng.sample(range(n), size))
    if policy == "blob":
        start = rng.randrange(n)
        seen = {start}
        frontier = [start]
        order = [start]
        while frontier and len(order) < size:
            v = frontier.pop(rng.randrange(len(frontier)))
            nbrs = list(adj[v])
            rng.shuffle(nbrs)
            for u in nbrs:
                if u not in seen and len(order) < size:
                    seen.add(u)
                    order.append(u)
                    frontier.append(u)
        return sorted(order)
    raise ValueError(f"unknown terminal policy {policy!r}")


def _finish(n, rotations, S, adj, terminals, fraction, seed, name, meta=None) -> OSInstance:
    rng = random.Random(f"terminals:{seed}")
    T = _pick_terminals(n, S, adj, terminals, fraction, rng)
    return instance_from_rotations(n, rotations, S, T, name=name, meta=meta)


def gen_cycle(k: int, terminals: str = "all", fraction: float = 0.25, seed: int = 0) -> OSInstance:
    if k < 3:
        raise ValueError("cycle needs k >= 3")
    adj = [[(v - 1) % k, (v + 1) % k] for v in range(k)]
    return _finish(k, adj, list(range(k)), adj, terminals, fraction, seed, f"cycle-{k}",
                   {"family": "cycle", "k": k})


def _grid_boundary(w: int, h: int) -> list[int]:
    """Boundary of the grid, clockwise (y axis up) from the origin."""
    vid = lambda x, y: y * w + x  # noqa: E731
    out = [vid(0, y) for y in range(h)]
    out += [vid(x, h - 1) for x in range(1, w)]
    out += [vid(w - 1, y) for y in range(h - 2, -1, -1)]
    out += [vid(x, 0) for x in range(w - 2, 0, -1)]
    return out


def _grid_adj(w: int, h: int) -> tuple[list[tuple[float, float]], list[list[int]]]:
    coords = [(float(v % w), float(v // w)) for v in range(w * h)]
    adj: list[list[int]] = [[] for _ in range(w * h)]
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x + 1 < w:
                adj[v].append(v + 1)
                adj[v + 1].append(v)
            if y + 1 < h:
                adj[v].append(v + w)
                adj[v + w].append(v)
    return coords, adj


def gen_grid(w: int, h: int, terminals: str = "all", fraction: float = 0.25, seed: int = 0) -> OSInstance:
    if w < 2 or h < 2:
        raise ValueError("grid needs w, h >= 2")
    coords, adj = _grid_adj(w, h)
    rot = _rotations_from_coords(coords, adj)
    return _finish(w * h, rot, _grid_boundary(w, h), adj, terminals, fraction, seed, f"grid-{w}x{h}",
                   {"family": "grid", "w": w, "h": h})


def gen_random_planar(seed: int, w: int, h: int, rate: float, terminals: str = "all",
                      fraction: float = 0.25) -> OSInstance:
    """Grid with interior edges deleted at ``rate``.

    Edges touching a boundary vertex are never deleted, nor are deletions
    that would disconnect the graph."""
    if not 0 <= rate < 1:
        raise ValueError("rate must lie in [0, 1)")
    coords, adj = _grid_adj(w, h)
    boundary = set(_grid_boundary(w, h))
    rng = random.Random(f"random_planar:{seed}:{w}:{h}:{rate}")
    candidates = [(u, v) for u in range(w * h) for v in adj[u]
                  if u < v and u not in boundary and v not in boundary]
    rng.shuffle(candidates)
    nbrs = [set(a) for a in adj]
    for u, v in candidates:
        if rng.random() >= rate:
            continue
        nbrs[u].discard(v)
        nbrs[v].discard(u)
        if not _connected_pair(nbrs, u, v):
            nbrs[u].add(v)
            nbrs[v].add(u)
    adj = [sorted(s) for s in nbrs]
    rot = _rotations_from_coords(coords, adj)
    return _finish(w * h, rot, _grid_boundary(w, h), adj, terminals, fraction, seed,
                   f"random_planar-{w}x{h}-r{rate}-s{seed}",
                   {"family": "random_planar", "w": w, "h": h, "rate": rate, "seed": seed})


def _connected_pair(nbrs: list[set[int]], a: int, b: int) -> bool:
    seen = {a}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            return True
        for u in nbrs[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return False


def gen_halin(seed: int, leaves: int, terminals: str = "all", fraction: float = 0.25) -> OSInstance:
    """Random Halin graph: a plane tree without degree-2 vertices whose
    leaves are joined by a cycle in embedding order; S is that cycle."""
    if leaves < 3:
        raise ValueError("need at least 3 leaves")
    rng = random.Random(f"halin:{seed}:{leaves}")
    children: list[list[int]] = [[1, 2, 3], [], [], []]
    parent = [-1, 0, 0, 0]
    leaf_list = [1, 2, 3]
    while len(leaf_list) < leaves:
        grow = min(rng.choice((2, 2, 3)), leaves - len(leaf_list) + 1)
        v = leaf_list.pop(rng.randrange(len(leaf_list)))
        for _ in range(grow):
            c = len(children)
            children.append([])
            parent.append(v)
            children[v].append(c)
            leaf_list.append(c)
    n = len(children)
    order = []
    stack = [0]
    while stack:
        v = stack.pop()
        if not children[v]:
            order.append(v)
        stack.extend(reversed(children[v]))
    L = len(order)
    rot: list[list[int]] = []
    adj: list[list[int]] = []
    pos = {v: i for i, v in enumerate(order)}
    for v in range(n):
        if v == 0:
            r = list(children[v])
        elif children[v]:
            r = [parent[v]] + children[v]
        else:
            i = pos[v]
            r = [parent[v], order[(i - 1) % L], order[(i + 1) % L]]
        rot.append(r)
        adj.append(list(r))
    # the leaf order runs counterclockwise; list S clockwise
    S = [order[0]] + order[:0:-1]
    return _finish(n, rot, S, adj, terminals, fraction, seed, f"halin-{leaves}-s{seed}",
                   {"family": "halin", "leaves": leaves, "seed": seed})


def shalin_lower_ids(k: int) -> dict:
    """Vertex ids of the lower-bound S-Halin graph.

    Returns ``{"root": 0, ("v", i, j): id, ("q", t): id}`` with paths
    ``P_i = v_{i,0} .. v_{i,i}`` (``v_{i,0}`` is the root) and the extra
    path ``q_1 .. q_{k/2}``."""
    if k % 2 or k < 4:
        raise OddK(f"k must be even and >= 4, got {k}")
    kp = k // 2
    ids: dict = {"root": 0}
    nxt = 1
    for i in range(1, kp + 1):
        ids[("v", i, 0)] = 0
        for j in range(1, i + 1):
            ids[("v", i, j)] = nxt
            nxt += 1
    for t in range(1, kp + 1):
        ids[("q", t)] = nxt
        nxt += 1
    ids["n"] = nxt
    return ids


def shalin_expected_pattern(k: int, i: int, j: int) -> list[int]:
    """Closed-form ternary pattern of ``v_{i,j}`` (``1 <= j < i <= k/2``):
    ``1^(i-j-1) (-1)^j 1^(k'+j+1-i) (-1)^(k'-j-1)``."""
    if k % 2:
        raise OddK(f"k must be even, got {k}")
    kp = k // 2
    if not 1 <= j < i <= kp:
        raise ValueError(f"need 1 <= j < i <= {kp}, got i={i}, j={j}")
    return [1] * (i - j - 1) + [-1] * j + [1] * (kp + j + 1 - i) + [-1] * (kp - j - 1)


def gen_shalin_lower(k: int, terminals: str = "all", fraction: float = 0.25, seed: int = 0) -> OSInstance:
    """Lower-bound S-Halin graph with ``k'(k'-1)/2`` forced distinct patterns.

    Paths ``P_1..P_{k'}`` leave a common root in clockwise order; the cycle
    is ``v_{1,1} - v_{2,2} - ... - v_{k',k'} - q_1 - ... - q_{k'} - v_{1,1}``
    and S is enumerated from ``v_{1,1}`` along it."""
    ids = shalin_lower_ids(k)
    kp = k // 2
    n = ids["n"]
    S = [ids[("v", t, t)] for t in range(1, kp + 1)] + [ids[("q", t)] for t in range(1, kp + 1)]
    coords: list[tuple[float, float]] = [(0.0, 0.0)] * n
    angle = [math.pi / 2 - 2 * math.pi * t / k for t in range(k)]
    for idx, v in enumerate(S):
        coords[v] = (math.cos(angle[idx]), math.sin(angle[idx]))
    for i in range(1, kp + 1):
        for j in range(1, i):
            r = j / i
            coords[ids[("v", i, j)]] = (r * math.cos(angle[i - 1]), r * math.sin(angle[i - 1]))
    adj: list[set[int]] = [set() for _ in range(n)]

    def link(a, b):
        adj[a].add(b)
        adj[b].add(a)

    for i in range(1, kp + 1):
        for j in range(1, i + 1):
            link(ids[("v", i, j - 1)], ids[("v", i, j)])
    for idx in range(k):
        link(S[idx], S[(idx + 1) % k])
    adj_l = [sorted(a) for a in adj]
    rot = _rotations_from_coords(coords, adj_l)
    return _finish(n, rot, S, adj_l, terminals, fraction, seed, f"shalin_lower-{k}",
                   {"family": "shalin_lower", "k": k})


def generate(spec: GeneratorSpec) -> OSInstance:
    p = dict(spec.params)
    kw = dict(terminals=spec.terminals, fraction=spec.fraction)
    fam = spec.family.replace("-", "_")
    if fam == "cycle":
        inst = gen_cycle(p["k"], seed=spec.seed, **kw)
    elif fam == "grid":
        inst = gen_grid(p["w"], p.get("h", p["w"]), seed=spec.seed, **kw)
    elif fam == "random_planar":
        inst = gen_random_planar(spec.seed, p["w"], p.get("h", p["w"]), p.get("rate", 0.3), **kw)
    elif fam == "halin":
        inst = gen_halin(spec.seed, p["leaves"], **kw)
    elif fam == "shalin_lower":
        inst = gen_shalin_lower(p["k"], seed=spec.seed, **kw)
    else:
        raise ValueError(f"unknown family {spec.family!r}; expected one of {FAMILIES}")
    inst.meta["instance_id"] = spec.instance_id
    return inst
