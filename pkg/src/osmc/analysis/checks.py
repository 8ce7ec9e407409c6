"""Property suite over one instance.

Each check yields a ``CheckResult`` with status ``pass``, ``fail``,
``finding`` (a measured quantity exceeded a configurable expectation but no
invariant broke) or ``skip``.  Failures carry a reproducer: the instance
metadata (family, parameters, seed or source file) plus the offending
vertices, edges or indices.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from osmc.analysis.oracle import Oracle, bfs
from osmc.analysis.vc import EXHAUSTIVE_MAX_K, shattering_check
from osmc.bisectors import (
    arc_conflicts,
    crossing_totals,
    enumerate_all_crossings,
    extract_bisector,
    face_incidences,
    make_cut,
)
from osmc.compressor.encoding import EncodingInputs, build_connected, build_face, build_general
from osmc.compressor.pattern_tree import build_pattern_tree_reseeding
from osmc.compressor.fileformat import deserialize, serialize
from osmc.distances import (
    BINARY,
    TERNARY,
    Pattern,
    all_source_bfs,
    compute_patterns,
    distinct_patterns,
    hamming_across,
    lift_binary_patterns,
    reconstruct_distance,
)
from osmc.errors import CorruptEncoding, InvariantViolation, ModePreconditionFailed, OSMCError
from osmc.generators import shalin_expected_pattern, shalin_lower_ids
from osmc.planar import OSInstance, subdivide

PASS, FAIL, FINDING, SKIP = "pass", "fail", "finding", "skip"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    reproducer: dict | None = None
    metrics: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    instance_id: str
    checks: list[CheckResult] = field(default_factory=list)
    metrics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self) -> dict:
        return {"instance_id": self.instance_id, "ok": self.ok, "metrics": self.metrics,
                "checks": [asdict(c) for c in self.checks]}

    def lines(self) -> list[str]:
        out = [f"{self.instance_id}: {'OK' if self.ok else 'FAILED'}"]
        for c in self.checks:
            out.append(f"  [{c.status:7s}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return out


@dataclass
class VerifyOptions:
    seed: int = 0
    threads: int = 1
    crossing_slack: float = 2.0
    crossings: bool = True
    containment_samples: int = 20
    vc_exhaustive_max_k: int = EXHAUSTIVE_MAX_K
    vc_samples: int = 20000
    query_samples: int = 10000
    encode: bool = True


def instance_id(inst: OSInstance) -> str:
    return str(inst.meta.get("instance_id") or inst.name or "instance")


def verify(inst: OSInstance, options: VerifyOptions | None = None) -> VerificationReport:
    opt = options or VerifyOptions()
    rep = VerificationReport(instance_id(inst))
    base_repro = {"instance_id": rep.instance_id, **{k: v for k, v in inst.meta.items() if k != "instance_id"}}

    def add(name, ok, detail="", status=None, metrics=None, **offending):
        st = status or (PASS if ok else FAIL)
        repro = {**base_repro, **offending} if st in (FAIL, FINDING) else None
        rep.checks.append(CheckResult(name, st, detail, repro, metrics or {}))

    rng = random.Random(opt.seed)
    k, n = inst.k, inst.n
    g = inst.graph
    sub = subdivide(inst)
    gs = sub.graph
    base_field = all_source_bfs(inst, opt.threads)
    D = base_field.dist.astype(np.int64)
    sub_field = all_source_bfs(sub, opt.threads)
    Ds = sub_field.dist.astype(np.int64)
    lifted = lift_binary_patterns(base_field, sub)
    direct = compute_patterns(sub_field, BINARY)
    ternary = compute_patterns(base_field, TERNARY)
    oracle = Oracle(inst)

    # -- distances ------------------------------------------------------------
    bad = []
    for i in range(k):
        ref = np.asarray(oracle.from_vertex(inst.S[i]))
        diff = np.flatnonzero(D[i] != ref)
        if len(diff):
            bad.append((i + 1, int(diff[0])))
    add("bfs_matches_oracle", not bad, f"{len(bad)} sources disagree" if bad else "",
        offending=bad[:5])

    face_d = D[:, list(inst.S)]
    add("face_distance_bound", int(face_d.max()) <= k // 2,
        f"max d(s_i, s_j) = {int(face_d.max())}, floor(k/2) = {k // 2}")

    e = g.edges
    lip = np.abs(D[:, e[:, 0]] - D[:, e[:, 1]]).max() if len(e) else 0
    es = gs.edges
    lip_s = np.abs(Ds[:, es[:, 0]] - Ds[:, es[:, 1]])
    add("edge_lipschitz", lip <= 1 and bool(np.all(lip_s == 1)),
        f"max base difference {int(lip)}; subdivided differences in {sorted(set(np.unique(lip_s).tolist()))}")

    doubled = Ds[0::2, :n]
    ok = bool(np.array_equal(doubled, 2 * D))
    pairs_ok = True
    for _ in range(10):
        u = rng.randrange(n)
        du = bfs(g, u)
        dus = bfs(gs, u)
        v = rng.randrange(n)
        if dus[v] != 2 * du[v]:
            pairs_ok = False
            add("subdivision_doubling", False, f"d'({u},{v}) = {dus[v]} but d = {du[v]}", u=u, v=v)
            break
    if pairs_ok:
        add("subdivision_doubling", ok, "" if ok else "source rows of G' are not twice those of G")

    par_s = Ds[0::2] % 2
    par_w = Ds[1::2] % 2
    parity_ok = bool(np.all(par_s == par_s[0]) and np.all(par_w == 1 - par_s[0]))
    add("source_parity", parity_ok)

    same = np.flatnonzero(np.any(lifted.packed != direct.packed, axis=1))
    add("lifted_patterns_match_direct", not len(same),
        f"{len(same)} vertices differ" if len(same) else "", vertices=same[:5].tolist())

    tern_dense = ternary.dense()
    add("ternary_domain", bool(np.all(np.abs(tern_dense) <= 1)))
    bin_dense = lifted.dense(np.arange(n)).astype(np.int64)
    link = (bin_dense[:, 0:-1:2] + bin_dense[:, 1::2]) // 2
    add("ternary_binary_link", bool(np.array_equal(link, tern_dense)))

    recon = D[0][None, :] + np.vstack([np.zeros((1, n), np.int64), np.cumsum(tern_dense.T, axis=0)])
    recon_bin = D[0][None, :] + np.vstack(
        [np.zeros((1, n), np.int64), np.cumsum(bin_dense.T, axis=0)[1::2] // 2])
    ok = bool(np.array_equal(recon, D) and np.array_equal(recon_bin, D))
    for _ in range(200):
        v, i = rng.randrange(n), rng.randint(1, k)
        got_t = reconstruct_distance(int(D[0][v]), Pattern(tuple(tern_dense[v].tolist()), TERNARY), i)
        got_b = reconstruct_distance(int(D[0][v]), Pattern(tuple(bin_dense[v].tolist()), BINARY), i)
        want = oracle.distance(v, i)
        if got_t != want or got_b != want:
            ok = False
            add("reconstruction", False, f"d({v}, s_{i}) = {want}, got {got_t}/{got_b}", v=v, i=i)
            break
    else:
        add("reconstruction", ok)

    ham = hamming_across(lifted, es)
    worst = int(np.argmax(ham)) if len(ham) else 0
    add("adjacent_patterns", not len(ham) or int(ham.max()) <= 2,
        f"max Hamming {int(ham.max()) if len(ham) else 0} over {len(es)} edges",
        metrics={"max_hamming": int(ham.max()) if len(ham) else 0},
        edge=es[worst].tolist() if len(ham) else None)

    classes = distinct_patterns(lifted)
    x = classes.x
    rep.metrics.update({"n": n, "m": g.m, "k": k, "T": len(inst.T), "x": x,
                        "max_pattern_class_size": classes.max_class_size})

    # -- cuts and bisectors -----------------------------------------------------
    L = lifted.length
    cuts, bisectors, cut_fail = [], [], None
    for i in range(1, L + 1):
        try:
            c = make_cut(sub, lifted, i)
            cuts.append(c)
            bisectors.append(extract_bisector(sub, c))
        except InvariantViolation as exc:
            cut_fail = (i, type(exc).__name__, str(exc))
            break
    if cut_fail:
        add("cuts_and_bisectors", False, f"{cut_fail[1]}: {cut_fail[2]}", cut=cut_fail[0])
        return rep
    add("cuts_and_bisectors", True, f"{L} cuts, both sides connected, all bisectors simple cycles")

    f_inf = gs.f_inf
    bad_inf, bad_face = [], []
    for b in bisectors:
        inc = face_incidences(b, gs)
        if inc[f_inf] != 2:
            bad_inf.append(b.index)
        if max(inc.values()) > 2:
            bad_face.append(b.index)
    add("outer_face_darts", not bad_inf, "every bisector has two darts at the outer face"
        if not bad_inf else f"bisectors {bad_inf[:5]}", bisectors=bad_inf[:5])
    add("face_incidence", not bad_face, "" if not bad_face else f"bisectors {bad_face[:5]}",
        bisectors=bad_face[:5])

    conflicts = arc_conflicts(bisectors, gs.num_darts)
    add("arc_disjoint", not conflicts, f"{len(conflicts)} shared darts" if conflicts else "",
        conflicts=conflicts[:5])

    coherent_bad = []
    num = gs.n
    for b, c in zip(bisectors, cuts):
        keep = np.ones(gs.m, dtype=bool)
        keep[b.darts >> 1] = False
        kept = es[keep]
        adj = csr_matrix((np.ones(2 * len(kept), np.int8),
                          (np.r_[kept[:, 0], kept[:, 1]], np.r_[kept[:, 1], kept[:, 0]])), shape=(num, num))
        reach = breadth_first_order(adj, sub.sources[b.index % len(sub.sources)], directed=False,
                                    return_predecessors=False)
        mask = np.zeros(num, dtype=bool)
        mask[reach] = True
        if not np.array_equal(mask, c.members):
            coherent_bad.append(b.index)
    add("cut_side_coherence", not coherent_bad,
        "" if not coherent_bad else f"cuts {coherent_bad[:5]}", cuts=coherent_bad[:5])

    contain_bad, disjoint_bad = [], []
    Sp = sub.sources
    for _ in range(opt.containment_samples):
        i = rng.randint(1, L)
        c = cuts[i - 1]
        inside = rng.random() < 0.5
        pool = np.flatnonzero(c.members if inside else ~c.members)
        u = int(pool[rng.randrange(len(pool))])
        target_row = i % len(Sp) if inside else i - 1
        du = np.asarray(bfs(gs, u))
        dt = Ds[target_row]
        total = du[Sp[target_row]]
        on_path = du + dt == total
        if np.any(c.members[on_path] != inside):
            contain_bad.append((u, i))
        # edges of the shortest-path DAG towards the target
        a, bnd = es[:, 0], es[:, 1]
        fwd = (du[a] + 1 + dt[bnd] == total) | (du[bnd] + 1 + dt[a] == total)
        on_b = np.zeros(gs.num_darts, dtype=bool)
        on_b[bisectors[i - 1].darts] = True
        if np.any(on_b[2 * np.flatnonzero(fwd)] | on_b[2 * np.flatnonzero(fwd) + 1]):
            disjoint_bad.append((u, i))
    add("shortest_path_containment", not contain_bad, f"{opt.containment_samples} sampled (u, i)",
        samples=contain_bad[:5])
    add("path_bisector_disjoint", not disjoint_bad, f"{opt.containment_samples} sampled (u, i)",
        samples=disjoint_bad[:5])

    # -- crossings ---------------------------------------------------------------
    if opt.crossings:
        reports = enumerate_all_crossings(bisectors, gs)
        tot = crossing_totals(reports)
        t = tot.t
        add("crossing_order", not tot.order_failures,
            f"{tot.pairs} pairs" if not tot.order_failures else f"{len(tot.order_failures)} pairs out of order",
            pairs=list(tot.order_failures[:5]))
        add("crossing_parity", not tot.odd_parity,
            "" if not tot.odd_parity else f"{len(tot.odd_parity)} pairs cross an odd number of times",
            pairs=list(tot.odd_parity[:5]))
        limit = k / 2 + opt.crossing_slack
        const = tot.max_r - k / 2
        add("crossing_bound", tot.max_r <= limit, f"max_r = {tot.max_r}, k/2 + slack = {limit:g}",
            status=PASS if tot.max_r <= limit else FINDING,
            metrics={"max_r": tot.max_r, "realized_constant": const,
                     "realized_constant_subdivided": tot.max_r - k})
        add("pattern_count_vs_crossings", x <= 2 * t + 2 * k, f"x = {x}, 2t + 2k = {2 * t + 2 * k}")
        rep.metrics.update({"t": t, "max_r": tot.max_r, "crossing_histogram": tot.histogram,
                            "realized_constant": const})
    else:
        add("crossing_order", True, "crossings disabled", status=SKIP)
    add("pattern_count_cubic", x <= 8 * k ** 3, f"x = {x}, 8k^3 = {8 * k ** 3}")
    rep.metrics.update({"x_over_k2": x / k ** 2, "x_over_k3": x / k ** 3})

    # -- forbidden configuration --------------------------------------------------
    vc_mode = "exhaustive" if k <= opt.vc_exhaustive_max_k else "sampled"
    sr = shattering_check(lifted, 4, mode=vc_mode, k=k, samples=opt.vc_samples, seed=opt.seed)
    ok = sr.shattered is None and sr.forbidden is None
    add("forbidden_configuration", ok,
        f"{vc_mode}, {sr.column_sets} column sets" + ("" if ok else f", witness {sr.shattered or sr.forbidden}"),
        columns=sr.shattered or sr.forbidden)

    # -- encoding -------------------------------------------------------------------
    if opt.encode:
        _verify_encoding(inst, sub, D, lifted, x, rng, opt, add)

    # -- lower-bound family -------------------------------------------------------------
    if inst.meta.get("family") == "shalin_lower":
        kk = inst.meta["k"]
        ids = shalin_lower_ids(kk)
        mismatch, seen = [], set()
        for i in range(1, kk // 2 + 1):
            for j in range(1, i):
                got = tern_dense[ids[("v", i, j)]].tolist()
                seen.add(tuple(got))
                if got != shalin_expected_pattern(kk, i, j):
                    mismatch.append((i, j))
        want = (kk // 2) * (kk // 2 - 1) // 2
        add("lower_bound_patterns", not mismatch and len(seen) == want,
            f"{len(seen)} distinct closed-form patterns (expected {want})", vertices=mismatch[:5])
    return rep


def _verify_encoding(inst, sub, D, lifted, x, rng, opt, add):
    inp = EncodingInputs(inst, sub, D, lifted)
    tree = build_pattern_tree_reseeding(sub, lifted, opt.seed)
    add("dedup_exact", tree.size == x, f"tree nodes {tree.size}, distinct patterns {x}")
    encs = [build_general(inp, opt.seed, tree=tree)]
    for builder in (build_connected, build_face):
        try:
            encs.append(builder(inp, opt.seed))
        except ModePreconditionFailed:
            pass
    T = list(inst.T)
    for enc in encs:
        wrong = None
        if T:
            total = len(T) * inst.k
            if total <= opt.query_samples:
                qs = [(v, i) for v in T for i in range(1, inst.k + 1)]
            else:
                qs = [(T[rng.randrange(len(T))], rng.randint(1, inst.k)) for _ in range(opt.query_samples)]
            for v, i in qs:
                if enc.distance(v, i) != D[i - 1][v]:
                    wrong = (v, i)
                    break
        add(f"queries_{enc.mode}", wrong is None,
            f"{len(T)} terminals" if wrong is None else f"d({wrong[0]}, s_{wrong[1]}) wrong",
            query=wrong)
        blob = serialize(enc)
        same = serialize(deserialize(blob, deep=True)) == blob
        rejected = True
        for pos in (len(blob) // 2, 0, len(blob) - 1):
            mutated = bytearray(blob)
            mutated[pos] ^= 0x5A
            try:
                deserialize(bytes(mutated))
                rejected = False
            except CorruptEncoding:
                pass
        add(f"serialization_{enc.mode}", same and rejected,
            "round trip exact, corruption rejected" if same and rejected else
            f"round trip {'ok' if same else 'differs'}, corruption {'rejected' if rejected else 'accepted'}")
        if enc.mode == "face":
            add("face_walk_changes", enc.stats["pattern_changes"] <= 2 * inst.k,
                f"{enc.stats['pattern_changes']} changes, 2k = {2 * inst.k}",
                metrics={"pattern_changes": enc.stats["pattern_changes"]})


def verify_safely(inst: OSInstance, options: VerifyOptions | None = None) -> VerificationReport:
    """Like ``verify`` but turns unexpected package errors into a failed check."""
    try:
        return verify(inst, options)
    except OSMCError as exc:
        rep = VerificationReport(instance_id(inst))
        rep.checks.append(CheckResult("internal", FAIL, f"{type(exc).__name__}: {exc}",
                                      {"instance_id": rep.instance_id, **inst.meta}))
        return rep
