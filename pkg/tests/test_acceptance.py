"""The eleven acceptance criteria, each at its stated tolerance.

Every test records a ``criterion`` label and a ``measured`` summary; the
conftest hook prints one PASS/FAIL line per criterion after the run.
"""

import math
import random
import statistics
import time

import numpy as np
import pytest

from osmc.analysis.oracle import Oracle
from osmc.analysis.suite import default_suite, small_suite
from osmc.analysis.vc import shattering_check
from osmc.bisectors import arc_conflicts, crossing_totals, enumerate_all_crossings, extract_bisectors
from osmc.compressor import (
    build_connected,
    build_encoding,
    build_face,
    build_pattern_tree,
    deserialize,
    prepare,
    serialize,
    size_report,
)
from osmc.distances import TERNARY, all_source_bfs, compute_patterns, distinct_patterns, hamming_across
from osmc.errors import CorruptEncoding
from osmc.generators import (
    gen_grid,
    gen_halin,
    gen_random_planar,
    gen_shalin_lower,
    generate,
    shalin_expected_pattern,
    shalin_lower_ids,
)

QUERIES_PER_INSTANCE = 10_000


def _label(record_property, number, text, measured):
    record_property("criterion", f"{number} {text}")
    record_property("measured", measured)


@pytest.fixture(scope="module")
def suite():
    """Default suite: instances, prepared inputs and preparation time."""
    out = []
    for spec in default_suite():
        t0 = time.perf_counter()
        inst = generate(spec)
        inp = prepare(inst)
        out.append((spec, inst, inp, time.perf_counter() - t0))
    return out


@pytest.fixture(scope="module")
def crossings(suite):
    rows = []
    for spec, inst, inp, _ in suite:
        bis = extract_bisectors(inp.sub, inp.patterns)
        rows.append((inst, bis, crossing_totals(enumerate_all_crossings(bis, inp.sub.graph)),
                     distinct_patterns(inp.patterns).x))
    return rows


@pytest.fixture(scope="module")
def encodings(suite):
    return {}


def test_criterion_01_exact_queries(suite, encodings, record_property):
    assert len(suite) >= 50
    assert max(i.n for _, i, _, _ in suite) <= 5000 and max(i.k for _, i, _, _ in suite) <= 160
    assert max(i.n for _, i, _, _ in suite if i.meta.get("family") == "grid") == 1600
    elapsed = sum(t for *_, t in suite)
    total = wrong = 0
    for spec, inst, inp, _ in suite:
        t0 = time.perf_counter()
        enc = build_encoding(inst, "general", seed=0, inputs=inp)
        encodings[spec.instance_id] = (inst, enc)
        oracle = Oracle(inst)
        rng = random.Random(spec.instance_id)
        T = enc.terminals
        for _ in range(QUERIES_PER_INSTANCE):
            v = T[rng.randrange(len(T))]
            i = rng.randint(1, inst.k)
            total += 1
            wrong += enc.distance(v, i) != oracle.distance(v, i)
        elapsed += time.perf_counter() - t0
    _label(record_property, 1, "exact-query equivalence",
           f"{len(suite)} instances, {total} queries, {wrong} wrong, {elapsed:.1f} s")
    assert wrong == 0
    assert total == len(suite) * QUERIES_PER_INSTANCE
    assert elapsed < 120


def test_criterion_02_adjacent_patterns(suite, record_property):
    worst = 0
    violations = 0
    edges = 0
    for _, inst, inp, _ in suite:
        ham = hamming_across(inp.patterns, inp.sub.graph.edges)
        worst = max(worst, int(ham.max()))
        violations += int((ham > 2).sum())
        edges += len(ham)
    _label(record_property, 2, "adjacent patterns differ in <= 2 bits",
           f"{edges} subdivided edges, max Hamming {worst}, {violations} violations")
    assert violations == 0


def test_criterion_03_bisector_structure(crossings, suite, record_property):
    # extract_bisectors already raised on a disconnected side or a non-simple cycle
    bad_inf = conflicts = 0
    count = 0
    for (inst, bis, _, _), (_, _, inp, _) in zip(crossings, suite):
        g = inp.sub.graph
        for b in bis:
            count += 1
            at_inf = int(np.sum(g.face_of[b.darts] == g.f_inf) + np.sum(g.face_of[b.darts ^ 1] == g.f_inf))
            bad_inf += at_inf != 2
            assert len(set(b.faces.tolist())) == len(b)
        conflicts += len(arc_conflicts(bis, g.num_darts))
    _label(record_property, 3, "bisectors are simple, arc-disjoint dual cycles",
           f"{count} bisectors, {bad_inf} outer-face violations, {conflicts} shared darts")
    assert bad_inf == 0 and conflicts == 0


def test_criterion_04_crossing_properties(crossings, record_property):
    order_failures = 0
    realized = -math.inf
    worst = None
    for inst, _, tot, _ in crossings:
        order_failures += len(tot.order_failures)
        c = tot.max_r - inst.k / 2
        if c > realized:
            realized, worst = c, inst.name
    _label(record_property, 4, "crossing order and max_r <= k/2 + 2",
           f"{order_failures} order failures, realized max_r - k/2 = {realized:g} ({worst})")
    assert order_failures == 0
    assert realized <= 2


def test_criterion_05_pattern_count_bounds(crossings, record_property):
    charge = cubic = 0
    worst_charge = worst_cubic = 0.0
    x_over_k2 = []
    for inst, _, tot, x in crossings:
        k = inst.k
        charge += x > 2 * tot.t + 2 * k
        cubic += x > 8 * k ** 3
        worst_charge = max(worst_charge, x / (2 * tot.t + 2 * k))
        worst_cubic = max(worst_cubic, x / (8 * k ** 3))
        x_over_k2.append(x / k ** 2)
    _label(record_property, 5, "x <= 2t + 2k and x <= 8k^3",
           f"max x/(2t+2k) = {worst_charge:.3f}, max x/(8k^3) = {worst_cubic:.2e}, "
           f"x/k^2 in [{min(x_over_k2):.3f}, {max(x_over_k2):.3f}]")
    assert charge == 0 and cubic == 0


def test_criterion_06_halin_family(record_property):
    k = 8
    ids = shalin_lower_ids(k)
    inst = gen_shalin_lower(k)
    tern = compute_patterns(all_source_bfs(inst), TERNARY).dense()
    forced = []
    for i in range(2, k // 2 + 1):
        for j in range(1, i):
            row = tern[ids[("v", i, j)]].tolist()
            assert row == shalin_expected_pattern(k, i, j)
            forced.append(tuple(row))
    assert len(forced) == len(set(forced)) == 6
    sweep = {}
    for k in (8, 16, 32, 64):
        kp = k // 2
        x = distinct_patterns(prepare(gen_shalin_lower(k)).patterns).x
        assert x >= kp * (kp - 1) // 2
        sweep[k] = x
    c = max(x / k ** 2 for k, x in sweep.items())
    slope = np.polyfit(np.log(list(sweep)), np.log(list(sweep.values())), 1)[0]
    _label(record_property, 6, "S-Halin lower-bound family",
           f"6 forced patterns match, x = {sweep}, c = max x/k^2 = {c:.3f}, log-log slope {slope:.2f}")
    assert sweep[64] / 64 ** 2 <= sweep[32] / 32 ** 2
    assert 1.5 <= slope <= 2.5


def test_criterion_07_forbidden_configuration(record_property):
    worst = 0.0
    found = 0
    specs = small_suite()
    for spec in specs:
        inst = generate(spec)
        t0 = time.perf_counter()
        res = shattering_check(prepare(inst).patterns, d=4, mode="exhaustive", k=inst.k)
        worst = max(worst, time.perf_counter() - t0)
        assert res.complete
        found += res.found or res.forbidden is not None
    _label(record_property, 7, "no shattered 4-set for k <= 16",
           f"{len(specs)} instances, {found} witnesses, slowest {worst:.2f} s")
    assert found == 0 and worst < 60


def test_criterion_08_special_modes(record_property):
    alpha = 0.0
    for side in (5, 10, 20, 30, 40):
        for fraction in (0.1, 0.3, 1.0):
            inst = gen_grid(side, side, terminals="blob", fraction=fraction, seed=side)
            enc = build_connected(prepare(inst))
            k, T = inst.k, len(inst.T)
            alpha = max(alpha, size_report(enc)["total"] / (T + k * math.log2(k)))
    changes = 0.0
    for inst in (gen_grid(30, 20, terminals="boundary"), gen_halin(3, 120, terminals="boundary"),
                 gen_random_planar(8, 25, 25, 0.3, terminals="boundary"),
                 gen_shalin_lower(64, terminals="boundary")):
        enc = build_face(prepare(inst))
        changes = max(changes, enc.stats["pattern_changes"] / (2 * inst.k))
    _label(record_property, 8, "connected and single-face modes",
           f"alpha = {alpha:.2f} (bound 8), max face-walk changes / 2k = {changes:.3f}")
    assert alpha <= 8
    assert changes <= 1


def test_criterion_09_dedup_exactness(suite, record_property):
    mismatches = 0
    for _, inst, inp, _ in suite:
        x = distinct_patterns(inp.patterns).x
        ref = None
        for seed in range(5):
            tree = build_pattern_tree(inp.sub, inp.patterns, seed=seed)
            mismatches += tree.size != x
            if ref is None:
                ref = tree.node_of
            else:
                mismatches += not np.array_equal(ref, tree.node_of)
    _label(record_property, 9, "pattern tree size equals x over 5 seeds",
           f"{len(suite)} instances x 5 seeds, {mismatches} mismatches")
    assert mismatches == 0


def test_criterion_10_serialization(encodings, record_property):
    assert encodings, "criterion 1 builds the encodings"
    rng = random.Random(10)
    round_trips = rejected = wrong = 0
    for iid, (inst, enc) in encodings.items():
        data = serialize(enc)
        back = deserialize(data, deep=True)
        assert serialize(back) == data
        round_trips += 1
        v = enc.terminals[0]
        assert [back.distance(v, i) for i in range(1, inst.k + 1)] == \
            [enc.distance(v, i) for i in range(1, inst.k + 1)]
        for _ in range(20):
            bad = bytearray(data)
            bad[rng.randrange(len(bad))] ^= 1 << rng.randrange(8)
            try:
                deserialize(bytes(bad))
            except CorruptEncoding:
                rejected += 1
            else:
                wrong += 1
    for mode, inst in (("connected", gen_grid(12, 12, terminals="blob", seed=2)),
                       ("face", gen_halin(1, 40, terminals="boundary"))):
        data = serialize(build_encoding(inst, mode))
        assert serialize(deserialize(data, deep=True)) == data
        round_trips += 1
    _label(record_property, 10, "bit-exact round trips, corruption rejected",
           f"{round_trips} round trips, {rejected} corruptions rejected, {wrong} accepted")
    assert wrong == 0


def test_criterion_11_scale(record_property):
    t0 = time.perf_counter()
    inst = gen_grid(200, 200)
    enc = build_encoding(inst, "general")
    build = time.perf_counter() - t0
    assert (inst.n, inst.k) == (40_000, 796)
    rng = random.Random(11)
    pairs = [(rng.randrange(inst.n), rng.randint(1, inst.k)) for _ in range(20_000)]
    timings = []
    clock = time.perf_counter_ns
    dist = enc.distance
    for v, i in pairs:
        s = clock()
        dist(v, i)
        timings.append(clock() - s)
    median_us = statistics.median(timings) / 1000
    oracle = Oracle(inst)
    assert all(enc.distance(v, i) == oracle.distance(v, i) for v, i in pairs[:200])
    _label(record_property, 11, "200x200 grid scale check",
           f"build {build:.1f} s (limit 60), median query {median_us:.2f} us (limit 10), x = {enc.x}")
    assert build < 60
    assert median_us < 10
