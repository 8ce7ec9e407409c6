import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osmc.analysis.oracle import bfs
from osmc.errors import OddK
from osmc.generators import (
    GeneratorSpec,
    gen_cycle,
    gen_grid,
    gen_halin,
    gen_random_planar,
    gen_shalin_lower,
    generate,
    shalin_expected_pattern,
    shalin_lower_ids,
)
from osmc.distances import TERNARY, all_source_bfs, compute_patterns, distinct_patterns


def test_grid_counts():
    inst = gen_grid(3, 3)
    assert (inst.n, inst.graph.m, inst.k) == (9, 12, 8)


def test_two_by_two_grid_is_c4():
    inst = gen_grid(2, 2)
    assert (inst.n, inst.graph.m, inst.k, inst.graph.num_faces) == (4, 4, 4, 2)


def test_cycle_is_its_own_face():
    inst = gen_cycle(6)
    assert inst.k == 6 and inst.n == 6 and inst.graph.num_faces == 2


@pytest.mark.parametrize("policy", ["all", "random", "none", "boundary", "blob"])
def test_terminal_policies(policy):
    inst = gen_grid(8, 8, terminals=policy, fraction=0.25, seed=3)
    T = set(inst.T)
    assert T <= set(range(inst.n))
    if policy == "all":
        assert T == set(range(inst.n))
    if policy == "boundary":
        assert T == set(inst.S)
    if policy == "none":
        assert not T


def test_blob_terminals_are_connected():
    inst = gen_grid(10, 10, terminals="blob", fraction=0.3, seed=1)
    T = set(inst.T)
    adj = inst.graph.neighbor_lists
    start = next(iter(T))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in T and w not in seen:
                seen.add(w)
                stack.append(w)
    assert seen == T


def test_random_planar_rate_zero_is_the_grid():
    a = gen_random_planar(4, 6, 5, 0.0)
    b = gen_grid(6, 5)
    assert a.graph.m == b.graph.m and a.S == b.S


def test_random_planar_keeps_boundary_and_connectivity():
    for seed in range(100):
        inst = gen_random_planar(seed, 7, 6, 0.3)
        d = bfs(inst.graph, 0)
        assert min(d) >= 0
        assert inst.k == 2 * (7 + 6) - 4


def test_generation_is_deterministic():
    spec = GeneratorSpec("random_planar", {"w": 9, "h": 9, "rate": 0.3}, "random", 0.2, 17)
    a, b = generate(spec), generate(spec)
    assert a.graph.rotations_as_vertices() == b.graph.rotations_as_vertices()
    assert a.T == b.T and a.meta["instance_id"] == spec.instance_id


def test_halin_three_leaves_is_a_wheel():
    inst = gen_halin(0, 3)
    assert inst.n == 4 and inst.graph.m == 6 and inst.graph.num_faces == 4


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 5000), leaves=st.integers(3, 40))
def test_halin_inner_vertices_have_degree_three(seed, leaves):
    inst = gen_halin(seed, leaves)
    S = set(inst.S)
    adj = inst.graph.neighbor_lists
    assert inst.k == leaves
    assert all(len(adj[v]) >= 3 for v in range(inst.n) if v not in S)
    assert all(len(adj[v]) == 3 for v in S)


def test_shalin_ids_and_size():
    ids = shalin_lower_ids(8)
    assert ids["n"] == 1 + 4 * 5 // 2 + 4
    inst = gen_shalin_lower(8)
    assert inst.k == 8 and inst.n == ids["n"]


def test_shalin_closed_form_example():
    assert shalin_expected_pattern(8, 3, 1) == [1, -1, 1, 1, 1, -1, -1]


@pytest.mark.parametrize("k", [8, 16])
def test_shalin_patterns_match_closed_form(k):
    ids = shalin_lower_ids(k)
    inst = gen_shalin_lower(k)
    pats = compute_patterns(all_source_bfs(inst), TERNARY).dense()
    forced = []
    for i in range(2, k // 2 + 1):
        for j in range(1, i):
            row = pats[ids[("v", i, j)]].tolist()
            assert row == shalin_expected_pattern(k, i, j)
            forced.append(tuple(row))
    kp = k // 2
    assert len(set(forced)) == kp * (kp - 1) // 2
    assert distinct_patterns(compute_patterns(all_source_bfs(inst), TERNARY)).x >= kp * (kp - 1) // 2


def test_odd_k_is_rejected():
    with pytest.raises(OddK):
        gen_shalin_lower(7)


def test_unknown_family():
    with pytest.raises(ValueError):
        generate(GeneratorSpec("torus", {}))


def test_distances_fit_in_small_ints():
    inst = gen_grid(12, 12)
    assert np.all(all_source_bfs(inst).dist >= 0)
