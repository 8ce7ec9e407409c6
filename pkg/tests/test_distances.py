import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osmc.analysis.oracle import Oracle, bfs
from osmc.distances import (
    BINARY,
    TERNARY,
    Pattern,
    all_source_bfs,
    compute_patterns,
    distinct_patterns,
    flip_positions,
    hamming_across,
    lift_binary_patterns,
    pack_dense,
    reconstruct_distance,
    ternary_from_binary,
)
from osmc.errors import AdjacentPatternViolation, IndexOutOfRange, ModeMismatch
from osmc.generators import gen_cycle, gen_grid, gen_halin, gen_random_planar, gen_shalin_lower
from osmc.planar import subdivide


def test_c4_distances_from_s1(c4):
    f = all_source_bfs(c4)
    assert f[0].tolist() == [0, 1, 2, 1]


def test_c4_pattern_of_s1(c4):
    pats = compute_patterns(all_source_bfs(c4), TERNARY)
    assert pats.pattern(c4.S[0]).entries == (1, 1, -1)


def test_source_distances_bounded_by_half_face(small_instances):
    for inst in small_instances:
        f = all_source_bfs(inst)
        S = list(inst.S)
        assert f.dist[:, S].max() <= inst.k // 2


def test_binary_to_ternary_example():
    p = Pattern((1, 1, -1, 1, -1, -1, 1), BINARY)
    assert p.to_ternary().entries == (1, 0, -1)


def test_ternary_domain_and_reconstruction(small_instances):
    for inst in small_instances:
        f = all_source_bfs(inst)
        pats = compute_patterns(f, TERNARY)
        dense = pats.dense()
        assert set(np.unique(dense).tolist()) <= {-1, 0, 1}
        for v in range(0, inst.n, 3):
            p = pats.pattern(v)
            for i in range(1, inst.k + 1):
                assert reconstruct_distance(int(f[0][v]), p, i) == f[i - 1][v]


def test_reconstruct_edge_indices(c4):
    p = Pattern((1, 1, -1), TERNARY)
    assert reconstruct_distance(0, p, 1) == 0
    assert reconstruct_distance(0, p, 4) == 1
    with pytest.raises(IndexOutOfRange):
        reconstruct_distance(0, p, 5)
    with pytest.raises(IndexOutOfRange):
        reconstruct_distance(0, p, 0)


def test_binary_domain_and_binary_reconstruction(small_instances):
    for inst in small_instances:
        sub = subdivide(inst)
        f = all_source_bfs(sub)
        pats = compute_patterns(f, BINARY)
        assert set(np.unique(pats.dense()).tolist()) <= {-1, 1}
        for v in range(0, sub.graph.n, 5):
            p = pats.pattern(v)
            for i in range(1, inst.k + 1):
                if v < inst.n:
                    assert 2 * reconstruct_distance(int(f[0][v]) // 2, p, i) == f[2 * (i - 1)][v]
                assert f[2 * (i - 1)][v] == f[0][v] + sum(p.entries[: 2 * (i - 1)])


def test_binary_and_ternary_are_linked(small_instances):
    for inst in small_instances:
        sub = subdivide(inst)
        binary = compute_patterns(all_source_bfs(sub), BINARY)
        tern = compute_patterns(all_source_bfs(inst), TERNARY)
        assert np.array_equal(ternary_from_binary(binary, np.arange(inst.n)), tern.dense())


def test_mode_mismatch(c4):
    with pytest.raises(ModeMismatch):
        compute_patterns(all_source_bfs(c4), BINARY)
    with pytest.raises(ModeMismatch):
        compute_patterns(all_source_bfs(subdivide(c4)), TERNARY)
    with pytest.raises(ModeMismatch):
        compute_patterns(all_source_bfs(c4), TERNARY).bits()


def test_c4_has_eight_distinct_binary_patterns(c4):
    sub = subdivide(c4)
    pats = compute_patterns(all_source_bfs(sub), BINARY)
    assert distinct_patterns(pats).x == 8


def test_distinct_patterns_groups_exactly():
    dense = np.array([[1, -1, 1], [1, -1, 1], [-1, -1, 1], [1, -1, 1]], dtype=np.int8)
    cl = distinct_patterns(pack_dense(dense, BINARY))
    assert cl.x == 2
    assert cl.class_of.tolist() == [0, 0, 1, 0]
    assert cl.representative.tolist() == [0, 2]
    assert cl.max_class_size == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.sampled_from([-1, 0, 1]), min_size=13, max_size=13), min_size=1, max_size=20))
def test_ternary_packing_round_trip(rows):
    dense = np.array(rows, dtype=np.int8)
    assert np.array_equal(pack_dense(dense, TERNARY).dense(), dense)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.sampled_from([-1, 1]), min_size=11, max_size=11), min_size=1, max_size=20))
def test_binary_packing_round_trip(rows):
    dense = np.array(rows, dtype=np.int8)
    pm = pack_dense(dense, BINARY)
    assert np.array_equal(pm.dense(), dense)
    assert np.array_equal(pm.bits(), (dense > 0).astype(np.uint8))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000), w=st.integers(3, 8), h=st.integers(3, 8))
def test_lifted_patterns_equal_direct_bfs(seed, w, h):
    inst = gen_random_planar(seed, w, h, 0.4)
    sub = subdivide(inst)
    lifted = lift_binary_patterns(all_source_bfs(inst), sub)
    direct = compute_patterns(all_source_bfs(sub), BINARY)
    assert np.array_equal(lifted.packed, direct.packed)


def test_lifted_patterns_halin_and_shalin():
    for inst in (gen_halin(5, 17), gen_shalin_lower(12), gen_cycle(9)):
        sub = subdivide(inst)
        assert np.array_equal(lift_binary_patterns(all_source_bfs(inst), sub).packed,
                              compute_patterns(all_source_bfs(sub), BINARY).packed)


def test_bfs_matches_oracle_exhaustively(small_instances):
    for inst in small_instances:
        f = all_source_bfs(inst)
        oracle = Oracle(inst)
        for v in range(inst.n):
            for i in range(1, inst.k + 1):
                assert f[i - 1][v] == oracle.distance(v, i)


def test_threaded_bfs_matches():
    inst = gen_grid(15, 15)
    assert np.array_equal(all_source_bfs(inst, threads=4).dist, all_source_bfs(inst).dist)


def test_adjacent_patterns_differ_in_at_most_two(small_instances):
    for inst in small_instances:
        sub = subdivide(inst)
        pats = compute_patterns(all_source_bfs(sub), BINARY)
        edges = sub.graph.edges
        assert hamming_across(pats, edges).max() <= 2
        flips = flip_positions(pats, edges)
        assert flips.shape == (len(edges), 2)


def test_flip_positions_reports_violation():
    dense = np.array([[1, 1, 1, 1], [-1, -1, -1, 1]], dtype=np.int8)
    with pytest.raises(AdjacentPatternViolation):
        flip_positions(pack_dense(dense, BINARY), np.array([[0, 1]]))


def test_flip_positions_values():
    dense = np.array([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, 1, -1]], dtype=np.int8)
    out = flip_positions(pack_dense(dense, BINARY), np.array([[0, 1], [0, 2], [0, 0]]))
    assert out.tolist() == [[1, 3], [3, -1], [-1, -1]]


def test_subdivided_distance_doubles(grid3):
    sub = subdivide(grid3)
    fs = all_source_bfs(sub)
    fb = all_source_bfs(grid3)
    assert np.array_equal(fs.dist[0::2, :grid3.n], 2 * fb.dist)
    assert bfs(sub.graph, sub.sources[0])[: grid3.n] == (2 * fb.dist[0]).tolist()
