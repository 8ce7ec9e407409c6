import numpy as np
import pytest

from osmc.bisectors import (
    CrossingPart,
    CrossingReport,
    Cut,
    arc_conflicts,
    compute_cuts,
    crossing_totals,
    enumerate_all_crossings,
    enumerate_crossings,
    extract_bisector,
    extract_bisectors,
    face_incidences,
    make_cut,
    verify_crossing_order,
)
from osmc.distances import BINARY, all_source_bfs, compute_patterns, pack_dense
from osmc.errors import DisconnectedCutSide, ModeMismatch, NotASimpleCycle
from osmc.generators import gen_grid, gen_halin, gen_random_planar, gen_shalin_lower
from osmc.planar import subdivide


def _setup(inst):
    sub = subdivide(inst)
    return sub, compute_patterns(all_source_bfs(sub), BINARY)


@pytest.fixture(scope="module")
def c8(c4):
    return _setup(c4)


def test_c8_cut_one(c8):
    sub, pats = c8
    d = all_source_bfs(sub).dist
    cut = make_cut(sub, pats, 1)
    expected = d[1] < d[0]
    assert np.array_equal(cut.members, expected)
    assert cut.size == 4


def test_next_source_is_inside_every_cut(small_instances):
    for inst in small_instances:
        sub, pats = _setup(inst)
        S = sub.sources
        for cut in compute_cuts(sub, pats):
            i = cut.index
            assert cut.members[S[i % len(S)]] and not cut.members[S[i - 1]]


def test_cut_sides_are_connected():
    for inst in (gen_grid(6, 5), gen_halin(3, 14), gen_random_planar(2, 7, 7, 0.3)):
        sub, pats = _setup(inst)
        assert len(compute_cuts(sub, pats, check=True)) == 2 * inst.k - 1


def test_c8_bisectors_have_two_darts(c8):
    sub, pats = c8
    g = sub.graph
    for b in extract_bisectors(sub, pats):
        assert len(b) == 2
        assert b.faces[0] == g.f_inf
        assert g.face_of[b.darts[0] ^ 1] == b.faces[1] != g.f_inf


def test_bisector_is_a_closed_dual_walk(small_instances):
    for inst in small_instances:
        sub, pats = _setup(inst)
        g = sub.graph
        for b in extract_bisectors(sub, pats):
            heads = g.face_of[b.darts ^ 1]
            assert np.array_equal(np.roll(b.faces, -1), heads)
            assert g.face_of[b.darts[0]] == g.f_inf
            boundary = np.flatnonzero(b.members[g.tail] & ~b.members[g.head])
            assert sorted(b.darts.tolist()) == boundary.tolist()


def test_arc_disjoint_and_face_incidence(small_instances):
    for inst in small_instances:
        sub, pats = _setup(inst)
        bis = extract_bisectors(sub, pats)
        assert arc_conflicts(bis, sub.graph.num_darts) == []
        for b in bis:
            assert max(face_incidences(b, sub.graph).values()) <= 2


def test_outer_face_darts_are_the_source_edges(small_instances):
    for inst in small_instances:
        sub, pats = _setup(inst)
        g, S = sub.graph, sub.sources
        for b in extract_bisectors(sub, pats):
            i = b.index
            on_outer = [a for a in b.darts.tolist() if g.face_of[a] == g.f_inf]
            assert on_outer == [g.dart(S[i % len(S)], S[i - 1])]


def test_c8_single_crossing(c8):
    sub, pats = c8
    bis = extract_bisectors(sub, pats)
    rep = enumerate_crossings(bis[0], bis[1], sub.graph)
    assert rep.r == 1
    assert rep.total_crossings % 2 == 0
    assert any(p.at_infinity for p in rep.parts)


def test_c8_crossings_match_chord_interleaving(c8):
    # every C8 bisector is a diameter through two cycle edges; two diameters
    # cross once unless they use the same edge pair (cuts i and i+4)
    sub, pats = c8
    bis = extract_bisectors(sub, pats)
    chords = [frozenset(int(a) >> 1 for a in b.darts) for b in bis]
    reports = enumerate_all_crossings(bis, sub.graph)
    for rep in reports:
        expected = 0 if chords[rep.i - 1] == chords[rep.j - 1] else 1
        assert rep.r == expected, (rep.i, rep.j)
    tot = crossing_totals(reports)
    assert tot.t == 18 and tot.histogram == {0: 3, 1: 18}
    assert tot.odd_parity == () and tot.order_failures == ()


def test_crossing_with_itself_is_rejected(c8):
    sub, pats = c8
    b = extract_bisectors(sub, pats)[0]
    with pytest.raises(ValueError):
        enumerate_crossings(b, b, sub.graph)


@pytest.mark.parametrize("make", [lambda: gen_shalin_lower(8), lambda: gen_grid(6, 6),
                                  lambda: gen_halin(7, 16), lambda: gen_random_planar(9, 8, 8, 0.3)])
def test_crossing_invariants(make):
    inst = make()
    sub, pats = _setup(inst)
    reports = enumerate_all_crossings(extract_bisectors(sub, pats), sub.graph)
    tot = crossing_totals(reports)
    assert tot.max_r <= inst.k / 2 + 2
    assert tot.odd_parity == ()
    assert tot.order_failures == ()


def test_order_check_rejects_shuffled_report():
    parts = (CrossingPart(1, 3, 1, True, False), CrossingPart(4, 7, 1, True, False))
    assert not verify_crossing_order(CrossingReport(1, 2, parts))
    ok = (CrossingPart(1, 7, 1, True, False), CrossingPart(4, 3, 1, True, False))
    assert verify_crossing_order(CrossingReport(1, 2, ok))


def test_disconnected_cut_side_is_reported(c8):
    sub, _ = c8
    S = sub.sources
    dense = np.ones((sub.graph.n, 7), dtype=np.int8)
    dense[[S[1], S[5]], 0] = -1
    with pytest.raises(DisconnectedCutSide):
        make_cut(sub, pack_dense(dense, BINARY), 1)


def test_non_cycle_boundary_is_reported(c8):
    sub, _ = c8
    S = sub.sources
    members = np.zeros(sub.graph.n, dtype=bool)
    members[[S[1], S[5]]] = True
    with pytest.raises(NotASimpleCycle):
        extract_bisector(sub, Cut(1, members))


def test_cuts_need_binary_patterns(c4):
    from osmc.distances import TERNARY
    sub = subdivide(c4)
    with pytest.raises(ModeMismatch):
        make_cut(sub, compute_patterns(all_source_bfs(c4), TERNARY), 1)
