from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from cellprotect.detection import test_total_protection as check_protection
from cellprotect.graph import Orientation, suppressed_graph, total_graph
from cellprotect.npc import (
    GraphInstance,
    HittingSetInstance,
    exact_min_suppression_mixed,
    graph_instance_from_dict,
    graph_to_table,
    hitting_set_family,
    hitting_set_witness,
    min_sizes,
    reduce_hitting_set,
    refine,
    search_graph_instance,
    solve_hitting_set,
    verify_n1_n2,
)
from cellprotect.oracle import MIXED, GeneratorConfig, generate_table

HS1 = HittingSetInstance(("s1", "s2"), (frozenset({"s1"}), frozenset({"s1", "s2"})), 1)


class TestHittingSet:
    def test_hs1(self):
        assert solve_hitting_set(HS1) == {"s1"}

    def test_single_element(self):
        hs = HittingSetInstance(("s1",), (frozenset({"s1"}),), 1)
        assert solve_hitting_set(hs) == {"s1"}

    def test_two_singletons_exceed_budget(self):
        hs = HittingSetInstance(("s1", "s2"), (frozenset({"s1"}), frozenset({"s2"})), 1)
        assert solve_hitting_set(hs) is None

    def test_validation(self):
        with pytest.raises(ValueError):
            HittingSetInstance(("s1",), (), 0)
        with pytest.raises(ValueError):
            HittingSetInstance(("s1",), (frozenset({"s9"}),), 0)

    def test_json(self):
        hs = HittingSetInstance.parse('{"elements": ["s1", "s2"], "sets": [["s1"], ["s1", "s2"]], "budget": 1}')
        assert hs == HS1


class TestReduction:
    def test_hs1_counts(self):
        inst = reduce_hitting_set(HS1)
        assert (len(inst.a_labels), len(inst.b_labels), len(inst.suppressed), inst.budget) == (3, 3, 2, 4)

    def test_rule3_orientations(self):
        inst = reduce_hitting_set(HS1)
        o = inst.orientation
        assert o[(0, 0)] is Orientation.TOWARD_ROW  # b0 -> a0
        assert o[(0, 1)] is o[(0, 2)] is Orientation.TOWARD_COLUMN
        assert o[(1, 0)] is o[(2, 0)] is Orientation.TOWARD_COLUMN
        assert o[(1, 1)] is Orientation.TOWARD_ROW  # s1 in S1
        assert o[(2, 1)] is Orientation.TOWARD_COLUMN  # s2 not in S1
        assert o[(2, 2)] is Orientation.TOWARD_ROW

    def test_witness_satisfies_n1_n2(self):
        inst = reduce_hitting_set(HS1)
        p = hitting_set_witness(HS1, {"s1"})
        assert len(p) <= inst.budget
        assert verify_n1_n2(inst, p)

    def test_witness_needs_every_entering_edge(self):
        inst = reduce_hitting_set(HS1)
        p = hitting_set_witness(HS1, {"s1"})
        for e in [e for e in p if inst.orientation[e] is Orientation.TOWARD_ROW and e[0] > 0]:
            assert not verify_n1_n2(inst, p - {e})

    def test_empty_p_fails_n2(self):
        assert not verify_n1_n2(reduce_hitting_set(HS1), set())

    def test_p_must_avoid_e(self):
        with pytest.raises(ValueError):
            verify_n1_n2(reduce_hitting_set(HS1), {(0, 1)})

    def test_no_instance(self):
        hs = HittingSetInstance(("s1",), (frozenset({"s1"}),), 0)
        assert solve_hitting_set(hs) is None
        inst = reduce_hitting_set(hs)
        assert inst.budget == 2
        assert search_graph_instance(inst) is None
        cands = inst.candidates
        assert not any(verify_n1_n2(inst, p) for k in range(3) for p in combinations(cands, k))

    def test_hs1_search(self):
        p = search_graph_instance(reduce_hitting_set(HS1))
        assert p is not None and len(p) == 4

    def test_small_families_agree(self):
        # a quick slice of the exhaustive acceptance check
        for elements, family in hitting_set_family(2, 2):
            hit, p = min_sizes(elements, family, 2)
            for h in range(3):
                assert (hit is not None and hit <= h) == (p is not None and p <= h + len(family) + 1)


class TestGraphTable:
    def test_reduced_instance_table(self):
        inst = reduce_hitting_set(HS1)
        t = graph_to_table(inst)
        assert GraphInstance.from_table(t, inst.budget) == inst
        assert {e.cell for e in suppressed_graph(t).edges} == inst.suppressed

    def test_single_undirected_edge(self):
        inst = GraphInstance(("1",), ("a",), {(0, 0): Orientation.UNDIRECTED}, frozenset())
        t = graph_to_table(inst)
        assert t[(0, 0)].value == 1
        assert total_graph(t).edges[0].orientation is Orientation.UNDIRECTED

    def test_dict_round_trip(self):
        inst = reduce_hitting_set(HS1)
        d = inst.to_dict()
        assert d["suppressed"] == ["a0 -> b1", "a0 -> b2"]
        assert graph_instance_from_dict(d) == inst

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            GraphInstance(("1",), ("a", "b"), {(0, 0): Orientation.UNDIRECTED}, frozenset())


orientation_maps = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.tuples(
            st.just(r),
            st.just(c),
            st.lists(st.sampled_from(list(Orientation)), min_size=r * c, max_size=r * c),
            st.lists(st.booleans(), min_size=r * c, max_size=r * c),
        )
    )
)


def make_instance(spec):
    r, c, orients, hidden = spec
    pairs = [(i, j) for i in range(r) for j in range(c)]
    return GraphInstance(
        tuple(str(i + 1) for i in range(r)),
        tuple(chr(97 + j) for j in range(c)),
        dict(zip(pairs, orients)),
        frozenset(p for p, h in zip(pairs, hidden) if h),
    )


@settings(max_examples=200, deadline=None)
@given(orientation_maps)
def test_graph_to_table_round_trip(spec):
    inst = make_instance(spec)
    assert GraphInstance.from_table(graph_to_table(inst)) == inst


@settings(max_examples=150, deadline=None)
@given(orientation_maps, st.data())
def test_table_answer_matches_refined_n1_n2(spec, data):
    inst = make_instance(spec)
    t = graph_to_table(inst)
    cands = inst.candidates
    p = data.draw(st.sets(st.sampled_from(cands))) if cands else set()
    valid = check_protection(t.with_suppressed(p), sorted(inst.suppressed)).protected
    assert valid == verify_n1_n2(inst, refine(inst, p))


class TestMixedSearch:
    def test_fig3_budget_two(self, fig3):
        assert exact_min_suppression_mixed(fig3, fig3.suppressed_cells, 2) is None

    def test_tk22(self, tk22):
        plan = exact_min_suppression_mixed(tk22, tk22.suppressed_cells, 5)
        assert plan.size == 5 and plan.verified

    def test_already_protected(self, fig3):
        plan = exact_min_suppression_mixed(fig3, [(0, 0)], 0)
        assert plan.cells == ()

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**31))
    def test_plans_verify(self, seed):
        t = generate_table(GeneratorConfig(3, 3, 0.5, (0, 4), seed, MIXED, 0.4))
        q = t.suppressed_cells
        plan = exact_min_suppression_mixed(t, q)
        if plan is not None:
            assert check_protection(t.with_suppressed(plan.cells), q).protected
