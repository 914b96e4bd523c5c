from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosslayer.errors import EnumerationLimitError, ModelError
from crosslayer.fixtures import (
    fixture_a,
    fixture_b,
    fixture_b_direct,
    single_lightpath,
    staged_reroute,
    triangle_all_direct,
)
from crosslayer.model import NetworkState, PhysicalPath, is_cross_layer_cut
from crosslayer.reliability import count_cuts_of_size, cut_vector, mclc
from crosslayer.rerouting import (
    best_reroute,
    classify_states,
    cut_to_noncut,
    exact_reroute_oracle,
    iterative_reroute,
    k_shortest_paths,
    noncut_to_cut,
    possible_paths,
    reroute_sp,
    reroute_weighting,
)

from _oracle import random_instance


def path(routing, *nodes):
    return PhysicalPath.from_nodes(routing.physical, nodes)


class TestClassification:
    def test_fixture_b(self):
        c = classify_states(fixture_b())
        assert c.d == 1
        assert sorted(c.cuts_d) == [0b001, 0b010, 0b100]
        assert c.multiway_cuts_d == ()
        assert c.noncuts_d == ()
        assert c.noncuts_dm1 == (0,)

    def test_fixture_a(self):
        c = classify_states(fixture_a())
        assert (c.d, len(c.cuts_d), len(c.noncuts_d), len(c.noncuts_dm1)) == (2, 12, 3, 6)
        assert c.n_d == 12

    def test_single_edge(self):
        c = classify_states(single_lightpath(2))
        assert c.noncuts_dm1 == (0,)
        assert c.critical[0] == frozenset({0})
        assert c.noncuts_dm1_for(0) == (0,)

    def test_per_link_sets(self):
        b = fixture_b()
        c = classify_states(b)
        # L01 joins v0 and v1; {e01} isolates v2 and cannot be repaired by moving L01
        assert sorted(c.fixable_cuts(0)) == [0b010, 0b100]
        assert c.persistent_cuts(0) == (0b001,)


class TestPredicates:
    def test_cut_to_noncut_example(self):
        b = fixture_b()
        new = path(b, "v1", "v2")
        assert cut_to_noncut(b, NetworkState.of([0], 3), 1, new)
        assert not is_cross_layer_cut(b.with_route(1, new), NetworkState.of([0], 3))

    def test_cut_to_noncut_path_hits_state(self):
        b = fixture_b()
        assert not cut_to_noncut(b, NetworkState.of([0], 3), 1, path(b, "v1", "v0", "v2"))

    def test_three_way_never_repaired(self):
        a = fixture_a()
        s = NetworkState.of([0, 2, 4], 6)
        for q in possible_paths(a, 0):
            assert not cut_to_noncut(a, s, 0, q)

    def test_noncut_to_cut_example(self):
        a = fixture_a()
        t = NetworkState.of([0, 1], 6)
        crossing = path(a, "v2", "v1", "v0", "v5", "v4")
        assert noncut_to_cut(a, t, 1, crossing)
        assert is_cross_layer_cut(a.with_route(1, crossing), t)

    def test_noncut_to_cut_not_critical(self):
        a = fixture_a()
        t = NetworkState.of([0], 6)  # residual is a path; L02 is dead, not critical
        assert not noncut_to_cut(a, t, 0, path(a, "v0", "v5", "v4", "v3", "v2"))

    def test_noncut_to_cut_disjoint_path(self):
        a = fixture_a()
        assert not noncut_to_cut(a, NetworkState.of([0, 1], 6), 1, path(a, "v2", "v3", "v4"))


class TestRerouteSp:
    def test_fixture_b_long_way(self):
        b = fixture_b()
        plan = reroute_sp(b, 0, k=10)
        assert plan.new_path.nodes == ("v0", "v1")
        assert (plan.nd_before, plan.nd_after) == (3, 1)
        assert plan.cut_vector.counts == (0, 1, 3, 1)
        assert plan.mclc_after == (1, 1)

    def test_optimal_route_unchanged(self):
        plan = reroute_sp(fixture_b_direct(), 0, k=10)
        assert not plan.changed
        assert plan.delta_nd == 0

    def test_weighting(self):
        w = reroute_weighting(classify_states(fixture_b()), 0)
        assert w.forbidden == 0
        assert w.offset == 1
        assert w.weights == (0, 1, 1)

    def test_forbidden_links(self):
        a = fixture_a()
        w = reroute_weighting(classify_states(a), 0)
        # size-1 failures on the other two arcs leave L02 as a bridge
        assert w.forbidden == 0b111100

    def test_bad_index(self):
        with pytest.raises(ModelError):
            reroute_sp(fixture_b(), 7)

    def test_k_shortest(self):
        b = fixture_b()
        paths = k_shortest_paths(b.physical, "v0", "v1", 5)
        assert [q.nodes for q in paths] == [("v0", "v1"), ("v0", "v2", "v1")]
        with pytest.raises(ValueError):
            k_shortest_paths(b.physical, "v0", "v1", 0)


class TestExactOracle:
    def test_fixture_b(self):
        plan = exact_reroute_oracle(fixture_b(), 0)
        assert plan.new_path.nodes == ("v0", "v1")
        assert plan.cut_vector.counts == (0, 1, 3, 1)

    def test_local_optimum(self):
        r = fixture_b_direct()
        for lp in range(3):
            plan = exact_reroute_oracle(r, lp)
            assert plan.nd_after >= 1
            assert plan.delta_nd == 0

    def test_no_alternative(self):
        r = single_lightpath(3)
        plan = exact_reroute_oracle(r, 0)
        assert not plan.changed
        assert best_reroute(r).delta_nd == 0

    def test_budget(self):
        with pytest.raises(EnumerationLimitError):
            exact_reroute_oracle(staged_reroute(), 0, path_budget=2)


class TestIterative:
    def test_fixture_b_trajectory(self):
        for method in ("sp", "exact"):
            trace = iterative_reroute(fixture_b(), method=method)
            assert [(s.d, s.nd) for s in trace.steps] == [(1, 3), (1, 1)]
            assert cut_vector(trace.routing).counts == (0, 1, 3, 1)

    def test_uniformly_optimal_start(self):
        trace = iterative_reroute(triangle_all_direct())
        assert trace.iterations == 0

    def test_staged_trajectory(self):
        r = staged_reroute()
        for method, k in (("sp", 1), ("sp", 100), ("exact", 1)):
            trace = iterative_reroute(r, k=k, method=method)
            assert [(s.d, s.nd) for s in trace.steps] == [(1, 3), (1, 1), (2, 5), (2, 3)]
        assert [s.lp for s in trace.steps] == [None, 2, 0, 1]

    def test_max_iterations(self):
        trace = iterative_reroute(staged_reroute(), max_iterations=1)
        assert trace.iterations == 1

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            best_reroute(fixture_b(), method="anneal")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_sp_prediction_and_approximation(seed):
    r = random_instance(random.Random(seed), max_m=9)
    d, _ = mclc(r)
    cls = classify_states(r)
    for lp in range(len(r.routes)):
        sp = reroute_sp(r, lp, 1, cls)
        exact = exact_reroute_oracle(r, lp)
        assert count_cuts_of_size(sp.routing, d) == sp.nd_after
        assert mclc(sp.routing)[0] >= d
        assert sp.nd_after <= d * exact.nd_after
        assert not sp.new_path.mask & reroute_weighting(cls, lp).forbidden


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31))
def test_iterative_improves_strictly(seed):
    r = random_instance(random.Random(seed), max_m=9)
    trace = iterative_reroute(r)
    keys = [(-s.d, s.nd) for s in trace.steps]
    assert all(a > b for a, b in zip(keys, keys[1:]))
    assert mclc(trace.routing) == (trace.steps[-1].d, trace.steps[-1].nd)
