from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosslayer.fixtures import crossing_pair, triangle_all_direct
from crosslayer.model import LightpathRouting, LogicalTopology, PhysicalTopology
from crosslayer.ordering import (
    Direction,
    Dominance,
    backward_sums,
    colex_compare,
    crossover_points,
    difference_sign,
    dominance_check,
    forward_sums,
    high_regime_bound,
    k_colex_degree,
    k_lex_degree,
    lex_compare,
    low_regime_bound,
    low_regime_bound_simple,
)
from crosslayer.reliability import cut_vector

from _oracle import brute_cut_vector, brute_failure, random_pair

LONG = (0, 3, 3, 1)  # Fixture B
DIRECT = (0, 0, 3, 1)  # every lightpath on its own fiber


def test_partial_sums():
    v = (0, 0, 12, 20, 15, 6, 1)
    assert forward_sums(v) == (0, 0, 12, 32, 47, 53, 54)
    assert backward_sums(v) == (1, 7, 22, 42, 54, 54, 54)


class TestLex:
    def test_first_difference_below(self):
        n = (0, 0, 0, 0, 20, 26, 1)
        m = (0, 0, 0, 9, 19, 30, 1)
        result = lex_compare(n, m)
        assert result.direction is Direction.FIRST_SMALLER
        assert result.first_diff == 3

    def test_equal(self):
        assert lex_compare(LONG, LONG).direction is Direction.EQUAL

    def test_fixture_b_pair(self):
        assert cut_vector(triangle_all_direct()).counts == DIRECT
        result = lex_compare(LONG, DIRECT)
        assert result.direction is Direction.SECOND_SMALLER
        assert result.first_diff == 1

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            lex_compare((0, 1), (0, 1, 1))


class TestDegree:
    def test_full_depth(self):
        assert k_lex_degree((0, 0, 1, 5), (0, 1, 0, 5)) == 3

    def test_depth_one(self):
        assert k_lex_degree((0, 0, 2, 1), (0, 1, 0, 1)) == 1

    def test_elementwise(self):
        assert k_lex_degree(DIRECT, LONG) == 3

    def test_requires_smaller_first(self):
        with pytest.raises(ValueError):
            k_lex_degree(LONG, DIRECT)

    def test_colex_by_reversal(self):
        n, m = (0, 0, 6, 4, 1), (0, 1, 2, 4, 1)
        assert k_colex_degree(m, n) == k_lex_degree(m[::-1], n[::-1])


class TestSimpleBound:
    def test_plug_in(self):
        n = [0] * 21
        m = [0] * 21
        m[3] = 9
        assert low_regime_bound_simple(n, m) == Fraction(36, 45600)

    def test_fixture_b_pair(self):
        assert low_regime_bound_simple(DIRECT, LONG) == Fraction(1, 3)

    def test_equal_vectors_rejected(self):
        with pytest.raises(ValueError):
            low_regime_bound_simple(LONG, LONG)

    def test_sound_on_fixture_pair(self):
        p0 = low_regime_bound_simple(DIRECT, LONG)
        for i in range(1, 101):
            assert difference_sign(DIRECT, LONG, p0 * Fraction(i, 100)) >= 0


class TestLowRegime:
    def test_elementwise_gives_half(self):
        result = low_regime_bound(DIRECT, LONG)
        assert result.p0 == Fraction(1, 2)
        assert result.degree == 3

    def test_partial_dominance_half(self):
        result = low_regime_bound((0, 0, 3, 1), (0, 2, 2, 1))
        assert result.p0 == Fraction(1, 2)
        for i in range(1, 1001):
            assert difference_sign((0, 0, 3, 1), (0, 2, 2, 1), Fraction(i, 2000)) >= 0

    def test_b_table(self):
        # F_M - F_N = p q^2 (q - 4p): the true crossover is p = 1/5
        n, m = (0, 0, 6, 4, 1), (0, 1, 2, 4, 1)
        result = low_regime_bound(n, m)
        assert result.degree == 1
        assert result.deltas == ((1, 1),)
        assert result.residuals == ((1, Fraction(2, 3)),)
        # B_1 = 1 / (4/2 + (2/3) * C(4,2) / 1)
        assert result.bounds == ((1, Fraction(1, 6)),)
        assert result.p0 == Fraction(1, 6)
        assert not result.promoted
        assert difference_sign(n, m, Fraction(1, 6)) > 0
        assert difference_sign(n, m, Fraction(1, 4)) < 0

    def test_zero_delta_term(self):
        # Delta_2 = 0 with a positive residual contributes B_2 = 0
        n, m = (0, 0, 2, 3, 1), (0, 1, 1, 2, 1)
        result = low_regime_bound(n, m)
        assert dict(result.deltas)[2] == 0
        assert dict(result.bounds)[2] == 0


class TestHighRegime:
    def test_elementwise_gives_half(self):
        result = high_regime_bound(DIRECT, LONG)
        assert result.p0 == Fraction(1, 2)
        assert result.order == "colex"

    def test_reversal_consistency(self):
        n, m = (1, 4, 6, 0, 0), (1, 4, 2, 1, 0)
        high = high_regime_bound(n, m)
        low = low_regime_bound(n[::-1], m[::-1])
        assert high.p0 == 1 - low.p0
        assert high.bounds == tuple((j, 1 - b) for j, b in low.bounds)

    def test_disjoint_single_lightpaths(self):
        # one logical link over a 2-hop or a 3-hop branch of the same graph
        physical = PhysicalTopology(
            ("s", "a", "b", "c", "t"), (("s", "a"), ("a", "t"), ("s", "b"), ("b", "c"), ("c", "t"))
        )
        logical = LogicalTopology(("s", "t"), (("s", "t"),))
        short = LightpathRouting.from_node_paths(physical, logical, [("s", "a", "t")])
        long = LightpathRouting.from_node_paths(physical, logical, [("s", "b", "c", "t")])
        vs, vl = cut_vector(short), cut_vector(long)
        assert colex_compare(vs, vl).direction is Direction.FIRST_SMALLER
        assert dominance_check(vs, vl).kind is Dominance.UNIFORM
        for i in range(1, 100):
            assert difference_sign(vs, vl, Fraction(i, 100)) >= 0

    def test_appendix_reading_on_crossing_pair(self):
        disjoint, shared = (cut_vector(r) for r in crossing_pair())
        result = high_regime_bound(shared, disjoint)
        assert result.p0 == Fraction(15, 17)
        # min C_j over the window is 15/17; taking the complement instead would give 2/17
        literal = 1 - max(Fraction(1, 2), min(c for _, c in result.bounds))
        assert literal == Fraction(2, 17)
        assert difference_sign(shared, disjoint, Fraction(1, 5)) < 0  # literal reading is unsound here
        for i in range(0, 1001):
            p = result.p0 + (1 - result.p0) * Fraction(i, 1000)
            assert difference_sign(shared, disjoint, p) >= 0


class TestDominance:
    def test_fixture_b_pair(self):
        report = dominance_check(DIRECT, LONG)
        assert report.kind is Dominance.UNIFORM
        assert report.winner == 0

    def test_equal(self):
        report = dominance_check(LONG, LONG)
        assert report.kind is Dominance.UNIFORM
        assert report.winner is None

    def test_crossing_pair(self):
        disjoint, shared = (cut_vector(r) for r in crossing_pair())
        report = dominance_check(disjoint, shared)
        assert report.kind is Dominance.INCOMPARABLE
        assert report.lex.direction is Direction.FIRST_SMALLER
        assert report.colex.direction is Direction.SECOND_SMALLER
        assert difference_sign(disjoint, shared, Fraction(1, 10)) > 0
        assert difference_sign(disjoint, shared, Fraction(9, 10)) < 0

    def test_both_partial(self):
        # forward and backward partial sums dominate, elementwise does not
        n, m = (0, 0, 1, 0, 1), (0, 1, 0, 1, 1)
        report = dominance_check(n, m)
        assert report.kind is Dominance.BOTH_PARTIAL
        for i in range(1, 100):
            assert difference_sign(n, m, Fraction(i, 100)) >= 0

    def test_low_regime_only(self):
        n, m = (0, 0, 2, 0, 1), (0, 2, 0, 1, 1)
        report = dominance_check(n, m)
        assert report.kind is Dominance.LOW_REGIME
        assert report.winner == 0
        for i in range(1, 51):
            assert difference_sign(n, m, Fraction(i, 100)) >= 0

    def test_high_regime_only(self):
        n, m = (0, 0, 2, 0, 1), (0, 1, 0, 2, 1)
        report = dominance_check(n, m)
        assert report.kind is Dominance.HIGH_REGIME
        assert report.winner == 0
        for i in range(50, 100):
            assert difference_sign(n, m, Fraction(i, 100)) >= 0

    def test_same_winner_without_partial_sums(self):
        n, m = (0, 0, 2, 0, 1), (0, 1, 0, 1, 1)
        report = dominance_check(n, m)
        assert report.kind is Dominance.INCOMPARABLE
        assert report.winner == 0

    def test_lex_colex_disagree(self):
        report = dominance_check((0, 0, 3, 1), (0, 2, 2, 1))
        assert report.kind is Dominance.INCOMPARABLE
        assert report.winner is None


def test_crossover_root():
    disjoint, shared = (cut_vector(r) for r in crossing_pair())
    roots = crossover_points(disjoint, shared)
    assert len(roots) == 1
    assert roots[0] == pytest.approx((3 - math.sqrt(3)) / 2, abs=1e-12)


def test_difference_sign_matches_rationals():
    n, m = (0, 0, 6, 4, 1), (0, 1, 2, 4, 1)
    for i in range(1, 20):
        p = Fraction(i, 20)
        diff = brute_failure(m, p) - brute_failure(n, p)
        assert difference_sign(n, m, p) == (diff > 0) - (diff < 0)


def _lex_ordered(rng):
    while True:
        r1, r2 = random_pair(rng, max_m=8)
        a, b = brute_cut_vector(r1), brute_cut_vector(r2)
        if a != b:
            return (a, b) if lex_compare(a, b).direction is Direction.FIRST_SMALLER else (b, a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_regime_bounds_sound(seed):
    a, b = _lex_ordered(random.Random(seed))
    simple = low_regime_bound_simple(a, b)
    low = low_regime_bound(a, b).p0
    assert 0 < simple and 0 <= low <= Fraction(1, 2)
    for i in range(1, 51):
        assert difference_sign(a, b, simple * Fraction(i, 50)) >= 0
        assert difference_sign(a, b, low * Fraction(i, 50)) >= 0
    ca, cb = (a, b) if colex_compare(a, b).direction is Direction.FIRST_SMALLER else (b, a)
    if ca != cb:
        high = high_regime_bound(ca, cb).p0
        assert Fraction(1, 2) <= high <= 1
        for i in range(0, 50):
            assert difference_sign(ca, cb, high + (1 - high) * Fraction(i, 50)) >= 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_mclc_and_mclst_dominance(seed):
    a, b = _lex_ordered(random.Random(seed))
    da = next(i for i, n in enumerate(a) if n)
    db = next(i for i, n in enumerate(b) if n)
    if da > db:
        p0 = low_regime_bound_simple(a, b)
        assert difference_sign(a, b, p0 / 2) > 0
    m = len(a) - 1
    ca = max(i for i, n in enumerate(a) if n < math.comb(m, i))
    cb = max(i for i, n in enumerate(b) if n < math.comb(m, i))
    if ca != cb:
        # larger colex_c means a smaller MCLST
        x, y = (a, b) if ca > cb else (b, a)
        high = high_regime_bound(x, y).p0
        assert difference_sign(x, y, (1 + high) / 2) > 0
