import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cjmcheck import (
    CycleTerminal,
    FiniteMetricSpace,
    FixedPointTerminal,
    SelfMap,
    TruncatedTerminal,
    all_self_maps,
    constant_map,
    gap_sequence,
    identity_map,
    metric_repair,
    orbit,
    random_map,
    random_space,
    unit_space,
    validate_metric,
)


def brute_shortest_paths(rows):
    """Independent oracle: min edge-sum over all simple paths."""
    n = len(rows)
    best = [[None] * n for _ in range(n)]
    for i in range(n):
        best[i][i] = F(0)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            candidates = []
            others = [k for k in range(n) if k not in (i, j)]
            for r in range(len(others) + 1):
                for mid in itertools.permutations(others, r):
                    path = (i, *mid, j)
                    candidates.append(sum(rows[a][b] for a, b in zip(path, path[1:])))
            best[i][j] = min(candidates)
    return best


class TestValidateMetric:
    def test_path_metric_ok(self):
        report = validate_metric([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        assert report.ok and not report.violations

    def test_triangle_violation_with_witness(self):
        report = validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert not report.ok
        assert any(v.axiom == "triangle" and set(v.witness) == {0, 1, 2} for v in report.violations)

    def test_all_zeros_breaks_positivity(self):
        report = validate_metric([[0, 0], [0, 0]])
        assert not report.ok
        assert report.violations[0].axiom == "positivity"
        assert report.violations[0].witness == (0, 1)

    def test_non_square_raises(self):
        with pytest.raises(ValueError, match="square"):
            validate_metric([[0, 1], [1, 0], [2, 2]])

    def test_asymmetry_detected(self):
        report = validate_metric([[0, 1], [2, 0]])
        assert any(v.axiom == "symmetry" for v in report.violations)


class TestMetricRepair:
    def test_shortcut_applied(self):
        space = metric_repair([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert space.d(0, 2) == 2

    def test_longer_shortcut(self):
        space = metric_repair([[0, 3, 10], [3, 0, 4], [10, 4, 0]])
        assert space.d(0, 2) == 7

    def test_idempotent_on_metrics(self):
        rows = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
        space = metric_repair(rows)
        assert space.dist == tuple(tuple(F(x) for x in row) for row in rows)

    def test_rejects_zero_off_diagonal(self):
        with pytest.raises(ValueError, match="> 0"):
            metric_repair([[0, 0], [0, 0]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            metric_repair([[0, 1], [2, 0]])

    @given(st.integers(2, 5), st.data())
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force_and_never_increases(self, n, data):
        rows = [[F(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = F(data.draw(st.integers(1, 9), label=f"d({i},{j})"))
                rows[i][j] = rows[j][i] = v
        space = metric_repair(rows)
        expected = brute_shortest_paths(rows)
        for i in range(n):
            for j in range(n):
                assert space.d(i, j) == expected[i][j]
                assert space.d(i, j) <= rows[i][j] or i == j
        assert validate_metric(space.dist).ok
        again = metric_repair(space.dist)
        assert again.dist == space.dist


class TestRandomSpace:
    def test_single_point(self):
        space = random_space(1, 10, seed=3)
        assert space.n == 1 and space.d(0, 0) == 0

    def test_deterministic_in_seed(self):
        assert random_space(5, 10, seed=7).dist == random_space(5, 10, seed=7).dist

    def test_different_seeds_differ(self):
        tables = {random_space(5, 10, seed=s).dist for s in range(20)}
        assert len(tables) > 1

    def test_thousand_seeded_instances_are_valid(self):
        for seed in range(1000):
            space = random_space(4, 12, seed=seed)
            assert validate_metric(space.dist).ok

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            random_space(0, 10, seed=1)
        with pytest.raises(ValueError):
            random_space(3, 0, seed=1)


class TestSelfMap:
    def test_rejects_out_of_range_image(self):
        with pytest.raises(ValueError):
            SelfMap((0, 3))

    def test_enumeration_count(self):
        assert len(list(all_self_maps(3))) == 27


class TestOrbit:
    def test_constant_map_fixes_quickly(self):
        space = unit_space(3)
        orb = orbit(space, constant_map(3, 1), 0)
        assert orb.terminal == FixedPointTerminal(1)
        orb2 = orbit(space, constant_map(3, 1), 1)
        assert orb2.terminal == FixedPointTerminal(0)

    def test_swap_map_cycles(self):
        space = unit_space(2)
        for start in (0, 1):
            orb = orbit(space, SelfMap((1, 0)), start)
            assert orb.terminal == CycleTerminal(entry=0, period=2)

    def test_truncation_when_budget_too_small(self):
        orb = orbit(unit_space(2), SelfMap((1, 0)), 0, max_steps=1)
        assert orb.terminal == TruncatedTerminal(1)

    @given(st.integers(2, 6), st.integers(0, 10_000))
    @settings(max_examples=80, deadline=None)
    def test_each_step_applies_the_map(self, n, seed):
        import random as _random

        space = unit_space(n)
        tmap = random_map(n, _random.Random(seed))
        orb = orbit(space, tmap, seed % n)
        for a, b in zip(orb.points, orb.points[1:]):
            assert tmap(a) == b

    @given(st.integers(1, 6), st.integers(0, 10_000))
    @settings(max_examples=80, deadline=None)
    def test_never_truncated_with_double_budget(self, n, seed):
        import random as _random

        space = unit_space(n)
        tmap = random_map(n, _random.Random(seed))
        orb = orbit(space, tmap, seed % n, max_steps=2 * n)
        assert not isinstance(orb.terminal, TruncatedTerminal)

    def test_gap_sequence_zero_exactly_at_fixed_point(self):
        space = unit_space(3)
        orb = orbit(space, constant_map(3, 2), 0)
        gaps = gap_sequence(space, orb)
        assert gaps.gaps == (F(1), F(0))
        assert gaps.reaches_zero() and gaps.first_zero() == 1

    def test_distinct_states(self):
        space = unit_space(2)
        orb = orbit(space, SelfMap((1, 0)), 0)
        assert orb.distinct_states() == (0, 1)
        orb2 = orbit(space, identity_map(2), 1)
        assert orb2.distinct_states() == (1,)
