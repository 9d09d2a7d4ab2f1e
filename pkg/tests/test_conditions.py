import itertools
import random
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from cjmcheck import (
    SDPair,
    SDPairSet,
    SelfMap,
    all_self_maps,
    banach_strictly_contractive,
    classify_map,
    constant_map,
    cross_validate,
    epsgrid_oracle,
    global_pairs_banach,
    global_pairs_chatterjea,
    global_pairs_kannan,
    identity_map,
    min_chatterjea_alpha,
    min_chatterjea_alpha_grid,
    min_kannan_alpha,
    min_kannan_alpha_grid,
    picard_pairs_chatterjea,
    picard_pairs_kannan,
    random_map,
    random_space,
    satisfies_cm,
    satisfies_cm2,
    uniform_epsdelta_holds,
    unit_space,
)

GRID = [F(k, 100) for k in range(101)]
SWAP = SelfMap((1, 0))


def pair_set(values):
    return SDPairSet("test", tuple(SDPair(F(s), F(d), (0, 0)) for s, d in values))


class TestMinAlpha:
    def test_constant_map_alpha_zero(self):
        space = unit_space(3)
        assert min_kannan_alpha(space, constant_map(3, 0)) == 0
        assert min_chatterjea_alpha(space, constant_map(3, 0)) == 0

    def test_identity_not_kannan(self):
        assert min_kannan_alpha(unit_space(2), identity_map(2)) is None

    def test_swap_not_chatterjea(self):
        assert min_chatterjea_alpha(unit_space(2), SWAP) is None

    def test_swap_kannan_alpha_half(self):
        assert min_kannan_alpha(unit_space(2), SWAP) == F(1, 2)

    def test_quarter_rule_grid_alpha_exact_third(self):
        assert min_kannan_alpha_grid(GRID, lambda x: x / 4) == F(1, 3)

    def test_grid_alpha_against_brute_force(self):
        # independent ratio maximization, written out directly
        best_k = F(0)
        best_c = F(0)
        for x, y in itertools.combinations_with_replacement(GRID, 2):
            tx, ty = x / 4, y / 4
            num = abs(tx - ty)
            if num == 0:
                continue
            den_k = abs(x - tx) + abs(y - ty)
            den_c = abs(x - ty) + abs(y - tx)
            best_k = max(best_k, num / den_k)
            best_c = max(best_c, num / den_c)
        assert min_kannan_alpha_grid(GRID, lambda x: x / 4) == best_k == F(1, 3)
        assert min_chatterjea_alpha_grid(GRID, lambda x: x / 4) == best_c == F(1, 5)

    def test_single_point_space_everything_trivial(self):
        space = unit_space(1)
        assert min_kannan_alpha(space, identity_map(1)) == 0
        assert min_chatterjea_alpha(space, identity_map(1)) == 0
        assert satisfies_cm(space, identity_map(1)).holds
        assert satisfies_cm2(space, identity_map(1)).holds


class TestStrictConditions:
    def test_constant_map_satisfies_both(self):
        space = unit_space(3)
        assert satisfies_cm(space, constant_map(3, 1)).holds
        assert satisfies_cm2(space, constant_map(3, 1)).holds

    def test_identity_fails_with_witness(self):
        result = satisfies_cm(unit_space(2), identity_map(2))
        assert not result.holds and result.witness == (0, 1)
        result2 = satisfies_cm2(unit_space(2), identity_map(2))
        assert not result2.holds and result2.witness == (0, 1)

    def test_swap_fails_both(self):
        # equality 1 < (1+1)/2 is not strict; cm2 right side is 0
        assert not satisfies_cm(unit_space(2), SWAP).holds
        assert not satisfies_cm2(unit_space(2), SWAP).holds

    def test_banach_strict(self):
        assert banach_strictly_contractive(unit_space(3), constant_map(3, 0)).holds
        assert not banach_strictly_contractive(unit_space(2), SWAP).holds


class TestUniformEpsDelta:
    def test_holds_when_d_at_most_s(self):
        result = uniform_epsdelta_holds(pair_set([(2, 1), (3, 3)]))
        assert result.holds
        assert epsgrid_oracle(pair_set([(2, 1), (3, 3)]))

    def test_fails_with_midpoint_witness(self):
        result = uniform_epsdelta_holds(pair_set([(2, F(5, 2))]))
        assert not result.holds
        assert result.witness_eps == F(9, 4)
        assert not epsgrid_oracle(pair_set([(2, F(5, 2))]))

    def test_empty_set_vacuously_true(self):
        assert uniform_epsdelta_holds(pair_set([])).holds
        assert epsgrid_oracle(pair_set([]))

    def test_oracle_simple_cases(self):
        assert epsgrid_oracle(pair_set([(2, 1)]))
        assert not epsgrid_oracle(pair_set([(0, 1)]))

    def test_thousand_random_pair_sets_agree(self):
        rng = random.Random(2024)
        disagreements = 0
        for _ in range(1000):
            pairs = [
                (F(rng.randint(0, 12), rng.randint(1, 6)), F(rng.randint(0, 12), rng.randint(1, 6)))
                for _ in range(rng.randint(0, 8))
            ]
            ps = pair_set(pairs)
            if bool(uniform_epsdelta_holds(ps)) != epsgrid_oracle(ps):
                disagreements += 1
        assert disagreements == 0

    @given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_reduction_oracle_agreement_property(self, raw):
        ps = pair_set([(F(s, 4), F(d, 4)) for s, d in raw])
        assert bool(uniform_epsdelta_holds(ps)) == epsgrid_oracle(ps)

    def test_injectable_corruption_is_caught(self):
        def corrupted(pairs):
            class R:
                def __init__(self, holds):
                    self.holds = holds

                def __bool__(self):
                    return self.holds

            return R(all(p.d < p.s for p in pairs.pairs))

        agreed, culprit = cross_validate([pair_set([(1, 1)])], reduction=corrupted)
        assert not agreed and culprit is not None


class TestPairBuilders:
    def test_single_point_space(self):
        ps = global_pairs_kannan(unit_space(1), identity_map(1))
        assert ps.values() == [(F(0), F(0))]

    def test_constant_map_all_conclusions_zero(self):
        space = unit_space(3)
        for builder in (global_pairs_kannan, global_pairs_chatterjea):
            ps = builder(space, constant_map(3, 0))
            assert all(p.d == 0 for p in ps.pairs)
            assert uniform_epsdelta_holds(ps).holds

    def test_swap_chatterjea_contains_zero_one(self):
        # the cross-distance form degenerates on the 2-cycle: S = 0, D = 1
        ps = global_pairs_chatterjea(unit_space(2), SWAP)
        assert (F(0), F(1)) in ps.values()
        assert not uniform_epsdelta_holds(ps).holds
        psp = picard_pairs_chatterjea(unit_space(2), SWAP, 0)
        assert (F(0), F(1)) in psp.values()
        assert not uniform_epsdelta_holds(psp).holds

    def test_swap_kannan_orbit_pairs(self):
        # self-distance form keeps S = 1 on the 2-cycle, so it holds
        ps = picard_pairs_kannan(unit_space(2), SWAP, 0)
        assert sorted(ps.values()) == [(F(1), F(0)), (F(1), F(0)), (F(1), F(1))]
        assert uniform_epsdelta_holds(ps).holds

    def test_fixed_start_gives_single_zero_pair(self):
        ps = picard_pairs_kannan(unit_space(3), constant_map(3, 2), 2)
        assert ps.values() == [(F(0), F(0))]

    def test_banach_pairs(self):
        ps = global_pairs_banach(unit_space(2), SWAP)
        assert (F(1), F(1)) in ps.values()

    def test_picard_pairs_subset_of_global(self):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(1, 5)
            space = random_space(n, 8, seed=rng.randint(0, 10_000))
            tmap = random_map(n, rng)
            for global_b, picard_b in (
                (global_pairs_kannan, picard_pairs_kannan),
                (global_pairs_chatterjea, picard_pairs_chatterjea),
            ):
                global_values = set(global_b(space, tmap).values())
                for x0 in space.points():
                    assert set(picard_b(space, tmap, x0).values()) <= global_values


class TestImplications:
    def all_small_instances(self):
        for tmap in all_self_maps(2):
            yield unit_space(2), tmap
        for seed in range(10):
            space = random_space(3, 6, seed=seed)
            for tmap in all_self_maps(3):
                yield space, tmap

    def test_kannan_below_half_implies_cm(self):
        for space, tmap in self.all_small_instances():
            alpha = min_kannan_alpha(space, tmap)
            if alpha is not None and alpha < F(1, 2):
                assert satisfies_cm(space, tmap).holds, tmap.image

    def test_chatterjea_below_half_implies_cm2(self):
        for space, tmap in self.all_small_instances():
            alpha = min_chatterjea_alpha(space, tmap)
            if alpha is not None and alpha < F(1, 2):
                assert satisfies_cm2(space, tmap).holds, tmap.image

    def test_global_implies_picard_for_every_start(self):
        for space, tmap in self.all_small_instances():
            if uniform_epsdelta_holds(global_pairs_kannan(space, tmap)):
                for x0 in space.points():
                    assert uniform_epsdelta_holds(picard_pairs_kannan(space, tmap, x0))
            if uniform_epsdelta_holds(global_pairs_chatterjea(space, tmap)):
                for x0 in space.points():
                    assert uniform_epsdelta_holds(picard_pairs_chatterjea(space, tmap, x0))

    def test_cm_implies_picard_epsdelta(self):
        for space, tmap in self.all_small_instances():
            if satisfies_cm(space, tmap).holds:
                for x0 in space.points():
                    assert uniform_epsdelta_holds(picard_pairs_kannan(space, tmap, x0))

    def test_pair_sets_arising_from_instances_cross_validate(self):
        sets = []
        for space, tmap in self.all_small_instances():
            sets.append(global_pairs_kannan(space, tmap))
            sets.append(global_pairs_chatterjea(space, tmap))
            sets.append(picard_pairs_kannan(space, tmap, 0))
        agreed, culprit = cross_validate(sets)
        assert agreed, culprit


class TestClassifyMap:
    def test_two_point_census(self):
        space = unit_space(2)
        reports = {tmap.image: classify_map(space, tmap) for tmap in all_self_maps(2)}
        constants = [reports[(0, 0)], reports[(1, 1)]]
        assert all(r.cm and r.cm2 and r.is_kannan and r.is_chatterjea for r in constants)
        assert all(r.kannan_alpha == 0 for r in constants)
        ident = reports[(0, 1)]
        assert not ident.cm and not ident.cm2 and not ident.is_kannan and not ident.banach
        swap = reports[(1, 0)]
        assert not swap.cm and not swap.cm2 and not swap.is_kannan and not swap.is_chatterjea

    def test_flags_consistent_with_alphas(self):
        rng = random.Random(99)
        for _ in range(60):
            n = rng.randint(1, 4)
            space = random_space(n, 9, seed=rng.randint(0, 10_000))
            report = classify_map(space, random_map(n, rng))
            if report.kannan_alpha is not None and report.kannan_alpha < F(1, 2):
                assert report.cm
            if report.chatterjea_alpha is not None and report.chatterjea_alpha < F(1, 2):
                assert report.cm2

    def test_record_is_flat(self):
        record = classify_map(unit_space(2), SWAP).to_record()
        assert record["map"] == "1 0"
        assert record["kannan_alpha"] == "1/2"
        assert record["chatterjea_alpha"] == "none"
        assert all(isinstance(v, (str, bool)) for v in record.values())
