from fractions import Fraction as F

import pytest

import cjmcheck.sequences as seqmod
from cjmcheck import (
    ConsistencyError,
    HypothesisError,
    SelfMap,
    TestSequence,
    all_self_maps,
    cond_i,
    cond_ii,
    cond_iii,
    cond_iv,
    cond_v,
    constant_map,
    gap_conditions,
    random_space,
    satisfies_cm,
    seq_epsgrid_oracle,
    unit_space,
    verify_lemma1,
)

HALVING = TestSequence.geometric(0, 1, F(1, 2))
QUARTERING = TestSequence.geometric(0, 1, F(1, 4))
SHIFTED = TestSequence.geometric(F(1, 2), 1, F(1, 2))

ACCEPTANCE_FAMILY = [
    TestSequence.geometric(a, c, r)
    for a in (F(0), F(1, 2))
    for c in (F(1), F(1, 2))
    for r in (F(1, 2), F(1, 4))
]


class TestTestSequence:
    def test_terms_of_halving(self):
        assert HALVING.terms(3) == [F(1, 2), F(1, 4), F(1, 8)]
        assert SHIFTED.term(2) == F(3, 4)

    def test_validation(self):
        with pytest.raises(ValueError):
            TestSequence.geometric(0, 1, 1)  # ratio must be < 1
        with pytest.raises(ValueError):
            TestSequence.geometric(0, 0, F(1, 2))
        with pytest.raises(ValueError):
            TestSequence.geometric(-1, 1, F(1, 2))

    def test_list_validation(self):
        with pytest.raises(ValueError):
            TestSequence.from_list([F(1), F(1)], 0)
        with pytest.raises(ValueError):
            TestSequence.from_list([F(1), F(1, 2)], F(1, 2))
        seq = TestSequence.from_list([F(1), F(1, 2)], 0)
        assert not seq.closed_form and seq.term(2) == F(1, 2)

    def test_term_membership_closed_form(self):
        assert HALVING.is_term_value(F(1, 8)) is True
        assert HALVING.is_term_value(F(1, 3)) is False
        assert HALVING.is_term_value(F(2)) is False
        assert SHIFTED.is_term_value(F(1, 2) + F(1, 32)) is True

    def test_term_membership_list_ambiguity(self):
        seq = TestSequence.from_list([F(1), F(1, 2)], 0)
        assert seq.is_term_value(F(1)) is True
        assert seq.is_term_value(F(2)) is False
        assert seq.is_term_value(F(1, 4)) is None  # could be a later term


class TestConditions:
    def test_cond_i(self):
        assert cond_i(HALVING)
        assert not cond_i(SHIFTED)
        assert cond_i(QUARTERING)

    def test_cond_ii_across_shifts(self):
        for k in (0, 1, 2, 5):
            assert cond_ii(HALVING, k)
            assert cond_ii(QUARTERING, k)
            assert not cond_ii(SHIFTED, k)

    def test_cond_iii_across_shifts(self):
        for k in (1, 2, 5):
            assert cond_iii(HALVING, k)
            assert not cond_iii(SHIFTED, k)

    def test_cond_iv(self):
        assert cond_iv(HALVING)
        assert cond_iv(QUARTERING)
        assert not cond_iv(SHIFTED)

    def test_cond_v_false_everywhere(self):
        for seq in ACCEPTANCE_FAMILY:
            assert not cond_v(seq)

    def test_shift_validation(self):
        with pytest.raises(ValueError):
            cond_ii(HALVING, -1)
        with pytest.raises(ValueError):
            cond_iii(HALVING, 0)


class TestOracle:
    def test_direct_verdicts(self):
        assert seq_epsgrid_oracle(HALVING, ("ii", 0), n_terms=40).holds
        assert not seq_epsgrid_oracle(SHIFTED, ("ii", 0)).holds
        assert not seq_epsgrid_oracle(HALVING, ("v",)).holds
        assert seq_epsgrid_oracle(HALVING, ("iv",)).holds
        assert not seq_epsgrid_oracle(SHIFTED, ("iv",)).holds

    def test_agreement_with_decision_procedures(self):
        for seq in ACCEPTANCE_FAMILY:
            expected = seq.limit == 0
            for k in (0, 1, 2, 5):
                assert seq_epsgrid_oracle(seq, ("ii", k)).holds == expected
                if k >= 1:
                    assert seq_epsgrid_oracle(seq, ("iii", k)).holds == expected
            assert seq_epsgrid_oracle(seq, ("iv",)).holds == expected
            assert not seq_epsgrid_oracle(seq, ("v",)).holds

    def test_closed_forms_not_horizon_limited(self):
        assert not seq_epsgrid_oracle(HALVING, ("ii", 0)).horizon_limited

    def test_explicit_lists_horizon_limited(self):
        seq = TestSequence.from_list([F(1), F(1, 2), F(1, 4)], 0)
        verdict = seq_epsgrid_oracle(seq, ("ii", 0))
        assert verdict.holds and verdict.horizon_limited

    def test_unknown_form_rejected(self):
        with pytest.raises(ValueError):
            seq_epsgrid_oracle(HALVING, ("vi",))

    def test_disagreement_is_surfaced(self, monkeypatch):
        from cjmcheck.sequences import OracleVerdict

        monkeypatch.setattr(seqmod, "seq_epsgrid_oracle", lambda *a, **k: OracleVerdict(False))
        with pytest.raises(ConsistencyError):
            seqmod.cond_ii(HALVING, 0)


class TestVerifyLemma1:
    def test_reference_family(self):
        report = verify_lemma1([HALVING, QUARTERING, SHIFTED])
        assert report.ok
        assert report.strictness_witnessed
        assert report.strictness_witness == HALVING.label()

    def test_empty_family_vacuous(self):
        report = verify_lemma1([])
        assert report.ok and not report.strictness_witnessed

    def test_positive_limit_family_unwitnessed(self):
        report = verify_lemma1([SHIFTED, TestSequence.geometric(F(1, 2), F(1, 2), F(1, 4))])
        assert report.ok
        assert not report.strictness_witnessed
        assert all(not row.i and not row.iv for row in report.rows)

    def test_acceptance_family_structure(self):
        report = verify_lemma1(ACCEPTANCE_FAMILY)
        assert report.ok and report.strictness_witnessed
        for row in report.rows:
            flags = row.equivalence_class()
            assert all(flag == flags[0] for flag in flags)
            assert not row.v


class TestGapConditions:
    def test_constant_map_all_true(self):
        verdicts = gap_conditions(unit_space(3), constant_map(3, 1), 0)
        assert verdicts.all_true()
        assert verdicts.gap_prefix == ()

    def test_start_at_fixed_point(self):
        verdicts = gap_conditions(unit_space(3), constant_map(3, 1), 1)
        assert verdicts.all_true()

    def test_hypothesis_violation_raises(self):
        with pytest.raises(HypothesisError):
            gap_conditions(unit_space(2), SelfMap((1, 0)), 0)

    def test_every_cm_instance_all_true(self):
        for seed in range(6):
            space = random_space(3, 6, seed=seed)
            for tmap in all_self_maps(3):
                if not satisfies_cm(space, tmap).holds:
                    continue
                for x0 in space.points():
                    assert gap_conditions(space, tmap, x0).all_true()
