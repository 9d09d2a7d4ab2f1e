"""Exact fixed-point condition checking for Kannan/Chatterjea-type maps.

Finite metric spaces with rational distances, contraction-condition
predicates decided exactly, Picard iteration diagnostics, epsilon-delta
condition checkers with an independent oracle, sequence-condition
decision procedures, and brute-force theorem verification sweeps.
"""

from .conditions import (
    ConditionReport,
    EpsDeltaResult,
    SDPair,
    SDPairSet,
    StrictResult,
    banach_strictly_contractive,
    classify_map,
    cross_validate,
    epsgrid_oracle,
    global_pairs_banach,
    global_pairs_chatterjea,
    global_pairs_kannan,
    min_chatterjea_alpha,
    min_chatterjea_alpha_grid,
    min_kannan_alpha,
    min_kannan_alpha_grid,
    picard_pairs_chatterjea,
    picard_pairs_kannan,
    satisfies_cm,
    satisfies_cm2,
    uniform_epsdelta_holds,
)
from .metric import (
    CycleTerminal,
    FiniteMetricSpace,
    FixedPointTerminal,
    GapSequence,
    MetricViolation,
    Orbit,
    SelfMap,
    TruncatedTerminal,
    ValidationReport,
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
from .picard import (
    FIXTURES,
    ContinuousFixture,
    DomainError,
    FixedPointResult,
    Interval,
    MarginResult,
    MarginStatus,
    SolveStatus,
    detect_fixed_points,
    get_fixture,
    margin_epsdelta,
    solve,
    solve_finite,
    solve_fixture,
    verify_strict_decrease,
)
from .sequences import (
    ConsistencyError,
    GapConditionVerdicts,
    HypothesisError,
    Lemma1Report,
    OracleVerdict,
    TestSequence,
    cond_i,
    cond_ii,
    cond_iii,
    cond_iv,
    cond_v,
    evaluate_sequence,
    gap_conditions,
    seq_epsgrid_oracle,
    verify_lemma1,
)
from .serialize import (
    ParseError,
    dumps_json,
    dumps_text,
    instance_text,
    loads_json,
    loads_text,
)
from .verifier import (
    THEOREM_CHECKS,
    THEOREM_IDS,
    CompletenessDemo,
    Finding,
    Findings,
    SweepConfig,
    SweepResult,
    VerificationOutcome,
    Violation,
    completeness_necessity_demo,
    restrict_instance,
    run_sweep,
    search_counterexample,
    verify_thm_2_1,
    verify_thm_3_1,
    verify_thm_4_1,
    verify_thm_4_2,
    verify_thm_5_2,
)

__version__ = "0.1.0"
