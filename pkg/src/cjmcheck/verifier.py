"""Exhaustive and randomized verification sweeps over finite instances.

Each named claim is checked instance by instance: when the hypothesis
fails the instance counts as vacuous (so census data distinguishes
"nothing to check" from "checked and passed"), otherwise the conclusion
must hold exactly. Every finite metric space is complete, which is why
the completeness side of the story needs the punctured-interval fixture
demo rather than a finite instance.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .conditions import (
    SDPairSet,
    epsgrid_oracle,
    global_pairs_chatterjea,
    global_pairs_kannan,
    min_chatterjea_alpha,
    min_kannan_alpha,
    picard_pairs_chatterjea,
    picard_pairs_kannan,
    satisfies_cm,
    satisfies_cm2,
    uniform_epsdelta_holds,
)
from .metric import (
    FiniteMetricSpace,
    SelfMap,
    all_self_maps,
    gap_sequence,
    orbit,
    random_map,
    random_space,
    unit_space,
    validate_metric,
)
from .picard import (
    MarginResult,
    SolveStatus,
    detect_fixed_points,
    get_fixture,
    margin_epsdelta,
    solve_fixture,
    verify_strict_decrease,
)
from .serialize import instance_text

THEOREM_IDS = ("2.1", "3.1", "4.1", "4.2", "5.2")

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SweepConfig:
    mode: str  # "exhaustive" | "random"
    ns: tuple[int, ...]
    trials: int = 0
    seed: int = 0
    max_distance: int = 10
    pool_size: int = 50
    theorems: tuple[str, ...] = THEOREM_IDS

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        if any(n < 1 for n in self.ns):
            raise ValueError("point counts must be >= 1")
        if self.mode == "exhaustive" and max(self.ns, default=1) > 4:
            raise ValueError("exhaustive sweeps are capped at 4 points (n^n maps)")
        if self.mode == "random" and self.trials < 0:
            raise ValueError("trials must be >= 0")
        unknown = set(self.theorems) - set(THEOREM_IDS)
        if unknown:
            raise ValueError(f"unknown theorem ids: {sorted(unknown)}")


@dataclass(frozen=True)
class Violation:
    theorem: str
    clause: str
    instance: str  # reloadable text serialization of (space, map)
    detail: str


@dataclass
class VerificationOutcome:
    theorem: str
    checked: int = 0
    hypothesis_holds: int = 0
    vacuous: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def absorb(self, other: "VerificationOutcome") -> None:
        assert other.theorem == self.theorem
        self.checked += other.checked
        self.hypothesis_holds += other.hypothesis_holds
        self.vacuous += other.vacuous
        self.violations.extend(other.violations)


class _InstanceFacts:
    """Lazily shared per-instance computations for the theorem checkers."""

    def __init__(self, space: FiniteMetricSpace, tmap: SelfMap):
        self.space = space
        self.tmap = tmap
        self._cache: dict[str, object] = {}

    def _get(self, key: str, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    @property
    def cm(self) -> bool:
        return self._get("cm", lambda: bool(satisfies_cm(self.space, self.tmap)))

    @property
    def cm2(self) -> bool:
        return self._get("cm2", lambda: bool(satisfies_cm2(self.space, self.tmap)))

    @property
    def fixed_points(self) -> tuple[int, ...]:
        return self._get("fp", lambda: detect_fixed_points(self.space, self.tmap))

    @property
    def orbits(self):
        return self._get(
            "orbits",
            lambda: tuple(orbit(self.space, self.tmap, x0) for x0 in self.space.points()),
        )

    @property
    def unique_fp_and_all_orbits_reach_it(self) -> bool:
        def compute() -> bool:
            fps = self.fixed_points
            if len(fps) != 1:
                return False
            target = fps[0]
            return all(
                orb.reached_fixed_point and orb.final_point() == target for orb in self.orbits
            )

        return self._get("concl", compute)

    @property
    def all_gaps_reach_zero(self) -> bool:
        return self._get(
            "gaps0",
            lambda: all(
                gap_sequence(self.space, orb).reaches_zero() for orb in self.orbits
            ),
        )

    def pair_sets(self) -> tuple[SDPairSet, ...]:
        def compute() -> tuple[SDPairSet, ...]:
            sets = [
                global_pairs_kannan(self.space, self.tmap),
                global_pairs_chatterjea(self.space, self.tmap),
            ]
            for x0 in self.space.points():
                sets.append(picard_pairs_kannan(self.space, self.tmap, x0))
                sets.append(picard_pairs_chatterjea(self.space, self.tmap, x0))
            return tuple(sets)

        return self._get("pair_sets", compute)

    @property
    def global_kannan_ok(self) -> bool:
        return self._get(
            "gk", lambda: bool(uniform_epsdelta_holds(global_pairs_kannan(self.space, self.tmap)))
        )

    @property
    def global_chatterjea_ok(self) -> bool:
        return self._get(
            "gc",
            lambda: bool(uniform_epsdelta_holds(global_pairs_chatterjea(self.space, self.tmap))),
        )

    @property
    def picard_kannan_ok_all(self) -> bool:
        return self._get(
            "pk",
            lambda: all(
                uniform_epsdelta_holds(picard_pairs_kannan(self.space, self.tmap, x0))
                for x0 in self.space.points()
            ),
        )

    @property
    def picard_chatterjea_ok_all(self) -> bool:
        return self._get(
            "pc",
            lambda: all(
                uniform_epsdelta_holds(picard_pairs_chatterjea(self.space, self.tmap, x0))
                for x0 in self.space.points()
            ),
        )


def _outcome(theorem: str, facts: _InstanceFacts, hypothesis: bool,
             clauses: dict[str, bool]) -> VerificationOutcome:
    out = VerificationOutcome(theorem, checked=1)
    if not hypothesis:
        out.vacuous = 1
        return out
    out.hypothesis_holds = 1
    failed = {name: value for name, value in clauses.items() if not value}
    if failed:
        values = ", ".join(f"{name}={value}" for name, value in clauses.items())
        out.violations.append(
            Violation(
                theorem,
                clause=";".join(sorted(failed)),
                instance=instance_text(facts.space, facts.tmap),
                detail=f"clauses: {values}",
            )
        )
    return out


def verify_thm_2_1(space: FiniteMetricSpace, tmap: SelfMap,
                   facts: _InstanceFacts | None = None) -> VerificationOutcome:
    """Global Kannan-form eps-delta condition plus strict half-sum condition
    must force a unique fixed point that every orbit reaches."""
    facts = facts or _InstanceFacts(space, tmap)
    hypothesis = facts.global_kannan_ok and facts.cm
    return _outcome(
        "2.1", facts, hypothesis,
        {"unique fixed point reached by every orbit": facts.unique_fp_and_all_orbits_reach_it},
    )


def verify_thm_3_1(space: FiniteMetricSpace, tmap: SelfMap,
                   facts: _InstanceFacts | None = None) -> VerificationOutcome:
    """Under the strict half-sum condition the orbit-restricted Kannan-form
    eps-delta condition (i) and "unique fixed point, all orbits converge"
    (ii) must agree; on finite spaces both must in fact hold."""
    facts = facts or _InstanceFacts(space, tmap)
    if not facts.cm:
        return _outcome("3.1", facts, False, {})
    clause_i = facts.picard_kannan_ok_all
    clause_ii = facts.unique_fp_and_all_orbits_reach_it
    return _outcome(
        "3.1", facts, True,
        {
            "(i) orbit eps-delta for every start": clause_i,
            "(ii) unique fixed point reached by every orbit": clause_ii,
            "(i) equivalent to (ii)": clause_i == clause_ii,
        },
    )


def verify_thm_4_1(space: FiniteMetricSpace, tmap: SelfMap,
                   facts: _InstanceFacts | None = None) -> VerificationOutcome:
    """Chatterjea-form analogue of the global claim."""
    facts = facts or _InstanceFacts(space, tmap)
    hypothesis = facts.global_chatterjea_ok and facts.cm2
    return _outcome(
        "4.1", facts, hypothesis,
        {"unique fixed point reached by every orbit": facts.unique_fp_and_all_orbits_reach_it},
    )


def verify_thm_4_2(space: FiniteMetricSpace, tmap: SelfMap,
                   facts: _InstanceFacts | None = None) -> VerificationOutcome:
    """Chatterjea-form analogue of the orbit-restricted equivalence."""
    facts = facts or _InstanceFacts(space, tmap)
    if not facts.cm2:
        return _outcome("4.2", facts, False, {})
    clause_i = facts.picard_chatterjea_ok_all
    clause_ii = facts.unique_fp_and_all_orbits_reach_it
    return _outcome(
        "4.2", facts, True,
        {
            "(i) orbit eps-delta for every start": clause_i,
            "(ii) unique fixed point reached by every orbit": clause_ii,
            "(i) equivalent to (ii)": clause_i == clause_ii,
        },
    )


def verify_thm_5_2(space: FiniteMetricSpace, tmap: SelfMap,
                   facts: _InstanceFacts | None = None) -> VerificationOutcome:
    """Under the strict half-sum condition, vanishing orbit gaps must be
    equivalent to unique-fixed-point-plus-convergence; both computed
    independently."""
    facts = facts or _InstanceFacts(space, tmap)
    if not facts.cm:
        return _outcome("5.2", facts, False, {})
    clause_i = facts.all_gaps_reach_zero
    clause_ii = facts.unique_fp_and_all_orbits_reach_it
    return _outcome(
        "5.2", facts, True,
        {
            "(i) every orbit gap sequence reaches zero": clause_i,
            "(ii) unique fixed point reached by every orbit": clause_ii,
            "(i) equivalent to (ii)": clause_i == clause_ii,
        },
    )


THEOREM_CHECKS = {
    "2.1": verify_thm_2_1,
    "3.1": verify_thm_3_1,
    "4.1": verify_thm_4_1,
    "4.2": verify_thm_4_2,
    "5.2": verify_thm_5_2,
}


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def _derived_seed(*parts) -> int:
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def exhaustive_spaces(n: int, config: SweepConfig) -> list[FiniteMetricSpace]:
    """Canonical unit space for n <= 2, a seeded generator pool above."""
    if n <= 2:
        return [unit_space(n)]
    return [
        random_space(n, config.max_distance, seed=_derived_seed(config.seed, "pool", n, i))
        for i in range(config.pool_size)
    ]


def iter_instances(config: SweepConfig):
    """Deterministic stream of (n, space, map) instances for a sweep."""
    if config.mode == "exhaustive":
        for n in config.ns:
            for space in exhaustive_spaces(n, config):
                for tmap in all_self_maps(n):
                    yield n, space, tmap
    else:
        for n in config.ns:
            for t in range(config.trials):
                space = random_space(n, config.max_distance, _derived_seed(config.seed, "space", n, t))
                rng = random.Random(_derived_seed(config.seed, "map", n, t))
                yield n, space, random_map(n, rng)


@dataclass
class CensusRow:
    n: int
    instances: int = 0
    cm: int = 0
    cm2: int = 0


@dataclass
class SweepResult:
    config: SweepConfig
    outcomes: dict[str, VerificationOutcome]
    census: dict[int, CensusRow]
    instances: int
    cross_validated_pair_sets: int = 0
    cross_validation_failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            all(outcome.passed for outcome in self.outcomes.values())
            and not self.cross_validation_failures
        )

    def to_json_obj(self) -> dict:
        return {
            "mode": self.config.mode,
            "ns": list(self.config.ns),
            "trials": self.config.trials,
            "seed": self.config.seed,
            "instances": self.instances,
            "passed": self.passed,
            "theorems": {
                tid: {
                    "checked": out.checked,
                    "hypothesis_holds": out.hypothesis_holds,
                    "vacuous": out.vacuous,
                    "violations": [
                        {
                            "clause": v.clause,
                            "detail": v.detail,
                            "instance": v.instance,
                        }
                        for v in out.violations
                    ],
                }
                for tid, out in sorted(self.outcomes.items())
            },
            "census": {
                str(n): {"instances": row.instances, "cm": row.cm, "cm2": row.cm2}
                for n, row in sorted(self.census.items())
            },
            "cross_validated_pair_sets": self.cross_validated_pair_sets,
            "cross_validation_failures": list(self.cross_validation_failures),
        }


def run_sweep(config: SweepConfig, cross_validate_pairs: bool = False) -> SweepResult:
    """Run the selected theorem checks over every instance of the sweep.

    With ``cross_validate_pairs`` every (S, D) pair set built along the
    way is also checked for reduction/oracle agreement; this is kept off
    the default path only because the oracle is deliberately the slow,
    dumb one.
    """
    outcomes = {tid: VerificationOutcome(tid) for tid in config.theorems}
    census: dict[int, CensusRow] = {}
    instances = 0
    validated = 0
    cross_failures: list[str] = []
    for n, space, tmap in iter_instances(config):
        instances += 1
        facts = _InstanceFacts(space, tmap)
        row = census.setdefault(n, CensusRow(n))
        row.instances += 1
        row.cm += facts.cm
        row.cm2 += facts.cm2
        for tid in config.theorems:
            outcomes[tid].absorb(THEOREM_CHECKS[tid](space, tmap, facts))
        if cross_validate_pairs:
            for pair_set in facts.pair_sets():
                validated += 1
                if bool(uniform_epsdelta_holds(pair_set)) != epsgrid_oracle(pair_set):
                    cross_failures.append(
                        f"{pair_set.condition} on\n{instance_text(space, tmap)}"
                    )
    return SweepResult(config, outcomes, census, instances, validated, cross_failures)


# ---------------------------------------------------------------------------
# Completeness-necessity demonstration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixtureReport:
    fixture: str
    start: str
    margin: MarginResult
    solve_status: SolveStatus
    fixed_point: float | None
    attractor: str
    attractor_in_domain: bool

    @property
    def epsdelta_certified(self) -> bool:
        return self.margin.certified

    @property
    def converged(self) -> bool:
        return self.solve_status is SolveStatus.CONVERGED


@dataclass(frozen=True)
class CompletenessDemo:
    """(i)-true/(ii)-false on the punctured interval, both true on the
    closed one: dropping completeness breaks the conclusion, not the
    orbit condition."""

    punctured: FixtureReport
    closed: FixtureReport
    constant_punctured: FixtureReport
    verdict: str

    @property
    def consistent(self) -> bool:
        return (
            self.punctured.epsdelta_certified
            and not self.punctured.converged
            and self.closed.epsdelta_certified
            and self.closed.converged
            and self.constant_punctured.epsdelta_certified
            and self.constant_punctured.converged
        )


def _fixture_report(name: str, x0: Fraction, c: Fraction, horizon: int,
                    tol: float) -> FixtureReport:
    fixture = get_fixture(name)
    margin = margin_epsdelta(fixture, x0, c, horizon)
    solved = solve_fixture(fixture, x0, tol=tol)
    return FixtureReport(
        fixture=name,
        start=str(x0),
        margin=margin,
        solve_status=solved.status,
        fixed_point=solved.point,
        attractor=str(fixture.attractor),
        attractor_in_domain=fixture.known_fixed_point is not None,
    )


def completeness_necessity_demo(c: Fraction = Fraction(2, 3), horizon: int = 64,
                                tol: float = 1e-12) -> CompletenessDemo:
    """Contrast the quarter-slope fixture on (0,1] and [0,1], plus the
    constant fixture on (0,1] where completeness is never needed."""
    punctured = _fixture_report("x-over-4-punctured", Fraction(1), c, horizon, tol)
    closed = _fixture_report("x-over-4", Fraction(1), c, horizon, tol)
    constant = _fixture_report("constant-half-punctured", Fraction(1), c, horizon, tol)
    verdict = (
        "completeness hypothesis necessary: the orbit eps-delta condition is "
        "certified on the punctured interval yet no fixed point exists there, "
        "while the same rule on the closed interval converges to its attractor"
    )
    return CompletenessDemo(punctured, closed, constant, verdict)


# ---------------------------------------------------------------------------
# Randomized counterexample search across module invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str
    detail: str
    instance: str
    witness_pair: tuple[str, str] | None = None


@dataclass(frozen=True)
class Findings:
    trials: int
    finding: Finding | None

    @property
    def found(self) -> bool:
        return self.finding is not None


def _forward_closure(tmap: SelfMap, points: set[int]) -> set[int]:
    closed = set(points)
    frontier = list(points)
    while frontier:
        nxt = tmap(frontier.pop())
        if nxt not in closed:
            closed.add(nxt)
            frontier.append(nxt)
    return closed


def restrict_instance(space: FiniteMetricSpace, tmap: SelfMap,
                      keep: set[int]) -> tuple[FiniteMetricSpace, SelfMap]:
    """Induced sub-instance on a forward-closed point set, reindexed."""
    keep_sorted = sorted(_forward_closure(tmap, keep))
    index = {old: new for new, old in enumerate(keep_sorted)}
    sub_dist = tuple(
        tuple(space.d(i, j) for j in keep_sorted) for i in keep_sorted
    )
    sub_map = SelfMap(tuple(index[tmap(i)] for i in keep_sorted))
    return FiniteMetricSpace(sub_dist), sub_map


def _minimize(space: FiniteMetricSpace, tmap: SelfMap, involved: set[int],
              still_violates) -> tuple[FiniteMetricSpace, SelfMap]:
    small_space, small_map = restrict_instance(space, tmap, involved)
    if still_violates(small_space, small_map):
        return small_space, small_map
    return space, tmap


def _check_instance(space: FiniteMetricSpace, tmap: SelfMap, reduction) -> Finding | None:
    report = validate_metric(space.dist)
    if not report.ok:
        return Finding("generator", f"generated space fails validation: {report.violations[0]}",
                       instance_text(space, tmap))

    facts = _InstanceFacts(space, tmap)

    for pair_set in facts.pair_sets():
        if bool(reduction(pair_set)) != epsgrid_oracle(pair_set):
            culprit = next(
                (p for p in pair_set.pairs if not p.d < p.s), pair_set.pairs[0] if pair_set.pairs else None
            )
            involved = set(culprit.source) if culprit else set(space.points())
            small_space, small_map = _minimize(
                space, tmap, involved,
                lambda s, m: any(
                    bool(reduction(ps)) != epsgrid_oracle(ps)
                    for ps in _InstanceFacts(s, m).pair_sets()
                ),
            )
            witness = (str(culprit.s), str(culprit.d)) if culprit else None
            return Finding(
                "reduction-oracle-disagreement",
                f"{pair_set.condition}: reduction and oracle disagree"
                + (f" at (S, D) = ({culprit.s}, {culprit.d})" if culprit else ""),
                instance_text(small_space, small_map),
                witness,
            )

    alpha_k = min_kannan_alpha(space, tmap)
    if alpha_k is not None and alpha_k < HALF and not facts.cm:
        return Finding("kannan-implies-cm", f"alpha = {alpha_k} < 1/2 but the strict condition fails",
                       instance_text(space, tmap))
    alpha_c = min_chatterjea_alpha(space, tmap)
    if alpha_c is not None and alpha_c < HALF and not facts.cm2:
        return Finding("chatterjea-implies-cm2", f"alpha = {alpha_c} < 1/2 but the strict condition fails",
                       instance_text(space, tmap))

    for name, hyp, concl in (
        ("cm-conclusion", facts.cm,
         facts.unique_fp_and_all_orbits_reach_it and facts.picard_kannan_ok_all),
        ("cm2-conclusion", facts.cm2,
         facts.unique_fp_and_all_orbits_reach_it and facts.picard_chatterjea_ok_all),
    ):
        if hyp and not concl:
            return Finding(name, "hypothesis holds but the fixed-point conclusion fails",
                           instance_text(space, tmap))

    if facts.cm:
        for orb in facts.orbits:
            gaps = gap_sequence(space, orb)
            if not verify_strict_decrease(gaps):
                return Finding(
                    "gap-monotonicity",
                    f"orbit from {orb.start} has a non-decreasing gap step: {gaps.gaps}",
                    instance_text(space, tmap),
                )

    if facts.global_kannan_ok and not facts.picard_kannan_ok_all:
        return Finding("subset-monotonicity",
                       "global Kannan-form condition holds but an orbit restriction fails",
                       instance_text(space, tmap))
    if facts.global_chatterjea_ok and not facts.picard_chatterjea_ok_all:
        return Finding("subset-monotonicity",
                       "global Chatterjea-form condition holds but an orbit restriction fails",
                       instance_text(space, tmap))
    return None


def search_counterexample(config: SweepConfig, reduction=uniform_epsdelta_holds) -> Findings:
    """Randomized falsification run over every cross-module invariant.

    Returns the first (minimized) finding or exhaustion after the
    configured number of trials. ``reduction`` is injectable so tests can
    demonstrate that a corrupted checker is actually caught.
    """
    trials = 0
    for _, space, tmap in iter_instances(config):
        trials += 1
        finding = _check_instance(space, tmap, reduction)
        if finding is not None:
            return Findings(trials, finding)
    return Findings(trials, None)
