"""Contraction-condition predicates over finite metric spaces.

Pointwise conditions (Kannan/Chatterjea coefficients, the strict
half-sum conditions CM and CM2) are decided exactly over all point pairs.
The uniform epsilon-delta conditions ("for every eps > 0 there is a
delta > 0 such that S < eps + delta implies D <= eps") are decided over
finite (S, D) pair sets by an exact reduction, with an independent
epsilon-grid oracle kept alongside for cross-validation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .metric import FiniteMetricSpace, SelfMap, orbit

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class StrictResult:
    """Outcome of a strict pointwise condition, with a witness on failure."""

    holds: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


# ---------------------------------------------------------------------------
# Minimal contraction coefficients
# ---------------------------------------------------------------------------


def _max_ratio(constraints: list[tuple[Fraction, Fraction]]) -> Fraction | None:
    """Least alpha with num <= alpha * den for every (num, den) constraint.

    Pairs with num = 0 impose nothing; num > 0 with den = 0 admits no alpha
    at all, reported as None.
    """
    best = Fraction(0)
    for num, den in constraints:
        if num == 0:
            continue
        if den == 0:
            return None
        ratio = num / den
        if ratio > best:
            best = ratio
    return best


def min_kannan_alpha(space: FiniteMetricSpace, tmap: SelfMap) -> Fraction | None:
    """Least alpha with d(Tx,Ty) <= alpha*(d(x,Tx) + d(y,Ty)) for all x, y.

    Returns None when no finite alpha works. The map is a Kannan
    contraction exactly when the result is < 1/2.
    """
    d = space.d
    t = tmap.image
    constraints = [
        (d(t[i], t[j]), d(i, t[i]) + d(j, t[j]))
        for i, j in itertools.combinations_with_replacement(space.points(), 2)
    ]
    return _max_ratio(constraints)


def min_chatterjea_alpha(space: FiniteMetricSpace, tmap: SelfMap) -> Fraction | None:
    """Least alpha with d(Tx,Ty) <= alpha*(d(x,Ty) + d(y,Tx)) for all x, y."""
    d = space.d
    t = tmap.image
    constraints = [
        (d(t[i], t[j]), d(i, t[j]) + d(j, t[i]))
        for i, j in itertools.combinations_with_replacement(space.points(), 2)
    ]
    return _max_ratio(constraints)


def min_kannan_alpha_grid(points: list[Fraction], rule) -> Fraction | None:
    """Kannan coefficient of a real map sampled on rational grid points.

    Distances are absolute differences; images need not lie on the grid,
    only the base points do. Everything stays exact.
    """
    pts = [Fraction(p) for p in points]
    images = {p: Fraction(rule(p)) for p in pts}
    constraints = [
        (abs(images[x] - images[y]), abs(x - images[x]) + abs(y - images[y]))
        for x, y in itertools.combinations_with_replacement(pts, 2)
    ]
    return _max_ratio(constraints)


def min_chatterjea_alpha_grid(points: list[Fraction], rule) -> Fraction | None:
    """Chatterjea coefficient of a real map sampled on rational grid points."""
    pts = [Fraction(p) for p in points]
    images = {p: Fraction(rule(p)) for p in pts}
    constraints = [
        (abs(images[x] - images[y]), abs(x - images[y]) + abs(y - images[x]))
        for x, y in itertools.combinations_with_replacement(pts, 2)
    ]
    return _max_ratio(constraints)


# ---------------------------------------------------------------------------
# Strict half-sum conditions
# ---------------------------------------------------------------------------


def satisfies_cm(space: FiniteMetricSpace, tmap: SelfMap) -> StrictResult:
    """x != y implies d(Tx,Ty) < (d(x,Tx) + d(y,Ty)) / 2, checked exactly.

    A pair whose right side is 0 fails, since nothing is < 0.
    """
    d = space.d
    t = tmap.image
    for i, j in itertools.combinations(space.points(), 2):
        if not d(t[i], t[j]) < HALF * (d(i, t[i]) + d(j, t[j])):
            return StrictResult(False, (i, j))
    return StrictResult(True)


def satisfies_cm2(space: FiniteMetricSpace, tmap: SelfMap) -> StrictResult:
    """x != y implies d(Tx,Ty) < (d(x,Ty) + d(y,Tx)) / 2, checked exactly."""
    d = space.d
    t = tmap.image
    for i, j in itertools.combinations(space.points(), 2):
        if not d(t[i], t[j]) < HALF * (d(i, t[j]) + d(j, t[i])):
            return StrictResult(False, (i, j))
    return StrictResult(True)


def banach_strictly_contractive(space: FiniteMetricSpace, tmap: SelfMap) -> StrictResult:
    """x != y implies d(Tx,Ty) < d(x,y)."""
    d = space.d
    t = tmap.image
    for i, j in itertools.combinations(space.points(), 2):
        if not d(t[i], t[j]) < d(i, j):
            return StrictResult(False, (i, j))
    return StrictResult(True)


# ---------------------------------------------------------------------------
# (S, D) pair sets feeding the uniform epsilon-delta checker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SDPair:
    """One instantiation of an epsilon-delta condition.

    ``s`` is the hypothesis value, ``d`` the conclusion value, ``source``
    the point or orbit-state pair that produced them.
    """

    s: Fraction
    d: Fraction
    source: tuple[int, int]


@dataclass(frozen=True)
class SDPairSet:
    condition: str
    pairs: tuple[SDPair, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def values(self) -> list[tuple[Fraction, Fraction]]:
        return [(p.s, p.d) for p in self.pairs]


def global_pairs_kannan(space: FiniteMetricSpace, tmap: SelfMap) -> SDPairSet:
    """(S, D) over all unordered point pairs, x = y included.

    S = (d(x,Tx) + d(y,Ty)) / 2 and D = d(Tx,Ty); the x = y pairs carry
    D = 0 and never break the condition, but keep the reduction uniform.
    """
    d = space.d
    t = tmap.image
    pairs = tuple(
        SDPair(HALF * (d(i, t[i]) + d(j, t[j])), d(t[i], t[j]), (i, j))
        for i, j in itertools.combinations_with_replacement(space.points(), 2)
    )
    return SDPairSet("kannan/global", pairs)


def global_pairs_chatterjea(space: FiniteMetricSpace, tmap: SelfMap) -> SDPairSet:
    """(S, D) with S = (d(x,Ty) + d(y,Tx)) / 2 over all unordered pairs."""
    d = space.d
    t = tmap.image
    pairs = tuple(
        SDPair(HALF * (d(i, t[j]) + d(j, t[i])), d(t[i], t[j]), (i, j))
        for i, j in itertools.combinations_with_replacement(space.points(), 2)
    )
    return SDPairSet("chatterjea/global", pairs)


def global_pairs_banach(space: FiniteMetricSpace, tmap: SelfMap) -> SDPairSet:
    """(S, D) with S = d(x,y) and D = d(Tx,Ty) over all unordered pairs."""
    d = space.d
    t = tmap.image
    pairs = tuple(
        SDPair(d(i, j), d(t[i], t[j]), (i, j))
        for i, j in itertools.combinations_with_replacement(space.points(), 2)
    )
    return SDPairSet("banach/global", pairs)


def picard_pairs_kannan(space: FiniteMetricSpace, tmap: SelfMap, x0: int) -> SDPairSet:
    """Kannan-form (S, D) restricted to states visited by the orbit of x0.

    The infinite index family collapses to the finitely many distinct
    orbit states; both S and D are symmetric in the state pair, so
    unordered pairs (with repeats) cover every ordered combination.
    """
    d = space.d
    t = tmap.image
    states = orbit(space, tmap, x0).distinct_states()
    pairs = tuple(
        SDPair(HALF * (d(u, t[u]) + d(v, t[v])), d(t[u], t[v]), (u, v))
        for u, v in itertools.combinations_with_replacement(states, 2)
    )
    return SDPairSet(f"kannan/picard[x0={x0}]", pairs)


def picard_pairs_chatterjea(space: FiniteMetricSpace, tmap: SelfMap, x0: int) -> SDPairSet:
    """Chatterjea-form (S, D) restricted to the orbit states of x0."""
    d = space.d
    t = tmap.image
    states = orbit(space, tmap, x0).distinct_states()
    pairs = tuple(
        SDPair(HALF * (d(u, t[v]) + d(v, t[u])), d(t[u], t[v]), (u, v))
        for u, v in itertools.combinations_with_replacement(states, 2)
    )
    return SDPairSet(f"chatterjea/picard[x0={x0}]", pairs)


# ---------------------------------------------------------------------------
# Deciding the uniform epsilon-delta condition over a finite pair set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsDeltaResult:
    holds: bool
    witness_eps: Fraction | None = None
    witness_pair: SDPair | None = None

    def __bool__(self) -> bool:
        return self.holds


def uniform_epsdelta_holds(pairs: SDPairSet) -> EpsDeltaResult:
    """Decide "for every eps > 0 there is delta > 0: S < eps + delta => D <= eps".

    Finite reduction: the condition holds iff D <= S for every pair.
    A pair with D > S fails at any eps in [S, D), since S < eps + delta is
    then automatic while D <= eps is impossible; conversely with D <= S
    throughout, delta = min{S - eps over pairs with S > eps} works (any
    delta if no such pair), because S < eps + delta then forces S <= eps
    and hence D <= eps. Cross-validated against :func:`epsgrid_oracle`.

    On failure the witness eps is the midpoint of [S, D) of the first
    failing pair.
    """
    for pair in pairs.pairs:
        if pair.d > pair.s:
            return EpsDeltaResult(False, HALF * (pair.s + pair.d), pair)
    return EpsDeltaResult(True)


def epsgrid_oracle(pairs: SDPairSet) -> bool:
    """Brute-force check of the same condition over a critical eps grid.

    For fixed eps the best delta is F(eps) - eps with
    F(eps) = min{S : D > eps}, so the condition holds at eps iff
    F(eps) > eps. F is a step function and the comparison with eps can
    only change verdict at S or D values, so checking every positive
    S/D value, every midpoint of consecutive distinct values, and one
    point beyond the maximum decides the full quantifier.
    """
    values = sorted({Fraction(0)} | {p.s for p in pairs.pairs} | {p.d for p in pairs.pairs})
    candidates = [v for v in values if v > 0]
    candidates.extend(HALF * (a + b) for a, b in zip(values, values[1:]))
    candidates.append(values[-1] + 1)
    for eps in candidates:
        bad = [p.s for p in pairs.pairs if p.d > eps]
        if bad and min(bad) <= eps:
            return False
    return True


def cross_validate(
    pair_sets: list[SDPairSet] | tuple[SDPairSet, ...],
    reduction=uniform_epsdelta_holds,
) -> tuple[bool, SDPairSet | None]:
    """Check reduction-vs-oracle agreement over many pair sets.

    Returns (agreed, first disagreeing pair set). The reduction is
    injectable so a deliberately corrupted variant can be shown to get
    caught.
    """
    for pairs in pair_sets:
        if bool(reduction(pairs)) != epsgrid_oracle(pairs):
            return False, pairs
    return True, None


# ---------------------------------------------------------------------------
# Per-mapping classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    """Which contraction conditions a single self-map satisfies."""

    map_image: tuple[int, ...]
    kannan_alpha: Fraction | None
    chatterjea_alpha: Fraction | None
    banach: bool
    cm: bool
    cm_witness: tuple[int, int] | None
    cm2: bool
    cm2_witness: tuple[int, int] | None
    global_epsdelta_kannan: bool
    global_epsdelta_chatterjea: bool
    picard_epsdelta_kannan: tuple[bool, ...]
    picard_epsdelta_chatterjea: tuple[bool, ...]

    @property
    def is_kannan(self) -> bool:
        return self.kannan_alpha is not None and self.kannan_alpha < HALF

    @property
    def is_chatterjea(self) -> bool:
        return self.chatterjea_alpha is not None and self.chatterjea_alpha < HALF

    def to_record(self) -> dict[str, object]:
        """Flat one-row record for CSV/JSON export."""

        def alpha(x: Fraction | None) -> str:
            return "none" if x is None else str(x)

        return {
            "map": " ".join(str(t) for t in self.map_image),
            "kannan_alpha": alpha(self.kannan_alpha),
            "is_kannan": self.is_kannan,
            "chatterjea_alpha": alpha(self.chatterjea_alpha),
            "is_chatterjea": self.is_chatterjea,
            "banach": self.banach,
            "cm": self.cm,
            "cm2": self.cm2,
            "epsdelta_kannan_global": self.global_epsdelta_kannan,
            "epsdelta_chatterjea_global": self.global_epsdelta_chatterjea,
            "epsdelta_kannan_picard_all_starts": all(self.picard_epsdelta_kannan),
            "epsdelta_chatterjea_picard_all_starts": all(self.picard_epsdelta_chatterjea),
        }


def classify_map(space: FiniteMetricSpace, tmap: SelfMap) -> ConditionReport:
    """Evaluate every supported contraction condition for one self-map."""
    cm = satisfies_cm(space, tmap)
    cm2 = satisfies_cm2(space, tmap)
    banach_eps = uniform_epsdelta_holds(global_pairs_banach(space, tmap))
    banach_strict = banach_strictly_contractive(space, tmap)
    return ConditionReport(
        map_image=tmap.image,
        kannan_alpha=min_kannan_alpha(space, tmap),
        chatterjea_alpha=min_chatterjea_alpha(space, tmap),
        banach=bool(banach_eps) and bool(banach_strict),
        cm=cm.holds,
        cm_witness=cm.witness,
        cm2=cm2.holds,
        cm2_witness=cm2.witness,
        global_epsdelta_kannan=bool(uniform_epsdelta_holds(global_pairs_kannan(space, tmap))),
        global_epsdelta_chatterjea=bool(
            uniform_epsdelta_holds(global_pairs_chatterjea(space, tmap))
        ),
        picard_epsdelta_kannan=tuple(
            bool(uniform_epsdelta_holds(picard_pairs_kannan(space, tmap, x0)))
            for x0 in space.points()
        ),
        picard_epsdelta_chatterjea=tuple(
            bool(uniform_epsdelta_holds(picard_pairs_chatterjea(space, tmap, x0)))
            for x0 in space.points()
        ),
    )
