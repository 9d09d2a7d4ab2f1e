"""Finite metric spaces, self-maps, and Picard orbits over exact rationals.

All distances are :class:`fractions.Fraction` values so that every strict
inequality the rest of the library relies on is decided exactly, with no
tolerance anywhere in the finite-space code path.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

RationalLike = Fraction | int


@dataclass(frozen=True)
class MetricViolation:
    """One violated metric axiom together with the indices that witness it."""

    axiom: str  # "identity" | "positivity" | "symmetry" | "triangle"
    witness: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        return f"{self.axiom}{self.witness}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[MetricViolation, ...]

    def __bool__(self) -> bool:
        return self.ok


def _as_rows(dist: Sequence[Sequence[RationalLike]]) -> tuple[tuple[Fraction, ...], ...]:
    rows = tuple(tuple(Fraction(x) for x in row) for row in dist)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError(f"distance table must be square, got row lengths {[len(r) for r in rows]}")
    return rows


def validate_metric(dist: Sequence[Sequence[RationalLike]]) -> ValidationReport:
    """Check the three metric axiom families on a square distance table.

    Returns a report listing every violated axiom with a witness index
    tuple. A non-square table is a usage error and raises ``ValueError``
    instead of being reported.
    """
    rows = _as_rows(dist)
    n = len(rows)
    violations: list[MetricViolation] = []
    for i in range(n):
        if rows[i][i] != 0:
            violations.append(MetricViolation("identity", (i,), f"d({i},{i}) = {rows[i][i]} != 0"))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] <= 0:
                violations.append(
                    MetricViolation("positivity", (i, j), f"d({i},{j}) = {rows[i][j]} <= 0")
                )
            if rows[i][j] != rows[j][i]:
                violations.append(
                    MetricViolation(
                        "symmetry", (i, j), f"d({i},{j}) = {rows[i][j]} != d({j},{i}) = {rows[j][i]}"
                    )
                )
    for i, j, k in itertools.permutations(range(n), 3):
        if rows[i][k] > rows[i][j] + rows[j][k]:
            violations.append(
                MetricViolation(
                    "triangle",
                    (i, j, k),
                    f"d({i},{k}) = {rows[i][k]} > {rows[i][j]} + {rows[j][k]}",
                )
            )
    return ValidationReport(not violations, tuple(violations))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite point set {0, .., n-1} with an exact-rational distance table.

    Instances are immutable and hashable; construct through
    :meth:`from_table` to get the axioms enforced.
    """

    dist: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_table(cls, dist: Sequence[Sequence[RationalLike]]) -> "FiniteMetricSpace":
        rows = _as_rows(dist)
        report = validate_metric(rows)
        if not report.ok:
            raise ValueError(
                "not a metric: " + "; ".join(str(v) for v in report.violations[:3])
            )
        return cls(rows)

    @property
    def n(self) -> int:
        return len(self.dist)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def points(self) -> range:
        return range(self.n)


def unit_space(n: int) -> FiniteMetricSpace:
    """The n-point space with every off-diagonal distance equal to 1."""
    if n < 1:
        raise ValueError("need at least one point")
    one = Fraction(1)
    zero = Fraction(0)
    return FiniteMetricSpace(
        tuple(tuple(zero if i == j else one for j in range(n)) for i in range(n))
    )


def metric_repair(sym: Sequence[Sequence[RationalLike]]) -> FiniteMetricSpace:
    """Shortest-path closure of a symmetric positive table into a metric.

    The input must be square with a zero diagonal, symmetric, and strictly
    positive off the diagonal; a zero off-diagonal entry cannot be repaired
    into positivity and is rejected. Entries never increase, and the result
    satisfies all metric axioms. Idempotent on tables that already are
    metrics.
    """
    rows = [list(row) for row in _as_rows(sym)]
    n = len(rows)
    for i in range(n):
        if rows[i][i] != 0:
            raise ValueError(f"diagonal entry d({i},{i}) = {rows[i][i]} must be 0")
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"table not symmetric at ({i},{j})")
            if rows[i][j] <= 0:
                raise ValueError(f"off-diagonal entry d({i},{j}) = {rows[i][j]} must be > 0")
    # Floyd-Warshall; kept exact by running entirely on Fractions.
    for k in range(n):
        rk = rows[k]
        for i in range(n):
            rik = rows[i][k]
            ri = rows[i]
            for j in range(n):
                via = rik + rk[j]
                if via < ri[j]:
                    ri[j] = via
    return FiniteMetricSpace(tuple(tuple(row) for row in rows))


def random_space(n: int, max_value: int, seed: int) -> FiniteMetricSpace:
    """Deterministic random metric: integer distances in 1..max_value, repaired.

    The same (n, max_value, seed) triple always produces the same space, and
    the shortest-path repair guarantees the result is a valid metric without
    rejection sampling.
    """
    if n < 1:
        raise ValueError("need at least one point")
    if max_value < 1:
        raise ValueError("max_value must be >= 1")
    rng = random.Random(seed)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(1, max_value))
            rows[i][j] = v
            rows[j][i] = v
    return metric_repair(rows)


@dataclass(frozen=True)
class SelfMap:
    """A total map on {0, .., n-1}, stored as an image table."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.image)
        for i, t in enumerate(self.image):
            if not 0 <= t < n:
                raise ValueError(f"image of point {i} is {t}, outside 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]


def identity_map(n: int) -> SelfMap:
    return SelfMap(tuple(range(n)))


def constant_map(n: int, target: int) -> SelfMap:
    return SelfMap((target,) * n)


def all_self_maps(n: int) -> Iterator[SelfMap]:
    """All n^n self-maps, in lexicographic image order."""
    for image in itertools.product(range(n), repeat=n):
        yield SelfMap(image)


def random_map(n: int, rng: random.Random) -> SelfMap:
    return SelfMap(tuple(rng.randrange(n) for _ in range(n)))


@dataclass(frozen=True)
class FixedPointTerminal:
    """Orbit ended at the first index ``step`` with x_step = x_{step+1}."""

    step: int


@dataclass(frozen=True)
class CycleTerminal:
    """Orbit entered a cycle of the given period (>= 2) at index ``entry``."""

    entry: int
    period: int


@dataclass(frozen=True)
class TruncatedTerminal:
    max_steps: int


Terminal = FixedPointTerminal | CycleTerminal | TruncatedTerminal


@dataclass(frozen=True)
class Orbit:
    """The Picard sequence x_0, T x_0, T^2 x_0, ... of a finite self-map.

    ``points`` ends one step past the first repeated state, so the repeat is
    visible: a fixed-point orbit ends with the fixed point listed twice, a
    cyclic orbit ends with the second visit to the cycle entry state.
    """

    start: int
    points: tuple[int, ...]
    terminal: Terminal

    def distinct_states(self) -> tuple[int, ...]:
        """The distinct visited states, in first-visit order."""
        if isinstance(self.terminal, TruncatedTerminal):
            seen: dict[int, None] = dict.fromkeys(self.points)
            return tuple(seen)
        return self.points[:-1]

    @property
    def reached_fixed_point(self) -> bool:
        return isinstance(self.terminal, FixedPointTerminal)

    def final_point(self) -> int:
        return self.points[-1]


def orbit(space: FiniteMetricSpace, tmap: SelfMap, x0: int, max_steps: int | None = None) -> Orbit:
    """Iterate ``tmap`` from ``x0`` until a state repeats or max_steps is hit.

    With max_steps >= n a repeat is always found (pigeonhole), so the
    default of 2n + 2 never truncates.
    """
    n = space.n
    if tmap.n != n:
        raise ValueError(f"map on {tmap.n} points used with a {n}-point space")
    if not 0 <= x0 < n:
        raise ValueError(f"start {x0} outside 0..{n - 1}")
    if max_steps is None:
        max_steps = 2 * n + 2
    points = [x0]
    first_seen = {x0: 0}
    terminal: Terminal = TruncatedTerminal(max_steps)
    for _ in range(max_steps):
        nxt = tmap(points[-1])
        points.append(nxt)
        if nxt == points[-2]:
            terminal = FixedPointTerminal(len(points) - 2)
            break
        if nxt in first_seen:
            entry = first_seen[nxt]
            terminal = CycleTerminal(entry, len(points) - 1 - entry)
            break
        first_seen[nxt] = len(points) - 1
    return Orbit(x0, tuple(points), terminal)


@dataclass(frozen=True)
class GapSequence:
    """Consecutive-step distances d(x_k, x_{k+1}) along an orbit."""

    gaps: tuple[Fraction, ...]
    limit_hint: Fraction | None = None

    def reaches_zero(self) -> bool:
        return any(g == 0 for g in self.gaps)

    def first_zero(self) -> int | None:
        for k, g in enumerate(self.gaps):
            if g == 0:
                return k
        return None


def gap_sequence(space: FiniteMetricSpace, orb: Orbit) -> GapSequence:
    gaps = tuple(space.d(orb.points[k], orb.points[k + 1]) for k in range(len(orb.points) - 1))
    return GapSequence(gaps)
