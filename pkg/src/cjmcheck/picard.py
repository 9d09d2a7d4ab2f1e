"""Picard iteration with convergence diagnostics.

Finite spaces iterate exactly; the continuous side is a closed whitelist
of affine fixtures on real intervals (no arbitrary user functions), so
every numeric claim about an orbit has an exact closed-form counterpart.
The punctured-interval fixtures model an incomplete space by keeping the
would-be limit as metadata that lies outside the domain.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .metric import FiniteMetricSpace, GapSequence, SelfMap, gap_sequence, orbit

DEFAULT_TOL = 1e-12
DEFAULT_FIXTURE_MAX_ITER = 10_000


class DomainError(ValueError):
    """Start point lies outside the fixture's domain."""


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or (x == self.lo and self.lo_open):
            return False
        if x > self.hi or (x == self.hi and self.hi_open):
            return False
        return True

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class ContinuousFixture:
    """An affine self-map x -> slope*x + intercept of a real interval.

    ``attractor`` is the unique real fixed point of the rule (slope < 1);
    it is the limit of every orbit whether or not the domain contains it.
    ``margin`` is the least c with D <= c*S over all orbit index pairs and
    all starts, where S is the half-sum of two consecutive-step gaps and D
    the distance of the shifted iterates; None when no c < 1 exists.
    """

    name: str
    domain: Interval
    slope: Fraction
    intercept: Fraction
    margin: Fraction | None
    known_kannan_alpha: Fraction | None

    def __post_init__(self) -> None:
        if not 0 <= self.slope < 1:
            raise ValueError("fixture slope must lie in [0, 1)")

    @property
    def attractor(self) -> Fraction:
        return self.intercept / (1 - self.slope)

    @property
    def known_fixed_point(self) -> Fraction | None:
        z = self.attractor
        return z if self.domain.contains(z) else None

    def apply(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def apply_float(self, x: float) -> float:
        return float(self.slope) * x + float(self.intercept)

    def orbit_point(self, x0: Fraction, k: int) -> Fraction:
        """Exact closed form x_k = z + (x0 - z) * slope^k."""
        z = self.attractor
        return z + (x0 - z) * self.slope**k

    def gap(self, x0: Fraction, k: int) -> Fraction:
        """Exact closed form d(x_k, x_{k+1}) = |x0 - z| * (1 - slope) * slope^k."""
        return abs(x0 - self.attractor) * (1 - self.slope) * self.slope**k


def _affine_margin(slope: Fraction) -> Fraction | None:
    # sup of D/S over orbit pairs is 2s/(1-s), approached as the index
    # separation grows; usable as a certificate only when below 1.
    m = 2 * slope / (1 - slope)
    return m if m < 1 else None


def _fixture(name: str, domain: Interval, slope: Fraction, intercept: Fraction,
             alpha: Fraction | None) -> ContinuousFixture:
    return ContinuousFixture(name, domain, slope, intercept, _affine_margin(slope), alpha)


FIXTURES: dict[str, ContinuousFixture] = {
    f.name: f
    for f in (
        _fixture(
            "x-over-4",
            Interval(Fraction(0), Fraction(1)),
            Fraction(1, 4),
            Fraction(0),
            Fraction(1, 3),
        ),
        _fixture(
            "x-over-4-punctured",
            Interval(Fraction(0), Fraction(1), lo_open=True),
            Fraction(1, 4),
            Fraction(0),
            Fraction(1, 3),
        ),
        _fixture(
            "x-over-2",
            Interval(Fraction(0), Fraction(1)),
            Fraction(1, 2),
            Fraction(0),
            Fraction(1),
        ),
        _fixture(
            "constant-half",
            Interval(Fraction(0), Fraction(1)),
            Fraction(0),
            Fraction(1, 2),
            Fraction(0),
        ),
        _fixture(
            "constant-half-punctured",
            Interval(Fraction(0), Fraction(1), lo_open=True),
            Fraction(0),
            Fraction(1, 2),
            Fraction(0),
        ),
    )
}


def get_fixture(name: str) -> ContinuousFixture:
    try:
        return FIXTURES[name]
    except KeyError:
        known = ", ".join(sorted(FIXTURES))
        raise KeyError(f"unknown fixture {name!r}; available: {known}") from None


class SolveStatus(enum.Enum):
    CONVERGED = "converged"
    NO_FIXED_POINT = "no-fixed-point"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class FixedPointResult:
    status: SolveStatus
    point: float | int | None
    steps: int | None
    trace: tuple[float, ...] | tuple[int, ...]
    gaps: tuple[float, ...] | tuple[Fraction, ...]
    strict_decrease_violations: tuple[int, ...]

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED


@dataclass(frozen=True)
class StrictDecreaseResult:
    ok: bool
    violation_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_strict_decrease(gaps: GapSequence | tuple | list) -> StrictDecreaseResult:
    """Require gaps[k+1] < gaps[k] up to the first zero gap.

    A zero gap means a fixed point was reached and ends the check; the
    first index where the strict decrease fails is returned otherwise.
    """
    seq = gaps.gaps if isinstance(gaps, GapSequence) else tuple(gaps)
    for k in range(len(seq) - 1):
        if seq[k] == 0:
            return StrictDecreaseResult(True)
        if not seq[k + 1] < seq[k]:
            return StrictDecreaseResult(False, k)
    return StrictDecreaseResult(True)


def _decrease_violations(gaps) -> tuple[int, ...]:
    out = []
    for k in range(len(gaps) - 1):
        if gaps[k] == 0:
            break
        if not gaps[k + 1] < gaps[k]:
            out.append(k)
    return tuple(out)


def solve_finite(
    space: FiniteMetricSpace, tmap: SelfMap, x0: int, max_iter: int | None = None
) -> FixedPointResult:
    """Iterate exactly on a finite space; converged means gap exactly 0."""
    if max_iter is None:
        max_iter = 10 * space.n
    orb = orbit(space, tmap, x0, max_steps=max_iter)
    gaps = gap_sequence(space, orb).gaps
    if orb.reached_fixed_point:
        status, point, steps = SolveStatus.CONVERGED, orb.final_point(), len(orb.points) - 2
    else:
        status, point, steps = SolveStatus.NO_FIXED_POINT, None, None
    return FixedPointResult(status, point, steps, orb.points, gaps, _decrease_violations(gaps))


def solve_fixture(
    fixture: ContinuousFixture,
    x0: Fraction,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_FIXTURE_MAX_ITER,
) -> FixedPointResult:
    """Float iteration of a fixture with stopping tolerance ``tol``.

    Reaching gap <= tol counts as convergence only when the orbit limit
    actually belongs to the domain; on a punctured domain the orbit is
    Cauchy but leaves no fixed point behind, reported as NO_FIXED_POINT.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x0 = Fraction(x0)
    if not fixture.domain.contains(x0):
        raise DomainError(f"start {x0} outside domain {fixture.domain} of {fixture.name}")
    x = float(x0)
    trace = [x]
    gaps: list[float] = []
    status: SolveStatus | None = None
    point: float | None = None
    steps: int | None = None
    for step in range(1, max_iter + 1):
        nxt = fixture.apply_float(x)
        trace.append(nxt)
        gaps.append(abs(nxt - x))
        x = nxt
        if gaps[-1] <= tol:
            if fixture.known_fixed_point is not None:
                status, point, steps = SolveStatus.CONVERGED, x, step
            else:
                status = SolveStatus.NO_FIXED_POINT
            break
    if status is None:
        grew = len(gaps) >= 2 and gaps[-1] > gaps[0]
        status = SolveStatus.DIVERGED if grew else SolveStatus.NO_FIXED_POINT
    return FixedPointResult(
        status, point, steps, tuple(trace), tuple(gaps), _decrease_violations(gaps)
    )


def solve(target, tmap: SelfMap | None = None, *, x0, tol: float = DEFAULT_TOL,
          max_iter: int | None = None) -> FixedPointResult:
    """Dispatch to the finite-space or fixture solver based on the target."""
    if isinstance(target, FiniteMetricSpace):
        if tmap is None:
            raise ValueError("finite-space solve needs a self-map")
        return solve_finite(target, tmap, x0, max_iter)
    if tmap is not None:
        raise ValueError("fixtures carry their own rule; no self-map expected")
    return solve_fixture(
        target, x0, tol, DEFAULT_FIXTURE_MAX_ITER if max_iter is None else max_iter
    )


class MarginStatus(enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    HORIZON_LIMITED = "horizon-limited"


@dataclass(frozen=True)
class MarginResult:
    """Outcome of the orbit-pair margin check D <= c*S.

    When certified, the uniform epsilon-delta condition holds on the whole
    orbit family with delta(eps) = eps * delta_factor, delta_factor =
    1/c - 1: S < eps + delta then gives D <= c*S < eps.
    """

    status: MarginStatus
    c: Fraction
    horizon: int
    witness: tuple[int, int, Fraction, Fraction] | None = None
    delta_factor: Fraction | None = None

    @property
    def certified(self) -> bool:
        return self.status is MarginStatus.CERTIFIED


def margin_epsdelta(
    fixture: ContinuousFixture, x0: Fraction, c: Fraction, horizon: int = 64
) -> MarginResult:
    """Check D <= c*S (and S = 0 => D = 0) over all orbit index pairs.

    The sweep over i, j <= horizon runs in exact rationals via the
    fixture's closed form; the infinite tail is covered by the fixture's
    analytic margin bound when it has one, otherwise the verdict is
    horizon-limited rather than a certificate.
    """
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError("margin constant c must lie in (0, 1)")
    x0 = Fraction(x0)
    if not fixture.domain.contains(x0):
        raise DomainError(f"start {x0} outside domain {fixture.domain} of {fixture.name}")
    gaps = [fixture.gap(x0, k) for k in range(horizon + 1)]
    pts = [fixture.orbit_point(x0, k) for k in range(horizon + 2)]
    for i in range(horizon + 1):
        for j in range(i, horizon + 1):
            s = Fraction(1, 2) * (gaps[i] + gaps[j])
            d = abs(pts[i + 1] - pts[j + 1])
            if d > c * s:
                return MarginResult(MarginStatus.REFUTED, c, horizon, (i, j, s, d))
    if fixture.margin is not None and fixture.margin <= c:
        return MarginResult(MarginStatus.CERTIFIED, c, horizon, None, 1 / c - 1)
    return MarginResult(MarginStatus.HORIZON_LIMITED, c, horizon)


def detect_fixed_points(space: FiniteMetricSpace, tmap: SelfMap) -> tuple[int, ...]:
    """Exact set {x : Tx = x} of a finite self-map."""
    return tuple(i for i in space.points() if tmap(i) == i)
