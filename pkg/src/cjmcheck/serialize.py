"""Text and JSON serialization for spaces and self-maps.

Text format, line oriented (``#`` starts a comment, blank lines ignored)::

    n
    <n-1 upper-triangle rows: row i lists d(i,i+1) .. d(i,n-1) as p/q or int>
    <zero or more map lines, each n point indices>

Rationals are written ``p/q`` (plain integers allowed on input). The JSON
form carries the full distance matrix with entries as exact ``"p/q"``
strings under keys ``n``, ``dist`` and ``maps``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .metric import FiniteMetricSpace, SelfMap


class ParseError(ValueError):
    """Malformed input; ``line`` is the 1-based offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(token: str, line: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(line, f"bad rational {token!r}: {exc}") from None
    return value


def dumps_text(space: FiniteMetricSpace, maps: list[SelfMap] | tuple[SelfMap, ...] = ()) -> str:
    lines = [str(space.n)]
    for i in range(space.n - 1):
        lines.append(" ".join(format_rational(space.d(i, j)) for j in range(i + 1, space.n)))
    for tmap in maps:
        lines.append(" ".join(str(t) for t in tmap.image))
    return "\n".join(lines) + "\n"


def loads_text(text: str) -> tuple[FiniteMetricSpace, list[SelfMap]]:
    numbered = [
        (idx + 1, line.split("#", 1)[0].strip())
        for idx, line in enumerate(text.splitlines())
    ]
    rows = [(no, line) for no, line in numbered if line]
    if not rows:
        raise ParseError(1, "empty input")
    no, head = rows[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(no, f"expected point count, got {head!r}") from None
    if n < 1:
        raise ParseError(no, f"point count must be >= 1, got {n}")
    if len(rows) < n:
        raise ParseError(rows[-1][0], f"expected {n - 1} triangle rows after the header")
    dist = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1):
        no, line = rows[1 + i]
        tokens = line.split()
        if len(tokens) != n - 1 - i:
            raise ParseError(no, f"triangle row {i} needs {n - 1 - i} entries, got {len(tokens)}")
        for offset, token in enumerate(tokens):
            j = i + 1 + offset
            value = parse_rational(token, no)
            dist[i][j] = value
            dist[j][i] = value
    try:
        space = FiniteMetricSpace.from_table(dist)
    except ValueError as exc:
        raise ParseError(rows[1][0] if n > 1 else rows[0][0], str(exc)) from None
    maps: list[SelfMap] = []
    for no, line in rows[n:]:
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(no, f"map line needs {n} indices, got {len(tokens)}")
        try:
            image = tuple(int(t) for t in tokens)
        except ValueError:
            raise ParseError(no, f"bad map line {line!r}") from None
        try:
            maps.append(SelfMap(image))
        except ValueError as exc:
            raise ParseError(no, str(exc)) from None
    return space, maps


def to_json_record(space: FiniteMetricSpace, maps: list[SelfMap] | tuple[SelfMap, ...] = ()) -> dict[str, Any]:
    return {
        "n": space.n,
        "dist": [[format_rational(x) for x in row] for row in space.dist],
        "maps": [list(tmap.image) for tmap in maps],
    }


def from_json_record(record: dict[str, Any]) -> tuple[FiniteMetricSpace, list[SelfMap]]:
    dist = [[Fraction(x) for x in row] for row in record["dist"]]
    space = FiniteMetricSpace.from_table(dist)
    maps = [SelfMap(tuple(image)) for image in record.get("maps", [])]
    return space, maps


def dumps_json(space: FiniteMetricSpace, maps: list[SelfMap] | tuple[SelfMap, ...] = ()) -> str:
    return json.dumps(to_json_record(space, maps), indent=2) + "\n"


def loads_json(text: str) -> tuple[FiniteMetricSpace, list[SelfMap]]:
    return from_json_record(json.loads(text))


def instance_text(space: FiniteMetricSpace, tmap: SelfMap) -> str:
    """One-instance serialization used to make reported violations reloadable."""
    return dumps_text(space, [tmap])
