"""Command-line surface: classify, iterate, verify, sequences, space.

Every subcommand is deterministic given its inputs and seed, emits flat
records (table, CSV, or JSON lines) so external tooling needs no custom
parser, and sticks to the exit-code contract: 0 on success, 1 when a
verification found a violation, 2 on usage or parse errors.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .conditions import classify_map
from .metric import FiniteMetricSpace, SelfMap, all_self_maps, random_space, unit_space
from .picard import FIXTURES, DomainError, get_fixture, solve_finite, solve_fixture
from .sequences import TestSequence, verify_lemma1
from .serialize import (
    ParseError,
    dumps_json,
    dumps_text,
    format_rational,
    loads_json,
    loads_text,
)
from .verifier import (
    THEOREM_IDS,
    SweepConfig,
    completeness_necessity_demo,
    run_sweep,
)

EXIT_VIOLATION = 1


def _load_input(path: str) -> tuple[FiniteMetricSpace, list[SelfMap]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise click.UsageError(f"cannot read {path}: {exc}") from None
    try:
        if text.lstrip().startswith("{"):
            return loads_json(text)
        return loads_text(text)
    except ParseError as exc:
        raise click.UsageError(f"{path}: {exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise click.UsageError(f"{path}: {exc}") from None


def _parse_fraction(value: str, what: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"bad {what} {value!r}, expected an exact rational like 3/4")


def _parse_fraction_list(value: str, what: str) -> list[Fraction]:
    return [_parse_fraction(tok, what) for tok in value.split(",") if tok.strip()]


def _emit_records(records: list[dict], fmt: str) -> None:
    if not records:
        return
    if fmt == "json-records":
        for record in records:
            click.echo(json.dumps(record, sort_keys=True))
        return
    header = list(records[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        click.echo(buf.getvalue(), nl=False)
        return
    widths = {
        key: max(len(key), *(len(str(r[key])) for r in records)) for key in header
    }
    click.echo("  ".join(key.ljust(widths[key]) for key in header))
    for record in records:
        click.echo("  ".join(str(record[key]).ljust(widths[key]) for key in header))


@click.group()
@click.version_option(package_name="cjmcheck")
def main() -> None:
    """Exact contraction-condition checking and fixed-point verification."""


@main.command()
@click.argument("input_path", required=False)
@click.option("--unit-space", "unit_n", type=int, default=None,
              help="Classify maps on the n-point space with unit distances.")
@click.option("--random-space", "random_n", type=int, default=None,
              help="Classify maps on a generated n-point space (needs --seed).")
@click.option("--seed", type=int, default=None, help="Generator seed.")
@click.option("--max-value", type=int, default=10, show_default=True,
              help="Largest raw distance for generated spaces.")
@click.option("--all-maps/--file-maps", default=None,
              help="Enumerate all n^n self-maps instead of the maps in the file.")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json-records"]),
              default="table", show_default=True)
def classify(input_path, unit_n, random_n, seed, max_value, all_maps, fmt) -> None:
    """Report which contraction conditions each self-map satisfies."""
    sources = [s for s in (input_path, unit_n, random_n) if s is not None]
    if len(sources) != 1:
        raise click.UsageError("give exactly one of INPUT_PATH, --unit-space, --random-space")
    maps: list[SelfMap] = []
    if input_path is not None:
        space, maps = _load_input(input_path)
    elif unit_n is not None:
        space = unit_space(unit_n)
    else:
        if seed is None:
            raise click.UsageError("--random-space requires --seed for reproducibility")
        space = random_space(random_n, max_value, seed)
    if all_maps or not maps:
        if space.n > 5:
            raise click.UsageError(
                f"refusing to enumerate {space.n}**{space.n} maps; supply maps in the input file"
            )
        maps = list(all_self_maps(space.n))
    records = [classify_map(space, tmap).to_record() for tmap in maps]
    _emit_records(records, fmt)


@main.command()
@click.option("--fixture", "fixture_name", default=None,
              help="Name of a built-in continuous fixture.")
@click.option("--space", "input_path", default=None,
              help="Finite space file; pair with --map-index.")
@click.option("--map-index", type=int, default=0, show_default=True)
@click.option("--x0", required=True, help="Start point (rational for fixtures, index for spaces).")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--max-iter", type=int, default=None, help="Iteration cap.")
def iterate(fixture_name, input_path, map_index, x0, tol, max_iter) -> None:
    """Run Picard iteration and print the gap trace as CSV (step, point, gap)."""
    if (fixture_name is None) == (input_path is None):
        raise click.UsageError("give exactly one of --fixture or --space")
    if fixture_name is not None:
        try:
            fixture = get_fixture(fixture_name)
        except KeyError as exc:
            raise click.UsageError(str(exc.args[0])) from None
        try:
            result = solve_fixture(fixture, _parse_fraction(x0, "start"), tol,
                                   max_iter if max_iter is not None else 10_000)
        except DomainError as exc:
            raise click.UsageError(str(exc)) from None
    else:
        space, maps = _load_input(input_path)
        if not maps:
            raise click.UsageError(f"{input_path} contains no map lines")
        if not 0 <= map_index < len(maps):
            raise click.UsageError(f"--map-index {map_index} out of range 0..{len(maps) - 1}")
        try:
            start = int(x0)
        except ValueError:
            raise click.UsageError(f"--x0 must be a point index, got {x0!r}") from None
        if not 0 <= start < space.n:
            raise click.UsageError(f"--x0 {start} outside 0..{space.n - 1}")
        result = solve_finite(space, maps[map_index], start, max_iter)
    click.echo(f"# status: {result.status.value}"
               + (f" point={result.point} steps={result.steps}" if result.converged else ""))
    click.echo("step,point,gap")
    for k, gap in enumerate(result.gaps):
        click.echo(f"{k + 1},{result.trace[k + 1]},{gap}")


def _census_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "instances", "cm", "cm2"])
    for n, row in sorted(result.census.items()):
        writer.writerow([n, row.instances, row.cm, row.cm2])
    return buf.getvalue()


def _render_sweep(result) -> str:
    lines = [
        f"sweep: mode={result.config.mode} ns={','.join(map(str, result.config.ns))}"
        f" seed={result.config.seed}"
        + (f" trials={result.config.trials}" if result.config.mode == "random" else ""),
        f"instances: {result.instances}",
    ]
    for tid, out in sorted(result.outcomes.items()):
        lines.append(
            f"theorem {tid}: checked={out.checked} hypothesis_holds={out.hypothesis_holds}"
            f" vacuous={out.vacuous} violations={len(out.violations)}"
        )
        for violation in out.violations:
            lines.append(f"  VIOLATION [{violation.clause}] {violation.detail}")
            lines.extend("  | " + line for line in violation.instance.strip().splitlines())
    for n, row in sorted(result.census.items()):
        lines.append(f"census n={n}: instances={row.instances} cm={row.cm} cm2={row.cm2}")
    if result.cross_validated_pair_sets:
        lines.append(
            f"pair sets cross-validated: {result.cross_validated_pair_sets}"
            f" disagreements={len(result.cross_validation_failures)}"
        )
    lines.append("result: " + ("PASS" if result.passed else "FAIL"))
    return "\n".join(lines)


@main.command()
@click.option("--thm", default="all", show_default=True,
              help=f"Theorem selector: all or one of {', '.join(THEOREM_IDS)}.")
@click.option("--exhaustive", "mode", flag_value="exhaustive",
              help="All n^n maps over canonical/seeded spaces, n up to --n.")
@click.option("--random", "mode", flag_value="random",
              help="Seeded random instances, --trials per n.")
@click.option("--n", "n_spec", default=None, help="Max n (exhaustive) or list like 4,5,6 (random).")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--max-value", type=int, default=10, show_default=True)
@click.option("--pool-size", type=int, default=50, show_default=True,
              help="Seeded spaces per n in exhaustive mode (n >= 3).")
@click.option("--cross-validate", is_flag=True,
              help="Also check reduction/oracle agreement on every pair set.")
@click.option("--demo", type=click.Choice(["completeness"]), default=None,
              help="Run a named demonstration instead of a sweep.")
@click.option("--report-json", type=click.Path(), default=None,
              help="Write the machine-readable run report here.")
@click.option("--census-csv", type=click.Path(), default=None,
              help="Write the per-n condition census here.")
@click.pass_context
def verify(ctx, thm, mode, n_spec, trials, seed, max_value, pool_size, cross_validate,
           demo, report_json, census_csv) -> None:
    """Verify the fixed-point claims over finite instances; exit 1 on violation."""
    if demo == "completeness":
        report = completeness_necessity_demo()
        for label, fr in (("punctured", report.punctured), ("closed", report.closed),
                          ("constant-punctured", report.constant_punctured)):
            click.echo(
                f"{label}: fixture={fr.fixture} start={fr.start}"
                f" epsdelta={'certified' if fr.epsdelta_certified else fr.margin.status.value}"
                f" (c={fr.margin.c})"
                f" solve={fr.solve_status.value}"
                f" attractor={fr.attractor}"
                f" attractor_in_domain={fr.attractor_in_domain}"
            )
        click.echo(f"verdict: {report.verdict}")
        ctx.exit(0 if report.consistent else EXIT_VIOLATION)
    if mode is None:
        raise click.UsageError("choose --exhaustive or --random (or --demo completeness)")
    theorems = THEOREM_IDS if thm == "all" else (thm,)
    if thm != "all" and thm not in THEOREM_IDS:
        raise click.UsageError(f"unknown theorem {thm!r}; pick all or {', '.join(THEOREM_IDS)}")
    if mode == "random":
        if seed is None:
            raise click.UsageError("--random requires --seed for reproducibility")
        if n_spec is None:
            raise click.UsageError("--random requires --n (a value or comma list)")
        try:
            ns = tuple(int(tok) for tok in n_spec.split(","))
        except ValueError:
            raise click.UsageError(f"bad --n {n_spec!r}") from None
        config = SweepConfig("random", ns, trials=trials, seed=seed, max_distance=max_value)
    else:
        try:
            n_max = int(n_spec) if n_spec is not None else 3
        except ValueError:
            raise click.UsageError(f"bad --n {n_spec!r}") from None
        config = SweepConfig(
            "exhaustive", tuple(range(1, n_max + 1)), seed=seed if seed is not None else 0,
            max_distance=max_value, pool_size=pool_size,
        )
    try:
        config = SweepConfig(config.mode, config.ns, config.trials, config.seed,
                             config.max_distance, config.pool_size, tuple(theorems))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    result = run_sweep(config, cross_validate_pairs=cross_validate)
    click.echo(_render_sweep(result))
    if report_json:
        Path(report_json).write_text(json.dumps(result.to_json_obj(), indent=2, sort_keys=True) + "\n")
    if census_csv:
        Path(census_csv).write_text(_census_csv(result))
    ctx.exit(0 if result.passed else EXIT_VIOLATION)


@main.command()
@click.option("--alpha", default="0,1/2", show_default=True, help="Limit values, comma list.")
@click.option("--coeff", default="1,1/2", show_default=True, help="Coefficients, comma list.")
@click.option("--ratio", default="1/2,1/4", show_default=True, help="Ratios in (0,1), comma list.")
@click.option("--ks", default="0,1,2,5", show_default=True, help="Shift offsets to sample.")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json-records"]),
              default="csv", show_default=True)
@click.pass_context
def sequences(ctx, alpha, coeff, ratio, ks, fmt) -> None:
    """Evaluate the five sequence conditions over a closed-form family."""
    try:
        family = [
            TestSequence.geometric(a, c, r)
            for a in _parse_fraction_list(alpha, "alpha")
            for c in _parse_fraction_list(coeff, "coeff")
            for r in _parse_fraction_list(ratio, "ratio")
        ]
        k_values = tuple(int(tok) for tok in ks.split(",") if tok.strip())
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    report = verify_lemma1(family, k_values)
    records = []
    for seq, row in zip(family, report.rows):
        record: dict[str, object] = {
            "label": row.label,
            "alpha": format_rational(seq.limit),
            "coeff": format_rational(seq.coeff),
            "ratio": format_rational(seq.ratio),
            "cond_i": row.i,
        }
        for k, value in row.ii.items():
            record[f"cond_ii_k{k}"] = value
        for k, value in row.iii.items():
            record[f"cond_iii_k{k}"] = value
        record["cond_iv"] = row.iv
        record["cond_v"] = row.v
        records.append(record)
    _emit_records(records, fmt)
    if report.strictness_witnessed:
        click.echo(f"# strictness witnessed by {report.strictness_witness}", err=True)
    else:
        click.echo("# warning: strictness unwitnessed (no sequence with cond_i and not cond_v)",
                   err=True)
    for violation in report.equivalence_violations:
        click.echo(f"# VIOLATION: {violation}", err=True)
    ctx.exit(0 if report.ok else EXIT_VIOLATION)


@main.command()
@click.argument("input_path", required=False)
@click.option("--random", "random_n", type=int, default=None, help="Generate an n-point space.")
@click.option("--unit", "unit_n", type=int, default=None, help="Use the n-point unit space.")
@click.option("--seed", type=int, default=None)
@click.option("--max-value", type=int, default=10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Write here instead of stdout.")
def space(input_path, random_n, unit_n, seed, max_value, fmt, out) -> None:
    """Import/export spaces and maps between the text and JSON formats."""
    sources = [s for s in (input_path, random_n, unit_n) if s is not None]
    if len(sources) != 1:
        raise click.UsageError("give exactly one of INPUT_PATH, --random, --unit")
    maps: list[SelfMap] = []
    if input_path is not None:
        target, maps = _load_input(input_path)
    elif unit_n is not None:
        target = unit_space(unit_n)
    else:
        if seed is None:
            raise click.UsageError("--random requires --seed for reproducibility")
        target = random_space(random_n, max_value, seed)
    payload = dumps_json(target, maps) if fmt == "json" else dumps_text(target, maps)
    if out:
        Path(out).write_text(payload)
    else:
        click.echo(payload, nl=False)


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


if __name__ == "__main__":
    main()
