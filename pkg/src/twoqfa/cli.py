"""Command-line interface.

Subcommands: validate, run, sweep, transcribe, qft.  Machines are selected
by built-in name (m1, m2, m3) or by path to a machine text file; the path
adapters (--n-paths) apply only to the built-in split machines.  End-markers
are never typed by the user; words are wrapped internally.  For the
parenthesis alphabet the aliases "o" and "c" are accepted to ease shell
quoting.

Exit status: 0 on success, 1 when validation fails, 2 on usage errors
(including bad words, malformed machine files and malformed recipes).
Structured output is one JSON record per line with a fixed key order, so
parsing a record and re-emitting it is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import click

from .baselines import LanguageId, sweep_compare
from .chem import Recipe, parse_recipe, signature, transcribe
from .core import DEFAULT_HALT_THRESHOLD, RunResult, run
from .errors import AlphabetError, RecipeError, SpecFormatError
from .machine import TwoWayQfaSpec, validate
from .machines import build_m1, build_m2, build_m3, qft_matrix
from .specfile import load_spec, save_spec

_FORMATS = click.Choice(["human", "structured", "csv"])
_REPORT_FORMATS = click.Choice(["human", "structured"])


def _load_machine(machine: str, n_paths: int | None) -> TwoWayQfaSpec:
    if machine == "m1":
        if n_paths is not None:
            raise click.UsageError("--n-paths is not allowed for machine m1")
        return build_m1()
    if machine in ("m2", "m3"):
        if n_paths is None:
            raise click.UsageError(f"--n-paths is required for machine {machine}")
        builder = build_m2 if machine == "m2" else build_m3
        try:
            return builder(n_paths)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    path = Path(machine)
    if not path.is_file():
        raise click.UsageError(
            f"machine {machine!r} is neither a built-in name (m1, m2, m3) nor a file"
        )
    if n_paths is not None:
        raise click.UsageError("--n-paths is not allowed with a machine file")
    try:
        return load_spec(str(path))
    except SpecFormatError as exc:
        raise click.UsageError(f"bad machine file {machine}: {exc}") from exc


def _apply_aliases(spec: TwoWayQfaSpec, word: str) -> str:
    if "(" in spec.input_alphabet:
        return word.replace("o", "(").replace("c", ")")
    return word


def _run_record(spec: TwoWayQfaSpec, word: str, result: RunResult) -> dict:
    return {
        "machine": spec.name or "custom",
        "N": spec.n_paths,
        "word": word,
        "p_accept": result.p_accept,
        "p_reject": result.p_reject,
        "p_residual": result.p_residual,
        "steps": result.steps,
        "halted": result.halted,
    }


def _emit_csv(record: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(record.keys())
    writer.writerow(
        repr(v) if isinstance(v, float) else v for v in record.values()
    )
    return buffer.getvalue()


def _read_recipe(path: str) -> Recipe:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot read recipe {path}: {exc}") from exc
    try:
        return parse_recipe(text)
    except RecipeError as exc:
        raise click.UsageError(str(exc)) from exc


@click.group()
def main() -> None:
    """Simulate two-way quantum finite automata."""


@main.command(name="validate")
@click.option("--machine", required=True, help="m1, m2, m3 or a machine file path.")
@click.option("--n-paths", type=int, default=None, help="Path count for m2/m3.")
@click.option("--format", "fmt", type=_REPORT_FORMATS, default="human")
@click.option(
    "--export-spec", "export_path", type=click.Path(dir_okay=False), default=None,
    help="Also write the machine to this file in the machine text format.",
)
@click.pass_context
def validate_cmd(ctx, machine, n_paths, fmt, export_path) -> None:
    """Check per-symbol unitarity and the well-formedness conditions."""
    spec = _load_machine(machine, n_paths)
    report = validate(spec)
    if export_path is not None:
        save_spec(spec, export_path)
    if fmt == "structured":
        record = {
            "machine": spec.name or "custom",
            "N": spec.n_paths,
            "all_ok": report.all_ok,
            "tolerance": report.tolerance,
            "unitarity_ok": report.unitarity_ok,
            "unitarity_max_deviation": report.unitarity_max_deviation,
            "local_probability_ok": report.local_probability_ok,
            "local_probability_max_deviation": report.local_probability_max_deviation,
            "separability1_ok": report.separability1_ok,
            "separability1_max_deviation": report.separability1_max_deviation,
            "separability2_ok": report.separability2_ok,
            "separability2_max_deviation": report.separability2_max_deviation,
            "padded_entries": [list(entry) for entry in report.padded_entries],
        }
        click.echo(json.dumps(record))
    else:
        click.echo(f"machine {spec.name or 'custom'} (N={spec.n_paths}, "
                   f"{len(spec.states)} states)")
        rows = [
            ("per-symbol unitarity", report.unitarity_ok,
             report.unitarity_max_deviation),
            ("local probability", report.local_probability_ok,
             report.local_probability_max_deviation),
            ("separability (shifted overlap)", report.separability1_ok,
             report.separability1_max_deviation),
            ("separability (double shift)", report.separability2_ok,
             report.separability2_max_deviation),
        ]
        for label, ok, deviation in rows:
            status = "pass" if ok else "FAIL"
            click.echo(f"  {label:32s} {status}  (max deviation {deviation:.3e})")
        if report.padded_entries:
            pads = ", ".join(f"{sym}:{state}" for sym, state in report.padded_entries)
            click.echo(f"  padded entries: {pads}")
        click.echo(f"overall: {'pass' if report.all_ok else 'FAIL'} "
                   f"(tolerance {report.tolerance:g})")
    if not report.all_ok:
        ctx.exit(1)


@main.command(name="run")
@click.option("--machine", required=True, help="m1, m2, m3 or a machine file path.")
@click.option("--n-paths", type=int, default=None, help="Path count for m2/m3.")
@click.option("--word", default=None, help="Input word (end-markers added internally).")
@click.option(
    "--recipe", "recipe_path", type=click.Path(dir_okay=False), default=None,
    help="Recipe file to transcribe and run instead of --word.",
)
@click.option("--format", "fmt", type=_FORMATS, default="human")
@click.option("--max-steps", type=int, default=None)
@click.option("--halt-threshold", type=float, default=DEFAULT_HALT_THRESHOLD)
@click.option("--trace", is_flag=True, help="Print per-step probabilities (human only).")
def run_cmd(machine, n_paths, word, recipe_path, fmt, max_steps, halt_threshold, trace):
    """Run one word (or one transcribed recipe) and report probabilities."""
    if (word is None) == (recipe_path is None):
        raise click.UsageError("exactly one of --word and --recipe is required")
    if trace and fmt != "human":
        raise click.UsageError("--trace is only available with --format human")
    spec = _load_machine(machine, n_paths)
    recipe = None
    if recipe_path is not None:
        recipe = _read_recipe(recipe_path)
        try:
            word = transcribe(recipe)
        except RecipeError as exc:
            raise click.UsageError(str(exc)) from exc
    else:
        word = _apply_aliases(spec, word)
    try:
        result = run(
            spec, word,
            max_steps=max_steps, halt_threshold=halt_threshold, trace=trace,
        )
    except AlphabetError as exc:
        raise click.UsageError(str(exc)) from exc

    record = _run_record(spec, word, result)
    sig = signature(recipe.system, result) if recipe is not None else None
    if sig is not None:
        record["verdict"] = sig.verdict
        record["descriptor"] = sig.descriptor

    if fmt == "structured":
        click.echo(json.dumps(record))
    elif fmt == "csv":
        click.echo(_emit_csv(record), nl=False)
    else:
        click.echo(f"machine {record['machine']} (N={record['N']}) "
                   f"on word {word!r}")
        if trace and result.trace is not None:
            for index, (acc, rej, residual) in enumerate(result.trace, start=1):
                click.echo(f"  step {index:4d}: p_accept={acc:.9f} "
                           f"p_reject={rej:.9f} residual={residual:.9f}")
        click.echo(f"  p_accept   = {result.p_accept:.9f}")
        click.echo(f"  p_reject   = {result.p_reject:.9f}")
        click.echo(f"  p_residual = {result.p_residual:.3g}")
        click.echo(f"  steps      = {result.steps}")
        click.echo(f"  halted     = {'yes' if result.halted else 'no'}")
        if sig is not None:
            click.echo(f"  signature  = {sig.verdict}: {sig.descriptor}")


@main.command(name="sweep")
@click.option("--machine", required=True, help="m1, m2, m3 or a machine file path.")
@click.option("--n-paths", type=int, default=None, help="Path count for m2/m3.")
@click.option(
    "--lang", required=True,
    type=click.Choice([lang.value for lang in LanguageId], case_sensitive=False),
)
@click.option("--max-len", type=int, default=6, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="human")
def sweep_cmd(machine, n_paths, lang, max_len, fmt) -> None:
    """Compare machine verdicts against a classical oracle, exhaustively."""
    spec = _load_machine(machine, n_paths)
    language = LanguageId(lang.upper())
    try:
        report = sweep_compare(spec, language, max_len)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if fmt == "structured":
        click.echo(json.dumps(report.to_json_obj()))
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(
            ["word", "machine_accepts", "oracle_accepts", "p_accept", "p_reject"]
        )
        for m in report.mismatches:
            writer.writerow(
                [m.word, m.machine_accepts, m.oracle_accepts,
                 repr(m.p_accept), repr(m.p_reject)]
            )
        click.echo(buffer.getvalue(), nl=False)
    else:
        click.echo(f"machine {report.machine} (N={report.n_paths}) vs "
                   f"{report.language}, words up to length {report.max_len}")
        click.echo(f"  words checked : {report.total_words}")
        click.echo(f"  mismatches    : {len(report.mismatches)}")
        for m in report.mismatches[:20]:
            click.echo(f"    {m.word!r}: machine "
                       f"{'accepts' if m.machine_accepts else 'rejects'} "
                       f"(p_accept={m.p_accept:.6f}), oracle "
                       f"{'accepts' if m.oracle_accepts else 'rejects'}")
        if len(report.mismatches) > 20:
            click.echo(f"    ... and {len(report.mismatches) - 20} more")
        if report.bound_checked:
            click.echo(f"  bound violations: {len(report.bound_violations)}")
            for v in report.bound_violations[:20]:
                click.echo(f"    {v.word!r}: wanted {v.requirement}, got "
                           f"p_accept={v.p_accept:.6f} p_reject={v.p_reject:.6f}")


@main.command(name="transcribe")
@click.option(
    "--recipe", "recipe_path", required=True, type=click.Path(dir_okay=False)
)
@click.option("--format", "fmt", type=_REPORT_FORMATS, default="human")
def transcribe_cmd(recipe_path, fmt) -> None:
    """Transcribe a recipe file into an input word."""
    recipe = _read_recipe(recipe_path)
    try:
        word = transcribe(recipe)
    except RecipeError as exc:
        raise click.UsageError(str(exc)) from exc
    if fmt == "structured":
        record = {
            "system": recipe.system.value,
            "aliquots": len(recipe.aliquots),
            "word": word,
        }
        click.echo(json.dumps(record))
    else:
        click.echo(f"system {recipe.system.value}: {len(recipe.aliquots)} aliquots "
                   f"-> word {word!r}")


@main.command(name="qft")
@click.option("--n", "n_paths", type=int, required=True, help="Path count N >= 1.")
@click.option("--format", "fmt", type=_REPORT_FORMATS, default="human")
def qft_cmd(n_paths, fmt) -> None:
    """Print the N-path Fourier acceptance matrix."""
    if n_paths < 1:
        raise click.UsageError("--n must be at least 1")
    matrix = qft_matrix(n_paths)
    if fmt == "structured":
        record = {
            "n": n_paths,
            "matrix": [
                [[value.real, value.imag] for value in row] for row in matrix
            ],
        }
        click.echo(json.dumps(record))
    else:
        click.echo(f"Fourier acceptance matrix for N={n_paths}:")
        for row in matrix:
            cells = "  ".join(
                f"{value.real:+.6f}{value.imag:+.6f}i" for value in row
            )
            click.echo(f"  {cells}")


if __name__ == "__main__":
    main()
