"""graphalg CLI – coding graphs, diagonal verdicts and ψ transducers from the command line.

Every command prints JSON on stdout. Exit codes: 0 success, 1 a computed
negative answer, 2 bad input, 3 internal error.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from graphalg import __version__, settings
from graphalg.defs import ExitCode
from graphalg.errors import InputError, InternalError, PairSetError


class _Group(click.Group):
    """Maps library exceptions onto exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (InputError, ValidationError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(ExitCode.INPUT_ERROR)
        except InternalError as exc:
            click.echo(f"internal error: {exc}", err=True)
            ctx.exit(ExitCode.INTERNAL_ERROR)


def _emit(payload) -> None:
    click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


def _load_graph(graph_file: str):
    from graphalg.io.schemas import GraphModel

    return GraphModel.model_validate_json(Path(graph_file).read_text(encoding="utf-8")).to_graph()


def _load_pairset(graph_file: str, unitary_file: str, expand_vertex: bool = False):
    from graphalg.io.schemas import UnitaryModel

    g = _load_graph(graph_file)
    model = UnitaryModel.model_validate_json(Path(unitary_file).read_text(encoding="utf-8"))
    return model.to_pairset(g, expand_vertex=expand_vertex)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
    logging.getLogger(__name__).info("wrote %s", path)


graph_arg = click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
unitary_arg = click.argument("unitary_file", type=click.Path(exists=True, dir_okay=False))
fuel_opt = click.option(
    "--fuel", default=None, type=click.IntRange(min=1), envvar="GRAPHALG_FUEL",
    help="Cap on splitting rounds (default: GRAPHALG_FUEL or 10000)",
)


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="graphalg")
@click.option(
    "--log-level", default=None,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    help="Logging threshold for library messages (default: GRAPHALG_LOG_LEVEL or WARNING)",
)
def main(log_level: Optional[str]):
    """graphalg – polynomial endomorphisms of graph algebras."""
    logging.basicConfig(
        level=(log_level or settings.log_level()).upper(),
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


# ── validate ──────────────────────────────────────────────────────────

@main.command()
@graph_arg
@click.pass_context
def validate(ctx: click.Context, graph_file: str):
    """Check the standing assumptions on a graph."""
    from graphalg.graph import validate_standing_assumptions

    report = validate_standing_assumptions(_load_graph(graph_file))
    _emit(report.to_dict())
    if not report.accepted:
        ctx.exit(ExitCode.NEGATIVE)


# ── unitary ───────────────────────────────────────────────────────────

@main.group()
def unitary():
    """Pair-set unitaries u_J."""


@unitary.command("check")
@graph_arg
@unitary_arg
@click.option("--expand-vertex", is_flag=True, help="Expand pairs whose second component is a vertex")
@click.pass_context
def unitary_check(ctx: click.Context, graph_file: str, unitary_file: str, expand_vertex: bool):
    """Validate a pair set and print u_J."""
    from graphalg.algebra.elements import format_element
    from graphalg.algebra.unitary import is_permutative

    try:
        j = _load_pairset(graph_file, unitary_file, expand_vertex)
    except PairSetError as exc:
        _emit({"unitary": False, "reason": str(exc), "hint": exc.hint})
        ctx.exit(ExitCode.NEGATIVE)
    _emit({
        "unitary": True,
        "pairs": len(j),
        "permutative": is_permutative(j),
        "element": format_element(j.element),
        "warnings": list(j.warnings),
    })


@unitary.command("random")
@graph_arg
@click.option("--max-len", default=3, type=click.IntRange(min=1), show_default=True, help="Longest path in either partition")
@click.option("--seed", default=0, type=int, show_default=True, help="Random seed")
def unitary_random(graph_file: str, max_len: int, seed: int):
    """Draw a random pair set and print it as unitary JSON."""
    from graphalg.algebra.unitary import random_unitary
    from graphalg.io.schemas import UnitaryModel

    j = random_unitary(_load_graph(graph_file), max_len, seed)
    _emit(UnitaryModel.from_pairset(j).model_dump(mode="json"))


# ── coding ────────────────────────────────────────────────────────────

@main.group()
def coding():
    """Coding graphs."""


@coding.command("build")
@graph_arg
@unitary_arg
@click.option("--dot", "dot_file", default=None, type=click.Path(dir_okay=False), help="Write the coding graph as DOT")
def coding_build(graph_file: str, unitary_file: str, dot_file: str | None):
    """Build the coding graph of a pair set."""
    from graphalg.coding.graph import build, classify
    from graphalg.io.dot import emit_dot

    cg = build(_load_pairset(graph_file, unitary_file))
    result = cg.summary()
    result["negative_edges"] = len(cg.negative_edges())
    result["classification"] = classify(cg).classification.value
    _emit(result)
    if dot_file:
        _write(dot_file, emit_dot(cg))


# ── split ─────────────────────────────────────────────────────────────

@main.group()
def split():
    """The splitting algorithm."""


@split.command("run")
@graph_arg
@unitary_arg
@click.option("--trace", "trace_file", default=None, type=click.Path(dir_okay=False), help="Write the round trace as JSON lines")
@fuel_opt
def split_run(graph_file: str, unitary_file: str, trace_file: str | None, fuel: int | None):
    """Split until no negative edges remain or a non-positive cycle appears."""
    from graphalg.coding.splitting import run_splitting_algorithm
    from graphalg.io.schemas import UnitaryModel

    result = run_splitting_algorithm(_load_pairset(graph_file, unitary_file), fuel=fuel)
    _emit({
        "classification": result.classification.value,
        "rounds": result.rounds,
        "coding_graph": result.coding_graph.summary(),
        "unitary": UnitaryModel.from_pairset(result.pairset).model_dump(mode="json"),
    })
    if trace_file:
        _write(trace_file, "".join(line + "\n" for line in result.trace_lines()))


# ── verdict ───────────────────────────────────────────────────────────

@main.command()
@graph_arg
@unitary_arg
@fuel_opt
@click.pass_context
def verdict(ctx: click.Context, graph_file: str, unitary_file: str, fuel: int | None):
    """Decide whether Λ_J restricts to an automorphism of the diagonal."""
    from graphalg.coding.synchronization import diagonal_verdict, non_image_witness
    from graphalg.io.schemas import VerdictModel, format_path

    result = diagonal_verdict(_load_pairset(graph_file, unitary_file), fuel=fuel)
    payload = VerdictModel.from_verdict(result).model_dump(mode="json", exclude_none=True)
    missing = non_image_witness(result)
    if missing is not None:
        payload["not_in_image"] = f"P_{format_path(missing)}"
    _emit(payload)
    if not result.is_auto:
        ctx.exit(ExitCode.NEGATIVE)


# ── endo ──────────────────────────────────────────────────────────────

@main.group()
def endo():
    """The endomorphism Λ_J on paths and projections."""


@endo.command("image")
@graph_arg
@unitary_arg
@click.option("--path", "path_word", required=True, help="Path α; prints Λ_J(S_α)")
def endo_image(graph_file: str, unitary_file: str, path_word: str):
    """Λ_J(S_α) as a sum over coding paths."""
    from graphalg.algebra.elements import format_element
    from graphalg.coding.graph import image_of_path
    from graphalg.io.schemas import ElementModel, format_path

    j = _load_pairset(graph_file, unitary_file)
    alpha = j.graph.path(path_word)
    image = image_of_path(j, alpha)
    _emit({
        "path": format_path(alpha),
        "image": format_element(image),
        "terms": ElementModel.from_element(image).model_dump(mode="json")["terms"],
    })


@endo.command("onto")
@graph_arg
@unitary_arg
@click.option("--path", "path_word", required=True, help="Path μ; asks whether P_μ lies in Λ_J(D)")
@click.option("--depth", default=None, type=click.IntRange(min=1), help="Longest preimage length tried (default: GRAPHALG_ORACLE_DEPTH or 6)")
@click.pass_context
def endo_onto(ctx: click.Context, graph_file: str, unitary_file: str, path_word: str, depth: int | None):
    """Brute-force search for a diagonal preimage of P_μ."""
    from graphalg.coding.synchronization import diagonal_onto_oracle
    from graphalg.io.schemas import format_path

    j = _load_pairset(graph_file, unitary_file)
    mu = j.graph.path(path_word)
    found = diagonal_onto_oracle(j, mu, depth)
    _emit({
        "projection": f"P_{format_path(mu)}",
        "in_image": found.in_image,
        "depth": found.depth,
        "preimage": [f"P_{format_path(a)}" for a in found.family],
    })
    if not found.in_image:
        ctx.exit(ExitCode.NEGATIVE)


# ── psi ───────────────────────────────────────────────────────────────

@main.group()
def psi():
    """The path-space map ψ of an Auto pair set."""


@psi.command("eval")
@graph_arg
@unitary_arg
@click.option("--prefix", default="", help="Finite prefix of the input path")
@click.option("--period", required=True, help="Repeating part of the input path")
def psi_eval_cmd(graph_file: str, unitary_file: str, prefix: str, period: str):
    """Evaluate ψ on an eventually periodic infinite path."""
    from graphalg.dynamics.psi import psi_eval
    from graphalg.dynamics.words import EventuallyPeriodicWord, is_path_word
    from graphalg.io.schemas import WordModel

    j = _load_pairset(graph_file, unitary_file)
    w = EventuallyPeriodicWord.from_parts(prefix, period, j.graph)
    if not is_path_word(j.graph, w):
        raise InputError(f"{w} is not an infinite path")
    image = psi_eval(j, w)
    _emit({
        "input": str(w),
        "output": str(image),
        "word": WordModel.from_word(image).model_dump(mode="json"),
    })


# ── transducer ────────────────────────────────────────────────────────

@main.group()
def transducer():
    """Transducers realizing ψ."""


@transducer.command("build")
@graph_arg
@unitary_arg
@click.option("--dot", "dot_file", default=None, type=click.Path(dir_okay=False), help="Write the composite transducer as DOT")
@click.option("--table", "table_file", default=None, type=click.Path(dir_okay=False), help="Write the φ table as CSV")
def transducer_build(graph_file: str, unitary_file: str, dot_file: str | None, table_file: str | None):
    """Build the sliding-block, output and composite transducers."""
    from graphalg.dynamics.psi import psi_transducer
    from graphalg.io.dot import emit_dot

    machine = psi_transducer(_load_pairset(graph_file, unitary_file))
    _emit({
        "delay": machine.delay,
        "window": machine.table.window,
        "transducers": {
            t.name: {"states": len(t.states), "transitions": t.num_transitions}
            for t in (machine.sliding, machine.output, machine.composite)
        },
    })
    if dot_file:
        _write(dot_file, emit_dot(machine.composite))
    if table_file:
        machine.table.to_dataframe().to_csv(table_file, index=False)


# ── examples ──────────────────────────────────────────────────────────

@main.group()
def examples():
    """Bundled example fixtures."""


@examples.command("list")
def examples_list():
    """List the bundled fixtures."""
    from graphalg.io.fixtures import list_fixtures, load_fixture

    _emit({name: load_fixture(name).model.description for name in list_fixtures()})


@examples.command("run")
@click.argument("name")
@click.pass_context
def examples_run(ctx: click.Context, name: str):
    """Check one fixture (or ``all``) against its expectations."""
    from graphalg.io.fixtures import list_fixtures, load_fixture, run_fixture

    names = list_fixtures() if name == "all" else [name]
    reports = [run_fixture(load_fixture(n)) for n in names]
    _emit(reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports])
    if not all(r.passed for r in reports):
        ctx.exit(ExitCode.NEGATIVE)


# ── corpus ────────────────────────────────────────────────────────────

@main.group()
def corpus():
    """Randomized corpora of small graphs and pair sets."""


@corpus.command("run")
@click.option("--seeds", default=100, type=click.IntRange(min=1), show_default=True, help="Number of entries")
@click.option("--seed", default=0, type=int, show_default=True, help="First seed")
@click.option("--max-len", default=4, type=click.IntRange(min=1), show_default=True, help="Longest path in the random partitions")
@click.option("--csv", "csv_file", default=None, type=click.Path(dir_okay=False), help="Write one row per entry as CSV")
def corpus_run(seeds: int, seed: int, max_len: int, csv_file: str | None):
    """Summarize verdicts over consecutive seeds."""
    from graphalg.corpus import outcome_counts, summarize_corpus

    df = summarize_corpus(range(seed, seed + seeds), max_len=max_len)
    _emit({
        "entries": len(df),
        "outcomes": outcome_counts(df),
        "mean_splits": round(float(df["splits"].mean()), 3),
        "max_splits": int(df["splits"].max()),
    })
    if csv_file:
        df.to_csv(csv_file, index=False)


if __name__ == "__main__":
    main()
