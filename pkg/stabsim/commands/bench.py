"""`stabsim bench`: time generated workloads and report CSV rows."""

import logging
from dataclasses import astuple
from pathlib import Path
from typing import Annotated

import typer

from ..bench import COLUMNS, BenchRow, run_bench, speedup
from ..circuit import Circuit, emit_native
from ..errors import ConfigError
from ..qec import random_layered_circuit, surface_code_circuit
from ..render import OutputFormat, render
from . import emit, engine_config, fail_on_error

logger = logging.getLogger(__name__)

bench_app = typer.Typer(name="bench", help="Time surface-code and random layered workloads.")

_WORKERS_SWEEP = Annotated[
    str | None,
    typer.Option("--workers-sweep", help="Comma-separated worker counts, e.g. 1,2,4."),
]
_MODE = Annotated[
    list[str] | None,
    typer.Option("--mode", "-m", help="sim or sim2d; repeat to time both."),
]
_FORMAT = Annotated[
    OutputFormat, typer.Option("--format", "-f", help="Output format.", case_sensitive=False)
]
_OUTPUT = Annotated[Path | None, typer.Option("--output", "-o", help="Write the rows here.")]
_EMIT = Annotated[
    Path | None,
    typer.Option("--emit", help="Directory to write the generated circuits in native format."),
]


def parse_sweep(text: str | None, what: str) -> list[int]:
    if not text:
        return []
    values = []
    for token in text.split(","):
        token = token.strip()
        try:
            value = int(token)
        except ValueError:
            raise ConfigError(f"{what} sweep entry {token!r} is not an integer") from None
        values.append(value)
    return values


def _report(
    ctx: typer.Context,
    circuits: list[tuple[str, Circuit]],
    workers_sweep: str | None,
    modes: list[str] | None,
    fmt: OutputFormat,
    output: Path | None,
    emit_dir: Path | None,
) -> None:
    settings = engine_config(ctx)
    workers = parse_sweep(workers_sweep, "workers") or [settings.workers]
    if emit_dir is not None:
        emit_dir.mkdir(parents=True, exist_ok=True)
        for name, circuit in circuits:
            (emit_dir / f"{name}.stab").write_text(emit_native(circuit), encoding="utf-8")
    rows: list[BenchRow] = run_bench(circuits, workers, modes or ["sim"], settings.seed)
    text = render(
        {"type": "bench", "payload": {"columns": list(COLUMNS), "rows": [list(astuple(r)) for r in rows]}},
        fmt,
    )
    ratios = {
        f"{name}/{mode}/w{w}": round(ratio, 3)
        for (name, mode, w), ratio in sorted(speedup(rows).items())
        if w > 1
    }
    if not ratios:
        if output is not None:
            output.write_text(text + "\n", encoding="utf-8")
        else:
            typer.echo(text)
        return
    logger.info("speedup over one worker: %s", ratios)
    emit(text + "\n", render({"type": "stats", "payload": ratios}, fmt), output)


@bench_app.command(name="surface")
def surface_command(
    ctx: typer.Context,
    distance: Annotated[int, typer.Option("--distance", "-d", help="Code distance.")] = 3,
    rounds: Annotated[int, typer.Option("--rounds", "-r", min=1, help="Syndrome rounds.")] = 1,
    sweep: Annotated[
        str | None, typer.Option("--sweep", help="Comma-separated distances; overrides --distance.")
    ] = None,
    workers_sweep: _WORKERS_SWEEP = None,
    mode: _MODE = None,
    fmt: _FORMAT = OutputFormat.CSV,
    output: _OUTPUT = None,
    emit_dir: _EMIT = None,
):
    """Rotated surface-code syndrome extraction."""
    with fail_on_error():
        distances = parse_sweep(sweep, "distance") or [distance]
        circuits = [(f"surface_d{d}_r{rounds}", surface_code_circuit(d, rounds)) for d in distances]
        _report(ctx, circuits, workers_sweep, mode, fmt, output, emit_dir)


@bench_app.command(name="random")
def random_command(
    ctx: typer.Context,
    qubits: Annotated[int, typer.Option("--qubits", "-n", help="Qubit count (even, >= 4).")] = 64,
    sweep: Annotated[
        str | None, typer.Option("--sweep", help="Comma-separated qubit counts; overrides --qubits.")
    ] = None,
    seed: Annotated[int | None, typer.Option("--seed", "-s", help="Generator seed.")] = None,
    workers_sweep: _WORKERS_SWEEP = None,
    mode: _MODE = None,
    fmt: _FORMAT = OutputFormat.CSV,
    output: _OUTPUT = None,
    emit_dir: _EMIT = None,
):
    """Randomized layered H/S + CX workload with partial measurement."""
    with fail_on_error():
        seed = engine_config(ctx, seed=seed).seed
        sizes = parse_sweep(sweep, "qubit") or [qubits]
        circuits = [(f"random_n{n}_s{seed}", random_layered_circuit(n, seed)) for n in sizes]
        _report(ctx, circuits, workers_sweep, mode, fmt, output, emit_dir)
