import logging
from enum import Enum
from pathlib import Path
from typing import Annotated

import typer

from .circuit import load_circuit, read_input
from .commands import bench_app, emit, engine_config, fail_on_error, verify_app
from .config import Config
from .engine import run_shots
from .engine import sim as run_sim
from .engine import sim2d as run_sim2d
from .grouping import GroupMode, emit_groups, group_greedy, group_stats, parse_hamiltonian
from .pbc import emit_pbc
from .pbc import transpile as run_transpile
from .render import OutputFormat, render
from .verify import verify_transpile


class SimMode(str, Enum):
    SIM = "sim"
    SIM2D = "sim2d"


class Scan(str, Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


_INPUT = Annotated[
    Path,
    typer.Option("--input", "-i", help="Circuit file (.stab native or .qasm subset)."),
]
_INPUT_FORMAT = Annotated[
    str | None,
    typer.Option("--input-format", help="Override input detection: stab or qasm."),
]
_FORMAT = Annotated[
    OutputFormat,
    typer.Option("--format", "-f", help="Output format.", case_sensitive=False),
]
_OUTPUT = Annotated[
    Path | None,
    typer.Option("--output", "-o", help="Write the artifact here instead of stdout."),
]
_SEED = Annotated[int | None, typer.Option("--seed", "-s", help="Measurement seed.")]
_WORKERS = Annotated[int | None, typer.Option("--workers", "-w", min=1, help="Worker threads.")]


app = typer.Typer(
    help="Stabilizer tableau simulation, Pauli grouping and Clifford+T transpilation.",
    invoke_without_command=True,
    pretty_exceptions_enable=False,
    rich_markup_mode="rich",
)


@app.callback()
def main(
    ctx: typer.Context,
    debug: Annotated[
        bool | None,
        typer.Option(
            "--debug/--no-debug",
            "-d/-D",
            help="Enable or disable debug logging for this run.",
        ),
    ] = None,
    workers: _WORKERS = None,
    seed: _SEED = None,
) -> None:
    with fail_on_error():
        config = Config.load_or_default()
    if debug or (debug is None and config.debug_mode):
        logging.basicConfig(level=logging.DEBUG)

    ctx.obj = {"config": config, "workers": workers, "seed": seed}

    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(code=2)


@app.command()
def sim(
    ctx: typer.Context,
    input: _INPUT,
    mode: Annotated[SimMode, typer.Option("--mode", "-m", help="Execution mode.")] = SimMode.SIM,
    seed: _SEED = None,
    workers: _WORKERS = None,
    shots: Annotated[int, typer.Option("--shots", "-k", min=0, help="Repeat and histogram.")] = 0,
    fmt: _FORMAT = OutputFormat.TEXT,
    dump: Annotated[bool, typer.Option("--dump", help="Print the final tableau.")] = False,
    input_format: _INPUT_FORMAT = None,
):
    """Simulate a Clifford circuit and print its measurement record."""
    with fail_on_error():
        cfg = engine_config(ctx, workers, seed)
        circuit = load_circuit(input, input_format)
        if shots:
            hist = run_shots(circuit, shots, cfg, mode.value)
            typer.echo(render({"type": "histogram", "payload": hist.to_dict()}, fmt))
            return
        if mode is SimMode.SIM:
            result = run_sim(circuit, cfg)
        else:
            result = run_sim2d(circuit, 0, cfg)
    payload = {
        "entries": [
            {
                "gate": e.gate_index,
                "qubit": e.qubit,
                "outcome": e.outcome,
                "deterministic": e.deterministic,
            }
            for e in result.record
        ],
        "fallback_chunks": result.fallback_chunks,
    }
    typer.echo(render({"type": "record", "payload": payload}, fmt))
    if dump:
        typer.echo(render({"type": "dump", "payload": result.tableau.dump()}))


@app.command()
def group(
    input: _INPUT,
    mode: Annotated[
        GroupMode, typer.Option("--mode", "-m", help="Commutation rule.")
    ] = GroupMode.QWC,
    output: _OUTPUT = None,
    fmt: _FORMAT = OutputFormat.JSON,
):
    """Greedily partition Hamiltonian terms into commuting groups."""
    with fail_on_error():
        terms = parse_hamiltonian(read_input(input))
        grouped = group_greedy(terms, mode)
        stats = render({"type": "stats", "payload": group_stats(grouped).to_dict()}, fmt)
        emit(emit_groups(grouped), stats, output)


@app.command()
def transpile(
    ctx: typer.Context,
    input: _INPUT,
    output: _OUTPUT = None,
    verify: Annotated[
        bool, typer.Option("--verify", help="Check against the dense oracle.")
    ] = False,
    scan: Annotated[Scan, typer.Option("--scan", help="Layer placement order.")] = Scan.FORWARD,
    fmt: _FORMAT = OutputFormat.JSON,
    input_format: _INPUT_FORMAT = None,
):
    """Transpile a Clifford+T circuit into PBC v1 rotation layers and measurements."""
    with fail_on_error():
        circuit = load_circuit(input, input_format)
        program = run_transpile(circuit, scan.value)
        payload = program.stats.to_dict()
        config: Config = ctx.obj["config"]
        report = (
            verify_transpile(circuit, program, max_qubits=config.oracle_max_qubits)
            if verify
            else None
        )
        if report is not None and fmt is not OutputFormat.CSV:
            payload["verify"] = report.to_dict()
        emit(emit_pbc(program), render({"type": "stats", "payload": payload}, fmt), output)
    if report is not None and not report.passed:
        typer.echo(render({"type": "error", "payload": "oracle equivalence check failed"}), err=True)
        raise typer.Exit(code=1)


@app.command(name="set")
def set_option(
    ctx: typer.Context,
    key: Annotated[str, typer.Argument(help="workers, seed, audit, debug_mode or oracle_max_qubits.")],
    value: Annotated[str, typer.Argument(help="New value.")],
):
    """Persist a default in the local configuration file."""
    config: Config = ctx.obj["config"]
    with fail_on_error():
        config.set_option(key, value)
    typer.echo(f"Configuration updated: {key}={getattr(config, key)}")


app.add_typer(bench_app)
app.add_typer(verify_app)
