from typing import Annotated

import typer

from ..config import Config
from ..render import OutputFormat, render
from ..verify import verify_tableau, verify_transpile_random
from . import engine_config, fail_on_error

verify_app = typer.Typer(name="verify", help="Differential tests against the dense oracle.")

_TRIALS = Annotated[int, typer.Option("--trials", "-t", min=1, help="Random circuits to check.")]
_SEED = Annotated[int | None, typer.Option("--seed", "-s", help="Generator seed.")]
_FORMAT = Annotated[
    OutputFormat, typer.Option("--format", "-f", help="Output format.", case_sensitive=False)
]


def _cap(ctx: typer.Context, max_qubits: int) -> int:
    config: Config = ctx.obj["config"]
    return min(max_qubits, config.oracle_max_qubits)


def _finish(payload: dict, fmt: OutputFormat, passed: bool) -> None:
    typer.echo(render({"type": "report", "payload": payload}, fmt))
    if not passed:
        raise typer.Exit(code=1)


@verify_app.command(name="tableau")
def tableau_command(
    ctx: typer.Context,
    trials: _TRIALS = 100,
    max_qubits: Annotated[int, typer.Option("--max-qubits", "-n", min=1)] = 10,
    max_gates: Annotated[int, typer.Option("--max-gates", "-g", min=1)] = 200,
    seed: _SEED = None,
    fmt: _FORMAT = OutputFormat.TEXT,
):
    """Random Clifford circuits: measurement classification and stabilizer expectations."""
    with fail_on_error():
        report = verify_tableau(
            trials, _cap(ctx, max_qubits), engine_config(ctx, seed=seed).seed, max_gates
        )
    payload = report.to_dict()
    if fmt is OutputFormat.CSV:
        payload["failures"] = len(report.failures)
    _finish(payload, fmt, report.passed)


@verify_app.command(name="transpile")
def transpile_command(
    ctx: typer.Context,
    trials: _TRIALS = 100,
    max_qubits: Annotated[int, typer.Option("--max-qubits", "-n", min=1)] = 6,
    max_gates: Annotated[int, typer.Option("--max-gates", "-g", min=1)] = 60,
    seed: _SEED = None,
    fmt: _FORMAT = OutputFormat.TEXT,
):
    """Random Clifford+T circuits: transpiled statistics against the dense state."""
    with fail_on_error():
        results = verify_transpile_random(
            trials, _cap(ctx, max_qubits), engine_config(ctx, seed=seed).seed, max_gates
        )
    failures = [
        f"trial {i} (n={c.n}, {len(c.gates)} gates): tv={r.tv_distance:.3g}"
        for i, (c, _, r) in enumerate(results)
        if not r.passed
    ]
    initial = sum(p.stats.initial_t for _, p, _ in results)
    final = sum(p.stats.final_rotations_rowcount for _, p, _ in results)
    reduced = sum(p.stats.final_rotations_rowcount < p.stats.initial_t for _, p, _ in results)
    payload = {
        "trials": trials,
        "initial_t": initial,
        "final_rowcount": final,
        "reduced": reduced,
        "max_tv": max((r.tv_distance for _, _, r in results), default=0.0),
        "failures": len(failures) if fmt is OutputFormat.CSV else failures,
        "passed": not failures,
    }
    _finish(payload, fmt, not failures)
