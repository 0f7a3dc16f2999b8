from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import typer

from ..config import Config
from ..engine import EngineConfig
from ..errors import StabError


@contextmanager
def fail_on_error() -> Iterator[None]:
    """Report library and filesystem errors on stderr and exit with status 1."""
    try:
        yield
    except (StabError, OSError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1) from None


def engine_config(
    ctx: typer.Context, workers: int | None = None, seed: int | None = None
) -> EngineConfig:
    """Command flags, then the global flags, then saved settings."""
    config: Config = ctx.obj["config"]
    return config.engine_config(
        workers=ctx.obj["workers"] if workers is None else workers,
        seed=ctx.obj["seed"] if seed is None else seed,
    )


def emit(artifact: str, stats: str, output: Path | None) -> None:
    """Artifact to `output` and stats to stdout, or artifact to stdout and stats to stderr."""
    if output is not None:
        output.write_text(artifact, encoding="utf-8")
        typer.echo(stats)
    else:
        typer.echo(artifact, nl=False)
        typer.echo(stats, err=True)


from .bench import bench_app  # noqa: E402
from .verify import verify_app  # noqa: E402

__all__ = ["bench_app", "emit", "engine_config", "fail_on_error", "verify_app"]
