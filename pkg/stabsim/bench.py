"""Timing harness. Timings cover the simulation call only; parsing and generation are excluded."""

import asyncio
import logging
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, fields

from .circuit import Circuit
from .engine import Engine, EngineConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    circuit: str
    n: int
    gates: int
    measurements: int
    workers: int
    mode: str
    seed: int
    wall_time_ms: float
    peak_bits: int


COLUMNS = tuple(f.name for f in fields(BenchRow))


def time_run(name: str, circuit: Circuit, workers: int, mode: str, seed: int) -> BenchRow:
    with Engine(EngineConfig(workers=workers, seed=seed)) as engine:
        start = time.perf_counter()
        result = asyncio.run(engine.run(circuit, mode))
        elapsed = (time.perf_counter() - start) * 1000.0
    row = BenchRow(
        name,
        circuit.n,
        len(circuit.gates),
        circuit.measurement_count,
        workers,
        mode,
        seed,
        round(elapsed, 3),
        result.tableau.allocated_bits,
    )
    logger.debug("bench %s", row)
    return row


def run_bench(
    circuits: Iterable[tuple[str, Circuit]],
    workers: Sequence[int] = (1,),
    modes: Sequence[str] = ("sim",),
    seed: int = 0,
) -> list[BenchRow]:
    return [
        time_run(name, circuit, w, mode, seed)
        for name, circuit in circuits
        for mode in modes
        for w in workers
    ]


def speedup(rows: Iterable[BenchRow]) -> dict[tuple[str, str, int], float]:
    """Wall-time ratio against the single-worker row of the same circuit and mode."""
    rows = list(rows)
    base = {(r.circuit, r.mode): r.wall_time_ms for r in rows if r.workers == 1}
    out = {}
    for r in rows:
        ref = base.get((r.circuit, r.mode))
        if ref is not None and r.wall_time_ms > 0:
            out[(r.circuit, r.mode, r.workers)] = ref / r.wall_time_ms
    return out

