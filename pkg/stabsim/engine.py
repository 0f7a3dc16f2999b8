"""Circuit execution against a tableau.

Work fans out to a fixed thread pool through `loop.run_in_executor`; `asyncio.gather`
is the barrier. Row ranges are static and contiguous per worker. Measurements are
bracketed by full barriers and use deterministic reductions (minimum for the pivot,
per-step phase sums for the deterministic branch), so every worker count produces the
same bits. The pool is used even with one worker so there is a single code path.
"""

import asyncio
import logging
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import bits
from .circuit import ChunkViolation, Circuit, Gate, GateKind, measurement_only, validate_chunks
from .errors import ConfigError, UnsupportedGateError
from .rng import CounterRng
from .tableau import (
    Tableau,
    apply_gate_rows,
    commit_flips,
    gate_flips,
    pivot_in,
    random_targets,
    resolve_scratch_sign,
    rowsum_into,
    scratch_phase_steps,
)

logger = logging.getLogger(__name__)

MODES = ("sim", "sim2d")


@dataclass(frozen=True)
class EngineConfig:
    workers: int = 1
    seed: int = 0
    audit: bool = False

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class MeasurementEntry:
    gate_index: int
    qubit: int
    outcome: int
    deterministic: bool


@dataclass
class MeasurementRecord:
    entries: list[MeasurementEntry] = field(default_factory=list)

    def append(self, entry: MeasurementEntry) -> None:
        self.entries.append(entry)

    def bits(self) -> np.ndarray:
        return np.array([e.outcome for e in self.entries], dtype=np.uint8)

    def bitstring(self) -> str:
        return "".join(str(e.outcome) for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[MeasurementEntry]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> MeasurementEntry:
        return self.entries[i]


@dataclass
class RunResult:
    tableau: Tableau
    record: MeasurementRecord
    fallback_chunks: list[int] = field(default_factory=list)
    diagnostics: list[ChunkViolation] = field(default_factory=list)

    def __iter__(self):
        """Unpacks as (tableau, record)."""
        yield self.tableau
        yield self.record


def partition(total: int, parts: int, start: int = 0) -> list[slice]:
    """Split [start, start + total) into at most `parts` contiguous non-empty slices."""
    parts = max(1, min(parts, total))
    bounds = np.linspace(0, total, parts + 1).astype(int) + start
    return [slice(int(a), int(b)) for a, b in zip(bounds, bounds[1:], strict=False) if b > a]


def _check_clifford(circuit: Circuit) -> None:
    for i, gate in enumerate(circuit.gates):
        if gate.kind in (GateKind.T, GateKind.TDG):
            raise UnsupportedGateError(
                f"gate {i} ({gate}) is not Clifford; use the transpiler for Clifford+T circuits"
            )


class Engine:
    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self._pool = ThreadPoolExecutor(
            max_workers=self.config.workers, thread_name_prefix="stabsim"
        )

    def close(self) -> None:
        self._pool.shutdown(wait=True)

    def __enter__(self) -> "Engine":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    async def _fan_out(self, fn: Callable[[slice], Any], parts: Sequence[slice]) -> list[Any]:
        loop = asyncio.get_running_loop()
        return await asyncio.gather(*(loop.run_in_executor(self._pool, fn, part) for part in parts))

    async def run(
        self, circuit: Circuit, mode: str = "sim", rng: CounterRng | None = None
    ) -> RunResult:
        if mode not in MODES:
            raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
        _check_clifford(circuit)
        rng = rng or CounterRng(self.config.seed)
        result = RunResult(Tableau.new_identity(circuit.n), MeasurementRecord())
        if mode == "sim":
            await self._run_range(result, circuit, 0, len(circuit.gates), rng)
            return result
        violations = validate_chunks(circuit)
        by_chunk: dict[int, list[ChunkViolation]] = {}
        for v in violations:
            by_chunk.setdefault(v.chunk, []).append(v)
        for k, start, stop in circuit.chunks():
            found = by_chunk.get(k)
            if not found:
                await self._run_chunk_2d(result.tableau, circuit.gates[start:stop])
                continue
            if not measurement_only(circuit, start, stop):
                logger.warning(
                    "chunk %d not parallel-safe (%s); running sequentially", k, found[0]
                )
                result.fallback_chunks.append(k)
                result.diagnostics.extend(found)
            await self._run_range(result, circuit, start, stop, rng)
        return result

    def _row_parts(self, t: Tableau) -> list[slice]:
        return partition(2 * t.n, self.config.workers)

    async def _run_range(
        self, result: RunResult, circuit: Circuit, start: int, stop: int, rng: CounterRng
    ) -> None:
        t = result.tableau
        segment: list[Gate] = []
        for i in range(start, stop):
            gate = circuit.gates[i]
            if gate.kind is not GateKind.M:
                segment.append(gate)
                continue
            await self._apply_segment(t, segment)
            segment = []
            ordinal = len(result.record)
            outcome, deterministic = await self._measure(t, gate.qubits[0], rng, ordinal)
            result.record.append(MeasurementEntry(i, gate.qubits[0], outcome, deterministic))
            self._audit(t)
        await self._apply_segment(t, segment)

    async def _apply_segment(self, t: Tableau, gates: list[Gate]) -> None:
        if not gates:
            return

        def work(rows: slice) -> None:
            for gate in gates:
                apply_gate_rows(t.x, t.z, t.r, gate, rows)

        logger.debug("segment of %d gates over %d workers", len(gates), self.config.workers)
        await self._fan_out(work, self._row_parts(t))
        self._audit(t)

    async def _run_chunk_2d(self, t: Tableau, gates: Sequence[Gate]) -> None:
        """Apply independent gates across the gate and row dimensions."""
        if not gates:
            return
        row_parts = self._row_parts(t)
        loop = asyncio.get_running_loop()
        tasks = [
            loop.run_in_executor(self._pool, gate_flips, t.x, t.z, gate, rows)
            for rows in row_parts
            for gate in gates
        ]
        flips = await asyncio.gather(*tasks)
        per_block = [flips[b * len(gates) : (b + 1) * len(gates)] for b in range(len(row_parts))]

        def commit(block: int) -> None:
            rows = row_parts[block]
            for f in per_block[block]:
                commit_flips(t.x, t.z, t.r, f, rows)

        await asyncio.gather(
            *(loop.run_in_executor(self._pool, commit, b) for b in range(len(row_parts)))
        )
        self._audit(t)

    async def _measure(
        self, t: Tableau, q: int, rng: CounterRng, ordinal: int
    ) -> tuple[int, bool]:
        n = t.n
        stab_parts = partition(n, self.config.workers)
        hits = await self._fan_out(lambda rows: pivot_in(t.x, q, rows), stab_parts)
        candidates = [h for h in hits if h is not None]

        if candidates:
            p = min(candidates)
            sx, sz, sr = t.x[p], t.z[p], int(t.r[p])

            def multiply(rows: slice) -> None:
                targets = random_targets(t.x, q, p, n, rows)
                if targets.size:
                    rowsum_into(t.x, t.z, t.r, targets, sx, sz, sr)

            await self._fan_out(multiply, self._row_parts(t))
            outcome = rng.bit(ordinal)
            t.collapse_pivot(p, q, outcome)
            logger.debug("measure q%d random pivot=%d -> %d", q, p, outcome)
            return outcome, False

        destab = np.flatnonzero(bits.column(t.x[n : 2 * n], q))
        if destab.size == 0:
            return 0, True
        word_parts = partition(t.x.shape[1], self.config.workers)
        partials = await self._fan_out(
            lambda words: scratch_phase_steps(t.x, t.z, destab, words), word_parts
        )
        s = t.scratch
        for words, (_, px, pz) in zip(word_parts, partials, strict=True):
            t.x[s, words], t.z[s, words] = px, pz
        g = np.sum([part[0] for part in partials], axis=0)
        outcome = resolve_scratch_sign(t.r[destab], g)
        t.x[s] = 0
        t.z[s] = 0
        t.r[s] = 0
        logger.debug("measure q%d deterministic -> %d", q, outcome)
        return outcome, True

    def _audit(self, t: Tableau) -> None:
        if self.config.audit:
            t.audit()

    async def run_shots(
        self, circuit: Circuit, shots: int, mode: str = "sim"
    ) -> "ShotHistogram":
        if shots < 1:
            raise ConfigError(f"shots must be >= 1, got {shots}")
        base = CounterRng(self.config.seed)
        sites = [(i, g.qubits[0]) for i, g in enumerate(circuit.gates) if g.kind is GateKind.M]
        hist = ShotHistogram(shots, sites, np.zeros(len(sites), dtype=np.int64), Counter())
        for shot in range(shots):
            result = await self.run(circuit, mode, rng=base.derive(shot))
            outcomes = result.record.bits()
            hist.ones += outcomes
            hist.joint[result.record.bitstring()] += 1
        return hist


@dataclass
class ShotHistogram:
    shots: int
    sites: list[tuple[int, int]]
    ones: np.ndarray
    joint: Counter

    def counts(self, site: int) -> tuple[int, int]:
        ones = int(self.ones[site])
        return self.shots - ones, ones

    def frequency(self, site: int) -> float:
        return float(self.ones[site]) / self.shots

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "sites": [
                {"gate": g, "qubit": q, "zeros": self.counts(k)[0], "ones": self.counts(k)[1]}
                for k, (g, q) in enumerate(self.sites)
            ],
            "joint": dict(sorted(self.joint.items())),
        }


def sim(circuit: Circuit, config: EngineConfig | None = None) -> RunResult:
    """Gate-by-gate simulation from |0...0>."""
    with Engine(config) as engine:
        return asyncio.run(engine.run(circuit, "sim"))


def sim2d(circuit: Circuit, chunk_size_hint: int = 0, config: EngineConfig | None = None) -> RunResult:
    """Chunk-parallel simulation; chunks that fail validation run sequentially.

    `chunk_size_hint` is informational: chunk boundaries come from the circuit's marks.
    """
    logger.debug("sim2d with %d chunk marks (hint %d)", len(circuit.chunk_marks), chunk_size_hint)
    with Engine(config) as engine:
        return asyncio.run(engine.run(circuit, "sim2d"))


def run_shots(
    circuit: Circuit, shots: int, config: EngineConfig | None = None, mode: str = "sim"
) -> ShotHistogram:
    with Engine(config) as engine:
        return asyncio.run(engine.run_shots(circuit, shots, mode))
