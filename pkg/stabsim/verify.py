"""Differential checks of the tableau and the transpiler against the dense oracle."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, GateKind
from .oracle import (
    MAX_QUBITS,
    DenseState,
    measure_pauli_distribution,
    total_variation,
    z_distribution,
)
from .pbc import PbcProgram, transpile
from .qec import random_clifford_circuit, random_clifford_t_circuit
from .rng import CounterRng
from .tableau import Tableau

logger = logging.getLogger(__name__)

ANALYTIC_TOLERANCE = 1e-9
_EPS = 1e-9


@dataclass
class TableauReport:
    trials: int
    measurements: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "measurements": self.measurements,
            "failures": self.failures,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class TranspileReport:
    tv_distance: float
    passed: bool
    analytic: bool
    shots: int

    def to_dict(self) -> dict:
        return {
            "tv_distance": self.tv_distance,
            "passed": self.passed,
            "analytic": self.analytic,
            "shots": self.shots,
        }


def check_tableau_circuit(
    c: Circuit, seed: int = 0, max_qubits: int = MAX_QUBITS
) -> tuple[int, list[str]]:
    """Run `c` through a tableau and the oracle in lockstep, following the tableau's
    measurement branch. Returns (measurements checked, failure messages)."""
    t = Tableau.new_identity(c.n)
    state = DenseState.zero(c.n, max_qubits)
    rng = CounterRng(seed)
    failures: list[str] = []
    ordinal = 0
    for i, gate in enumerate(c.gates):
        if gate.kind is not GateKind.M:
            t.apply_gate(gate)
            state.apply(gate)
            continue
        q = gate.qubits[0]
        p1 = state.probability_one(q)
        res = t.measure_z(q, coin=rng.bit(ordinal))
        ordinal += 1
        degenerate = p1 < _EPS or p1 > 1 - _EPS
        if res.deterministic != degenerate:
            failures.append(f"gate {i}: deterministic={res.deterministic} but P(1)={p1:.6f}")
            break
        if res.deterministic and res.outcome != round(p1):
            failures.append(f"gate {i}: outcome {res.outcome} but P(1)={p1:.6f}")
            break
        if not res.deterministic and abs(p1 - 0.5) > _EPS:
            failures.append(f"gate {i}: random outcome but P(1)={p1:.6f}")
            break
        state.collapse(q, res.outcome)
    if not failures:
        for k, s in enumerate(t.stabilizers()):
            value = state.expectation(s)
            if abs(value - 1.0) > ANALYTIC_TOLERANCE:
                failures.append(f"stabilizer {k} {s} has expectation {value:.6f}")
    return ordinal, failures


def verify_tableau(
    trials: int = 100, max_qubits: int = 10, seed: int = 0, max_gates: int = 200
) -> TableauReport:
    rng = np.random.default_rng(seed)
    report = TableauReport(trials)
    for trial in range(trials):
        n = int(rng.integers(1, max_qubits + 1))
        gates = int(rng.integers(1, max_gates + 1))
        density = float(rng.uniform(0.1, 0.3))
        circuit = random_clifford_circuit(n, gates, seed=int(rng.integers(2**31)), measure_density=density)
        checked, failures = check_tableau_circuit(circuit, seed=trial)
        report.measurements += checked
        report.failures.extend(f"trial {trial} (n={n}): {msg}" for msg in failures)
    logger.debug("tableau verification: %d trials, %d failures", trials, len(report.failures))
    return report


def _sample(dist: dict[str, float], shots: int, rng: np.random.Generator) -> dict[str, float]:
    keys = sorted(dist)
    probs = np.array([dist[k] for k in keys])
    counts = rng.multinomial(shots, probs / probs.sum())
    return {k: c / shots for k, c in zip(keys, counts, strict=True) if c}


def verify_transpile(
    c: Circuit,
    p: PbcProgram | None = None,
    shots: int = 0,
    seed: int = 0,
    max_qubits: int = MAX_QUBITS,
) -> TranspileReport:
    """Compare the circuit's Z statistics with the program's rotation-then-measure statistics.

    With `shots == 0` both distributions are exact; otherwise the program side is sampled
    and judged against a 3-sigma binomial bound.
    """
    p = p or transpile(c)
    expected = z_distribution(DenseState.from_circuit(c, max_qubits))
    state = DenseState.zero(p.n, max_qubits)
    for layer in p.layers:
        for row in layer:
            state.pauli_rotation(row, np.pi / 8)
    actual = measure_pauli_distribution(state, p.measurement_rows)
    if shots <= 0:
        tv = total_variation(expected, actual)
        return TranspileReport(tv, tv < ANALYTIC_TOLERANCE, True, 0)
    sampled = _sample(actual, shots, np.random.default_rng(seed))
    tv = total_variation(expected, sampled)
    bound = 0.5 * sum(3 * np.sqrt(q * (1 - q) / shots) for q in expected.values()) + 1 / shots
    return TranspileReport(tv, tv <= bound, False, shots)


def verify_transpile_random(
    trials: int = 100, max_qubits: int = 6, seed: int = 0, max_gates: int = 60
) -> list[tuple[Circuit, PbcProgram, TranspileReport]]:
    """Transpile and check random Clifford+T circuits with T density between 10% and 50%."""
    rng = np.random.default_rng(seed)
    results = []
    for _ in range(trials):
        n = int(rng.integers(1, max_qubits + 1))
        gates = int(rng.integers(1, max_gates + 1))
        density = float(rng.uniform(0.1, 0.5))
        circuit = random_clifford_t_circuit(n, gates, seed=int(rng.integers(2**31)), t_density=density)
        program = transpile(circuit)
        results.append((circuit, program, verify_transpile(circuit, program)))
    return results
