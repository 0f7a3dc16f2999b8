"""Dense statevector reference simulator for small circuits.

Amplitudes are held as a tensor of shape (2,) * n with axis q for qubit q, so qubit 0 is
the most significant bit of a basis index and the first character of a bitstring.
Rotations are exp(-i theta P); every cross-check compares phase-insensitive quantities.
"""

import logging

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .errors import DimensionError, InvalidGateError, InvalidSizeError, InvariantError
from .pauli import PauliString, commutes

logger = logging.getLogger(__name__)

MAX_QUBITS = 12
NORM_TOLERANCE = 1e-10
PROBABILITY_FLOOR = 1e-14

_SQRT2_INV = 1 / np.sqrt(2)
_T = np.exp(1j * np.pi / 4)
_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_ONE_QUBIT = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.X: _X,
    GateKind.Y: _Y,
    GateKind.Z: _Z,
    GateKind.T: np.array([[1, 0], [0, _T]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, np.conj(_T)]], dtype=complex),
}

_TWO_QUBIT = {
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}

_PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a signed Pauli string."""
    m = np.ones((1, 1), dtype=complex)
    for ch in p.label:
        m = np.kron(m, _PAULI[ch])
    return -m if p.r else m


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.kind in _ONE_QUBIT:
        return _ONE_QUBIT[gate.kind]
    if gate.kind in _TWO_QUBIT:
        return _TWO_QUBIT[gate.kind]
    raise InvalidGateError(f"no unitary for {gate.kind.value}")


class DenseState:
    def __init__(self, n: int, amplitudes: np.ndarray, max_qubits: int = MAX_QUBITS):
        if n < 1:
            raise InvalidSizeError(f"state needs at least one qubit, got {n}")
        if n > max_qubits:
            raise InvalidSizeError(f"oracle is capped at {max_qubits} qubits, got {n}")
        self.n = n
        self.psi = np.asarray(amplitudes, dtype=complex).reshape((2,) * n)

    @classmethod
    def zero(cls, n: int, max_qubits: int = MAX_QUBITS) -> "DenseState":
        psi = np.zeros(2**n if n <= max_qubits else 1, dtype=complex)
        psi[0] = 1.0
        return cls(n, psi, max_qubits)

    @classmethod
    def from_circuit(cls, c: Circuit, max_qubits: int = MAX_QUBITS) -> "DenseState":
        """Unitary part of `c` applied to |0...0>; measurements are skipped."""
        state = cls.zero(c.n, max_qubits)
        for gate in c.gates:
            if gate.kind is not GateKind.M:
                state.apply(gate)
        return state

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.psi.copy(), max(self.n, MAX_QUBITS))

    @property
    def vector(self) -> np.ndarray:
        return self.psi.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise InvalidGateError(f"qubit {q} out of range for {self.n} qubits")

    def _apply_1q(self, u: np.ndarray, q: int) -> None:
        self.psi = np.moveaxis(np.tensordot(u, self.psi, axes=([1], [q])), 0, q)

    def _apply_2q(self, u: np.ndarray, a: int, b: int) -> None:
        u = u.reshape(2, 2, 2, 2)
        out = np.tensordot(u, self.psi, axes=([2, 3], [a, b]))
        self.psi = np.moveaxis(out, [0, 1], [a, b])

    def apply(self, gate: Gate) -> None:
        for q in gate.qubits:
            self._check_qubit(q)
        u = gate_matrix(gate)
        if gate.kind.arity == 1:
            self._apply_1q(u, gate.qubits[0])
        else:
            self._apply_2q(u, *gate.qubits)

    def _check_pauli(self, p: PauliString) -> None:
        if p.n != self.n:
            raise DimensionError(f"Pauli acts on {p.n} qubits, state has {self.n}")

    def pauli_applied(self, p: PauliString) -> np.ndarray:
        """P|psi> as a new tensor; the state itself is unchanged."""
        self._check_pauli(p)
        psi = self.psi
        for q, ch in enumerate(p.label):
            if ch != "I":
                psi = np.moveaxis(np.tensordot(_PAULI[ch], psi, axes=([1], [q])), 0, q)
        return -psi if p.r else psi

    def pauli_rotation(self, p: PauliString, angle: float) -> None:
        """psi <- exp(-i angle P) psi = cos(angle) psi - i sin(angle) P psi."""
        self.psi = np.cos(angle) * self.psi - 1j * np.sin(angle) * self.pauli_applied(p)

    def expectation(self, p: PauliString) -> float:
        return float(np.vdot(self.psi, self.pauli_applied(p)).real)

    def probability_one(self, q: int) -> float:
        self._check_qubit(q)
        return float(np.sum(np.abs(np.take(self.psi, 1, axis=q)) ** 2))

    def collapse(self, q: int, outcome: int) -> float:
        """Project qubit `q` onto `outcome` and renormalise; returns the branch probability."""
        self._check_qubit(q)
        prob = self.probability_one(q) if outcome else 1.0 - self.probability_one(q)
        if prob < PROBABILITY_FLOOR:
            raise InvariantError(f"outcome {outcome} on qubit {q} has probability {prob:.3g}")
        index = [slice(None)] * self.n
        index[q] = 1 - outcome
        self.psi[tuple(index)] = 0.0
        self.psi /= np.sqrt(prob)
        return prob

    def z_distribution(self) -> dict[str, float]:
        probs = np.abs(self.vector) ** 2
        return {
            format(i, f"0{self.n}b"): float(pr)
            for i, pr in enumerate(probs)
            if pr > PROBABILITY_FLOOR
        }

    def measure_pauli_distribution(self, rows: list[PauliString]) -> dict[str, float]:
        """Joint distribution of commuting observables; bit 1 means eigenvalue -1."""
        for i, a in enumerate(rows):
            self._check_pauli(a)
            for b in rows[i + 1 :]:
                if not commutes(a, b):
                    raise InvariantError(f"observables {a} and {b} do not commute")
        branches = [("", self.psi)]
        for row in rows:
            nxt = []
            for prefix, psi in branches:
                p_psi = DenseState(self.n, psi, max(self.n, MAX_QUBITS)).pauli_applied(row)
                for bit, proj in (("0", (psi + p_psi) / 2), ("1", (psi - p_psi) / 2)):
                    if np.sum(np.abs(proj) ** 2) > PROBABILITY_FLOOR:
                        nxt.append((prefix + bit, proj))
            branches = nxt
        out: dict[str, float] = {}
        for key, psi in branches:
            out[key] = out.get(key, 0.0) + float(np.sum(np.abs(psi) ** 2))
        return out


def z_distribution(state: DenseState) -> dict[str, float]:
    return state.z_distribution()


def measure_pauli_distribution(state: DenseState, rows: list[PauliString]) -> dict[str, float]:
    return state.measure_pauli_distribution(rows)


def total_variation(a: dict[str, float], b: dict[str, float]) -> float:
    keys = set(a) | set(b)
    return 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)
