"""Circuit intermediate representation and the native `.stab` format.

Native format, one statement per line:

    qubits <n>          header, first statement
    h q | s q | sdg q | x q | y q | z q | t q | tdg q | m q
    cx c t | cz a b | swap a b
    chunk               chunk boundary before the next gate

`#` starts a comment; blank lines are ignored.
"""

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import InvalidGateError, InvalidSizeError, ParseError


class GateKind(str, Enum):
    H = "h"
    S = "s"
    SDG = "sdg"
    X = "x"
    Y = "y"
    Z = "z"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    M = "m"
    T = "t"
    TDG = "tdg"

    @property
    def arity(self) -> int:
        return 2 if self in _TWO_QUBIT else 1

    @property
    def is_clifford(self) -> bool:
        return self not in (GateKind.M, GateKind.T, GateKind.TDG)


_TWO_QUBIT = frozenset({GateKind.CX, GateKind.CZ, GateKind.SWAP})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise InvalidGateError(
                f"{self.kind.value} takes {self.kind.arity} qubit(s), got {len(self.qubits)}"
            )
        if any(q < 0 for q in self.qubits):
            raise InvalidGateError(f"negative qubit index in {self}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidGateError(f"{self.kind.value} on duplicate qubit {self.qubits[0]}")

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.qubits)])


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    chunk_marks: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "chunk_marks", tuple(self.chunk_marks))
        if self.n < 1:
            raise InvalidSizeError(f"circuit needs at least one qubit, got {self.n}")
        for i, gate in enumerate(self.gates):
            for q in gate.qubits:
                if q >= self.n:
                    raise InvalidGateError(f"gate {i} ({gate}) uses qubit {q} >= {self.n}")
        marks = self.chunk_marks
        if any(b <= a for a, b in zip(marks, marks[1:], strict=False)):
            raise ValueError(f"chunk marks must be strictly increasing: {marks}")
        if marks and (marks[0] <= 0 or marks[-1] >= len(self.gates)):
            raise ValueError(f"chunk marks must lie inside (0, {len(self.gates)}): {marks}")

    def chunks(self) -> Iterator[tuple[int, int, int]]:
        """Yield (chunk_index, start, stop) gate ranges."""
        bounds = [0, *self.chunk_marks, len(self.gates)]
        for k, (start, stop) in enumerate(zip(bounds, bounds[1:], strict=False)):
            yield k, start, stop

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    @property
    def t_count(self) -> int:
        return self.count(GateKind.T) + self.count(GateKind.TDG)

    @property
    def measurement_count(self) -> int:
        return self.count(GateKind.M)


@dataclass
class CircuitBuilder:
    """Accumulates gates and chunk boundaries; collapses redundant marks on build."""

    n: int
    gates: list[Gate] = field(default_factory=list)
    marks: list[int] = field(default_factory=list)

    def add(self, kind: GateKind | str, *qubits: int) -> "CircuitBuilder":
        self.gates.append(Gate(GateKind(kind), qubits))
        return self

    def chunk(self) -> "CircuitBuilder":
        self.marks.append(len(self.gates))
        return self

    def build(self) -> Circuit:
        total = len(self.gates)
        marks = sorted({m for m in self.marks if 0 < m < total})
        return Circuit(self.n, tuple(self.gates), tuple(marks))


def _int_token(token: str, what: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line=lineno) from None
    if value < 0:
        raise ParseError(f"{what} must be non-negative, got {value}", line=lineno)
    return value


def parse_native(text: str) -> Circuit:
    builder: CircuitBuilder | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        head = head.lower()
        if builder is None:
            if head != "qubits" or len(args) != 1:
                raise ParseError("expected header 'qubits <n>'", line=lineno)
            n = _int_token(args[0], "qubit count", lineno)
            if n < 1:
                raise ParseError("qubit count must be at least 1", line=lineno)
            builder = CircuitBuilder(n)
            continue
        if head == "qubits":
            raise ParseError("duplicate 'qubits' header", line=lineno)
        if head == "chunk":
            if args:
                raise ParseError("'chunk' takes no arguments", line=lineno)
            builder.chunk()
            continue
        try:
            kind = GateKind(head)
        except ValueError:
            raise ParseError(f"unknown mnemonic {head!r}", line=lineno) from None
        if len(args) != kind.arity:
            raise ParseError(
                f"{head} takes {kind.arity} qubit(s), got {len(args)}", line=lineno
            )
        qubits = [_int_token(a, "qubit index", lineno) for a in args]
        for q in qubits:
            if q >= builder.n:
                raise InvalidGateError(f"qubit {q} out of range for {builder.n} qubits", line=lineno)
        try:
            builder.add(kind, *qubits)
        except InvalidGateError as e:
            raise InvalidGateError(str(e), line=lineno) from None
    if builder is None:
        raise ParseError("missing 'qubits <n>' header", line=1)
    return builder.build()


def emit_native(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n}"]
    marks = set(circuit.chunk_marks)
    for i, gate in enumerate(circuit.gates):
        if i in marks:
            lines.append("chunk")
        lines.append(str(gate))
    return "\n".join(lines) + "\n"


class ViolationKind(str, Enum):
    COLLISION = "collision"
    MEASUREMENT = "measurement"


@dataclass(frozen=True)
class ChunkViolation:
    chunk: int
    gate_index: int
    kind: ViolationKind
    qubit: int

    def __str__(self) -> str:
        return f"chunk {self.chunk}: gate {self.gate_index} {self.kind.value} on qubit {self.qubit}"


def validate_chunks(circuit: Circuit) -> list[ChunkViolation]:
    """Every gate that stops a chunk from running its gates concurrently."""
    violations: list[ChunkViolation] = []
    for k, start, stop in circuit.chunks():
        touched: set[int] = set()
        for i in range(start, stop):
            gate = circuit.gates[i]
            if gate.kind is GateKind.M:
                violations.append(ChunkViolation(k, i, ViolationKind.MEASUREMENT, gate.qubits[0]))
            for q in gate.qubits:
                if q in touched:
                    violations.append(ChunkViolation(k, i, ViolationKind.COLLISION, q))
                    break
            touched.update(gate.qubits)
    return violations


def measurement_only(circuit: Circuit, start: int, stop: int) -> bool:
    return stop > start and all(g.kind is GateKind.M for g in circuit.gates[start:stop])


def read_input(path: str | Path) -> str:
    """Text of an input file; bytes that are not UTF-8 are a ParseError."""
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{path.name} is not UTF-8 text (byte {e.start})") from None


def load_circuit(path: str | Path, fmt: str | None = None) -> Circuit:
    """Read a circuit, picking the parser from `fmt` or the file extension."""
    from .qasm import parse_qasm2_subset

    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    text = read_input(path)
    if fmt in ("stab", "native"):
        return parse_native(text)
    if fmt in ("qasm", "qasm2"):
        return parse_qasm2_subset(text)
    raise ParseError(f"unknown circuit format {fmt!r} for {path.name}")
