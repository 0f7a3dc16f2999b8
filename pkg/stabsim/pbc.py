"""Clifford+T to Pauli-based computation.

A rotation row P with sign bit r stands for exp(-i pi/8 P) (T up to global phase; r = 1
is T-dagger). Cliffords are pushed to the end of the circuit: the walk runs from the last
gate to the first, conjugating the measurement tableau and every T row seen so far by the
inverse of each Clifford. The result is a sequence of rotation layers applied to |0...0>
in time order, followed by a measurement of each measurement-tableau stabilizer.

Quarter rotations exp(-i pi/4 P) extracted from duplicate pairs are pushed toward the
measurements; each one maps an anticommuting row R to i P R (rowsum with an extra i).

PBC v1 text:

    PBC v1
    qubits <n>
    t_initial <k>
    t_final <k'>
    measured <q> <q> ...
    layer <i>:
    <signed pauli>
    ...
    measure:
    <signed pauli>          one per qubit
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import bits
from .circuit import Circuit, Gate, GateKind
from .errors import InvariantError, ParseError, UnsupportedError, UnsupportedGateError
from .pauli import (
    PauliString,
    anticommutation_bits,
    commutes,
    multiply,
    parse_pauli,
    pauli_weight,
    stack,
)
from .tableau import Tableau, apply_gate_rows, inverse_gate, rowsum_into

logger = logging.getLogger(__name__)

SCANS = ("forward", "reverse")

Layer = list[PauliString]


class TTableau:
    """Signed Pauli rows, one per T/T-dagger, in reverse circuit order."""

    def __init__(self, n: int, capacity: int = 0):
        self.n = n
        self.size = 0
        self.x = bits.zeros(capacity, n)
        self.z = bits.zeros(capacity, n)
        self.r = np.zeros(capacity, dtype=np.uint8)

    def _grow(self) -> None:
        cap = max(4, 2 * len(self.r))
        x, z = bits.zeros(cap, self.n), bits.zeros(cap, self.n)
        r = np.zeros(cap, dtype=np.uint8)
        x[: self.size], z[: self.size], r[: self.size] = self.x[: self.size], self.z[: self.size], self.r[: self.size]
        self.x, self.z, self.r = x, z, r

    def append_z(self, q: int, r: int) -> None:
        if self.size == len(self.r):
            self._grow()
        w, mask = bits.locate(q)
        self.x[self.size] = 0
        self.z[self.size] = 0
        self.z[self.size, w] = mask
        self.r[self.size] = r
        self.size += 1

    def apply_gate(self, gate: Gate) -> None:
        if self.size:
            apply_gate_rows(self.x, self.z, self.r, gate, slice(0, self.size))

    def rows(self) -> list[PauliString]:
        return [PauliString(self.n, self.x[i], self.z[i], int(self.r[i])) for i in range(self.size)]

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class TranspileStats:
    initial_t: int
    final_rotations_rowcount: int
    final_rotations_pauliweight: int
    layers: int
    passes: int

    @property
    def t_ratio(self) -> float | None:
        """initial / final by row count; 1.0 when nothing changed, None when all T vanish."""
        if self.initial_t == self.final_rotations_rowcount:
            return 1.0
        if self.final_rotations_rowcount == 0:
            return None
        return self.initial_t / self.final_rotations_rowcount

    def to_dict(self) -> dict:
        return {
            "initial_t": self.initial_t,
            "final_rotations_rowcount": self.final_rotations_rowcount,
            "final_rotations_pauliweight": self.final_rotations_pauliweight,
            "layers": self.layers,
            "passes": self.passes,
            "t_ratio": self.t_ratio,
        }


@dataclass
class PbcProgram:
    n: int
    layers: list[Layer]
    measurement_rows: list[PauliString]
    stats: TranspileStats
    measured: tuple[int, ...] = field(default_factory=tuple)

    @property
    def rotations(self) -> list[PauliString]:
        return [p for layer in self.layers for p in layer]


def split_terminal_measurements(c: Circuit) -> tuple[list[Gate], tuple[int, ...]]:
    """Gates without their trailing Z measurements, plus the measured qubits."""
    measured: list[int] = []
    seen: set[int] = set()
    touched_later: set[int] = set()
    for i in range(len(c.gates) - 1, -1, -1):
        gate = c.gates[i]
        if gate.kind is GateKind.M:
            q = gate.qubits[0]
            if q in touched_later or q in seen:
                raise UnsupportedError(
                    f"mid-circuit measurement at gate {i} (m {q}) cannot be transpiled"
                )
            seen.add(q)
            measured.append(q)
        else:
            touched_later.update(gate.qubits)
    body = [g for g in c.gates if g.kind is not GateKind.M]
    return body, tuple(sorted(measured))


def build_tableaus(c: Circuit) -> tuple[Tableau, TTableau]:
    body, _ = split_terminal_measurements(c)
    m_tab = Tableau.new_identity(c.n)
    t_tab = TTableau(c.n, capacity=c.t_count)
    for gate in reversed(body):
        if gate.kind is GateKind.T:
            t_tab.append_z(gate.qubits[0], 0)
        elif gate.kind is GateKind.TDG:
            t_tab.append_z(gate.qubits[0], 1)
        elif gate.kind.is_clifford:
            inv = inverse_gate(gate)
            m_tab.apply_gate(inv)
            t_tab.apply_gate(inv)
        else:
            raise UnsupportedGateError(f"cannot transpile gate {gate}")
    return m_tab, t_tab


def _place(layers: list[Layer], row: PauliString, scan: str) -> None:
    last_conflict = -1
    for k, layer in enumerate(layers):
        if any(not commutes(row, member) for member in layer):
            last_conflict = k
    if last_conflict == len(layers) - 1:
        layers.append([row])
    elif scan == "forward":
        layers[last_conflict + 1].append(row)
    else:
        layers[-1].append(row)


def t_separate(t_tab: TTableau | list[PauliString], scan: str = "forward") -> list[Layer]:
    """Group rotations into commuting layers in time order.

    A rotation joins a layer only if it lies after every layer holding a rotation it
    anticommutes with; `forward` takes the earliest such layer, `reverse` the latest.
    """
    if scan not in SCANS:
        raise ValueError(f"scan must be one of {SCANS}, got {scan!r}")
    # T_tab rows are stored last gate first
    rows = t_tab.rows()[::-1] if isinstance(t_tab, TTableau) else list(t_tab)
    layers: list[Layer] = []
    for row in rows:
        _place(layers, row, scan)
    return layers


def quarter_push(p: PauliString, row: PauliString) -> PauliString:
    """Conjugate `row` by the quarter rotation about `p` (sign included)."""
    if commutes(p, row):
        return row
    product, e = multiply(p, row)
    e = (e + 1) % 4
    if e & 1:
        raise InvariantError(f"pushing {p} through {row} gave a non-Hermitian product")
    return product.with_sign(e // 2)


def _push_into_tableau(m_tab: Tableau, p: PauliString) -> None:
    rows = slice(0, 2 * m_tab.n)
    hits = np.flatnonzero(anticommutation_bits(p.x, p.z, m_tab.x[rows], m_tab.z[rows]))
    if hits.size:
        rowsum_into(m_tab.x, m_tab.z, m_tab.r, hits, p.x, p.z, p.r, extra=1)


def _first_duplicate(layer: Layer) -> tuple[int, int] | None:
    seen: dict[bytes, int] = {}
    for j, row in enumerate(layer):
        key = row.key()
        if key in seen:
            return seen[key], j
        seen[key] = j
    return None


def _extract_quarters(layer: Layer) -> tuple[Layer, list[PauliString]]:
    """Remove duplicate pairs; return the remaining rows and the net quarter rotations."""
    layer = list(layer)
    net: dict[bytes, list] = {}
    while (pair := _first_duplicate(layer)) is not None:
        i, j = pair
        a, b = layer[i], layer[j]
        if a.r == b.r:
            entry = net.setdefault(a.key(), [0, a.with_sign(0)])
            entry[0] += 1 if a.r == 0 else 3
        del layer[j]
        del layer[i]
    quarters = []
    for count, p in net.values():
        quarters.extend([p] * (count % 4))
    return layer, quarters


def optimize_layers(layers: list[Layer], m_tab: Tableau) -> tuple[list[Layer], Tableau, int]:
    """Run duplicate extraction and push-through to a fixed point; returns the pass count."""
    layers = [list(layer) for layer in layers]
    m_tab = m_tab.copy()
    passes = 0
    count = sum(len(layer) for layer in layers)
    while count:
        passes += 1
        for li in range(len(layers)):
            layers[li], quarters = _extract_quarters(layers[li])
            for p in quarters:
                for lj in range(li + 1, len(layers)):
                    layers[lj] = [quarter_push(p, row) for row in layers[lj]]
                _push_into_tableau(m_tab, p)
        layers = [layer for layer in layers if layer]
        new_count = sum(len(layer) for layer in layers)
        logger.debug("optimize pass %d: %d -> %d rotations", passes, count, new_count)
        if new_count == count:
            break
        count = new_count
    return layers, m_tab, passes


def t_optimize(layers: list[Layer], m_tab: Tableau) -> tuple[list[Layer], Tableau]:
    layers, m_tab, _ = optimize_layers(layers, m_tab)
    return layers, m_tab


def layer_commutes(layer: Layer) -> bool:
    if len(layer) < 2:
        return True
    xs, zs = stack(layer)
    return not anticommutation_bits(xs[:, None, :], zs[:, None, :], xs[None], zs[None]).any()


def reseparate(layers: list[Layer], scan: str = "forward") -> list[Layer]:
    out: list[Layer] = []
    for layer in layers:
        if layer_commutes(layer):
            out.append(layer)
        else:
            logger.warning("layer of %d rotations lost commutativity; splitting", len(layer))
            out.extend(t_separate(layer, scan))
    return out


def transpile(c: Circuit, scan: str = "forward") -> PbcProgram:
    _, measured = split_terminal_measurements(c)
    m_tab, t_tab = build_tableaus(c)
    initial = len(t_tab)
    layers = t_separate(t_tab, scan)
    layers, m_tab, passes = optimize_layers(layers, m_tab)
    layers = reseparate(layers, scan)
    stats = TranspileStats(
        initial_t=initial,
        final_rotations_rowcount=sum(len(layer) for layer in layers),
        final_rotations_pauliweight=sum(pauli_weight(p) for layer in layers for p in layer),
        layers=len(layers),
        passes=passes,
    )
    logger.debug("transpile: %s", stats)
    if logger.isEnabledFor(logging.DEBUG):
        for i, layer in enumerate(layers):
            logger.debug("  layer %d: %s", i, " ".join(str(p) for p in layer))
    return PbcProgram(c.n, layers, m_tab.stabilizers(), stats, measured)


def emit_pbc(p: PbcProgram) -> str:
    lines = [
        "PBC v1",
        f"qubits {p.n}",
        f"t_initial {p.stats.initial_t}",
        f"t_final {p.stats.final_rotations_rowcount}",
        " ".join(["measured", *map(str, p.measured)]),
    ]
    for i, layer in enumerate(p.layers):
        lines.append(f"layer {i}:")
        lines.extend(str(row) for row in layer)
    lines.append("measure:")
    lines.extend(str(row) for row in p.measurement_rows)
    return "\n".join(lines) + "\n"


def _header(lines: list[tuple[int, str]], idx: int, key: str) -> list[str]:
    if idx >= len(lines):
        raise ParseError(f"missing '{key}' line")
    lineno, text = lines[idx]
    parts = text.split()
    if not parts or parts[0] != key:
        raise ParseError(f"expected '{key}', got {text!r}", line=lineno)
    return parts[1:]


def _int(value: list[str], key: str, lineno: int) -> int:
    try:
        (v,) = value
        return int(v)
    except ValueError:
        raise ParseError(f"'{key}' needs one integer", line=lineno) from None


def parse_pbc(text: str) -> PbcProgram:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines or lines[0][1] != "PBC v1":
        raise ParseError("expected 'PBC v1' header", line=lines[0][0] if lines else 1)
    n = _int(_header(lines, 1, "qubits"), "qubits", lines[1][0])
    initial = _int(_header(lines, 2, "t_initial"), "t_initial", lines[2][0])
    final = _int(_header(lines, 3, "t_final"), "t_final", lines[3][0])
    try:
        measured = tuple(int(q) for q in _header(lines, 4, "measured"))
    except ValueError:
        raise ParseError("'measured' takes qubit indices", line=lines[4][0]) from None

    layers: list[Layer] = []
    rows: list[PauliString] | None = None
    measure: list[PauliString] | None = None
    for lineno, text in lines[5:]:
        if text.startswith("layer ") and text.endswith(":"):
            if measure is not None:
                raise ParseError("layer after 'measure:'", line=lineno)
            rows = []
            layers.append(rows)
            continue
        if text == "measure:":
            measure = []
            rows = measure
            continue
        if rows is None:
            raise ParseError(f"row outside a block: {text!r}", line=lineno)
        try:
            row = parse_pauli(text)
        except ParseError as e:
            raise ParseError(str(e), line=lineno, position=e.position) from None
        if row.n != n:
            raise ParseError(f"row has {row.n} qubits, expected {n}", line=lineno)
        rows.append(row)
    if measure is None or len(measure) != n:
        raise ParseError(f"'measure:' block must list {n} rows")
    if sum(len(layer) for layer in layers) != final:
        raise ParseError(f"t_final {final} does not match the listed rotations")
    stats = TranspileStats(
        initial_t=initial,
        final_rotations_rowcount=final,
        final_rotations_pauliweight=sum(pauli_weight(p) for layer in layers for p in layer),
        layers=len(layers),
        passes=0,  # not recorded in the text
    )
    return PbcProgram(n, layers, measure, stats, measured)
