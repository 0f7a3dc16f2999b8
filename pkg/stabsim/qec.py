"""Benchmark and test circuit generators.

Rotated surface code: data qubits sit at odd coordinates (x, y) in [1, 2d-1], ancillas at
even coordinates in [0, 2d]; y grows downward. An ancilla is X-type when (x + y) / 2 is
even. Bulk ancillas have four neighbours; boundary ancillas keep two, X-type on the top and
bottom edges and Z-type on the left and right edges.

Ancillas are never reset. A round's raw outcome is the check value XOR the same
ancilla's previous raw outcome; `syndrome_values` undoes that.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .circuit import Circuit, CircuitBuilder, GateKind
from .errors import DimensionError, InvalidSizeError

logger = logging.getLogger(__name__)

Coord = tuple[int, int]

_X_ORDER = ((-1, -1), (1, -1), (-1, 1), (1, 1))  # NW NE SW SE
_Z_ORDER = ((-1, -1), (-1, 1), (1, -1), (1, 1))  # NW SW NE SE


@dataclass(frozen=True)
class SurfaceLayout:
    d: int
    data: tuple[Coord, ...]
    x_ancillas: tuple[Coord, ...]
    z_ancillas: tuple[Coord, ...]
    neighbors: dict[Coord, tuple[Coord | None, ...]]

    @cached_property
    def ancillas(self) -> tuple[Coord, ...]:
        return tuple(sorted(self.x_ancillas + self.z_ancillas, key=lambda c: (c[1], c[0])))

    @property
    def n(self) -> int:
        return len(self.data) + len(self.x_ancillas) + len(self.z_ancillas)

    def index(self, coord: Coord) -> int:
        return self._indices[coord]

    @cached_property
    def _indices(self) -> dict[Coord, int]:
        order = self.data + self.ancillas
        return {c: i for i, c in enumerate(order)}

    def is_x(self, coord: Coord) -> bool:
        return coord in self.x_ancillas

    def support(self, ancilla: Coord) -> list[int]:
        return [self.index(c) for c in self.neighbors[ancilla] if c is not None]


def surface_layout(d: int) -> SurfaceLayout:
    if d < 3 or d % 2 == 0:
        raise InvalidSizeError(f"surface code distance must be odd and >= 3, got {d}")
    top = 2 * d
    data = tuple((x, y) for y in range(1, top, 2) for x in range(1, top, 2))
    data_set = set(data)
    x_anc, z_anc = [], []
    neighbors: dict[Coord, tuple[Coord | None, ...]] = {}
    for y in range(0, top + 1, 2):
        for x in range(0, top + 1, 2):
            is_x = ((x + y) // 2) % 2 == 0
            order = _X_ORDER if is_x else _Z_ORDER
            nbrs = tuple(
                (x + dx, y + dy) if (x + dx, y + dy) in data_set else None for dx, dy in order
            )
            count = sum(c is not None for c in nbrs)
            if count == 4:
                keep = True
            elif count == 2:
                keep = (y in (0, top)) if is_x else (x in (0, top))
            else:
                keep = False
            if keep:
                (x_anc if is_x else z_anc).append((x, y))
                neighbors[(x, y)] = nbrs
    return SurfaceLayout(d, data, tuple(x_anc), tuple(z_anc), neighbors)


def surface_code_circuit(d: int, rounds: int = 1) -> Circuit:
    if rounds < 1:
        raise InvalidSizeError(f"rounds must be >= 1, got {rounds}")
    layout = surface_layout(d)
    ancillas = layout.ancillas
    x_idx = [layout.index(a) for a in ancillas if layout.is_x(a)]
    b = CircuitBuilder(layout.n)
    for _ in range(rounds):
        b.chunk()
        for a in x_idx:
            b.add(GateKind.H, a)
        for step in range(4):
            b.chunk()
            for a in ancillas:
                nbr = layout.neighbors[a][step]
                if nbr is None:
                    continue
                if layout.is_x(a):
                    b.add(GateKind.CX, layout.index(a), layout.index(nbr))
                else:
                    b.add(GateKind.CX, layout.index(nbr), layout.index(a))
        b.chunk()
        for a in x_idx:
            b.add(GateKind.H, a)
        b.chunk()
        for a in ancillas:
            b.add(GateKind.M, layout.index(a))
    circuit = b.build()
    logger.debug("surface code d=%d rounds=%d: %d qubits %d gates", d, rounds, circuit.n, len(circuit.gates))
    return circuit


def syndrome_values(layout: SurfaceLayout, outcomes, rounds: int) -> np.ndarray:
    """Decode raw ancilla outcomes into per-round check values, shape (rounds, ancillas).

    `outcomes` is a measurement record or a flat bit sequence in circuit order.
    """
    raw = np.array([getattr(o, "outcome", o) for o in outcomes], dtype=np.uint8)
    width = len(layout.ancillas)
    if raw.size != rounds * width:
        raise DimensionError(f"expected {rounds * width} outcomes, got {raw.size}")
    raw = raw.reshape(rounds, width)
    values = raw.copy()
    values[1:] ^= raw[:-1]
    return values


def random_layered_circuit(n: int, seed: int = 0) -> Circuit:
    """Half the qubits get H or S and control their partner in the other half; a fifth of
    the second half (rounded up) is measured; repeated floor(log2 n) times."""
    if n < 4 or n % 2:
        raise InvalidSizeError(f"random layered circuit needs even n >= 4, got {n}")
    rng = np.random.default_rng(seed)
    half = n // 2
    measured = max(1, -(-half // 5))
    b = CircuitBuilder(n)
    for _ in range(n.bit_length() - 1):
        b.chunk()
        for i, pick in enumerate(rng.integers(2, size=half)):
            b.add(GateKind.S if pick else GateKind.H, i)
        b.chunk()
        for i in range(half):
            b.add(GateKind.CX, i, i + half)
        b.chunk()
        for q in sorted(rng.choice(np.arange(half, n), size=measured, replace=False)):
            b.add(GateKind.M, int(q))
    return b.build()


_ONE_QUBIT_CLIFFORDS = (GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Y, GateKind.Z)
_TWO_QUBIT_CLIFFORDS = (GateKind.CX, GateKind.CZ, GateKind.SWAP)


def _random_gate(rng: np.random.Generator, b: CircuitBuilder, n: int, kinds) -> None:
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind.arity == 2:
        a, c = rng.choice(n, size=2, replace=False)
        b.add(kind, int(a), int(c))
    else:
        b.add(kind, int(rng.integers(n)))


def random_clifford_circuit(
    n: int, gates: int, seed: int = 0, measure_density: float = 0.2
) -> Circuit:
    """Random Clifford gates with mid-circuit Z measurements mixed in."""
    if n < 1:
        raise InvalidSizeError(f"circuit needs at least one qubit, got {n}")
    rng = np.random.default_rng(seed)
    kinds = _ONE_QUBIT_CLIFFORDS + (_TWO_QUBIT_CLIFFORDS if n > 1 else ())
    b = CircuitBuilder(n)
    for _ in range(gates):
        if rng.random() < measure_density:
            b.add(GateKind.M, int(rng.integers(n)))
        else:
            _random_gate(rng, b, n, kinds)
    return b.build()


def random_clifford_t_circuit(
    n: int, gates: int, seed: int = 0, t_density: float = 0.3, measure: bool = True
) -> Circuit:
    """Random Clifford+T gates, optionally followed by a Z measurement of every qubit."""
    if n < 1:
        raise InvalidSizeError(f"circuit needs at least one qubit, got {n}")
    rng = np.random.default_rng(seed)
    kinds = _ONE_QUBIT_CLIFFORDS + (_TWO_QUBIT_CLIFFORDS if n > 1 else ())
    b = CircuitBuilder(n)
    for _ in range(gates):
        if rng.random() < t_density:
            b.add(GateKind.TDG if rng.random() < 0.5 else GateKind.T, int(rng.integers(n)))
        else:
            _random_gate(rng, b, n, kinds)
    if measure:
        for q in range(n):
            b.add(GateKind.M, q)
    return b.build()


def ghz_circuit(n: int) -> Circuit:
    b = CircuitBuilder(n).add(GateKind.H, 0)
    for q in range(1, n):
        b.add(GateKind.CX, q - 1, q)
    for q in range(n):
        b.add(GateKind.M, q)
    return b.build()


def bell_circuit() -> Circuit:
    return ghz_circuit(2)
