"""CHP stabilizer/destabilizer tableau.

Rows 0..n-1 hold stabilizers, rows n..2n-1 their destabilizer partners and row 2n is a
scratch row used by deterministic measurement. `x` and `z` are (2n+1, W) packed uint64
matrices; `r` holds one sign bit per row.

Gate kernels are split in two phases so row blocks can be processed independently:
`gate_flips` reads the gate's columns for a row range and returns the bits that change,
`commit_flips` XORs them back in. Within a gate every sign update reads pre-update bits.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from . import bits
from .circuit import Gate, GateKind
from .errors import InvalidGateError, InvalidSizeError, InvariantError, UnsupportedGateError
from .pauli import PauliString, anticommutation_bits, phase_sum

logger = logging.getLogger(__name__)

Coin = int | Callable[[], int] | np.random.Generator

# Derived gates as primitive steps on local qubit positions (0 = first operand).
_STEPS: dict[GateKind, tuple[tuple, ...]] = {
    GateKind.H: (("h", 0),),
    GateKind.S: (("s", 0),),
    GateKind.SDG: (("s", 0), ("s", 0), ("s", 0)),
    GateKind.Z: (("s", 0), ("s", 0)),
    GateKind.X: (("h", 0), ("s", 0), ("s", 0), ("h", 0)),
    GateKind.Y: (("s", 0), ("s", 0), ("h", 0), ("s", 0), ("s", 0), ("h", 0)),
    GateKind.CX: (("cx", 0, 1),),
    GateKind.CZ: (("h", 1), ("cx", 0, 1), ("h", 1)),
    GateKind.SWAP: (("cx", 0, 1), ("cx", 1, 0), ("cx", 0, 1)),
}

_INVERSE = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


@dataclass(frozen=True)
class MeasResult:
    outcome: int
    deterministic: bool


@dataclass(frozen=True)
class GateFlips:
    """Bits a gate flips over one row range, relative to that range."""

    qubits: tuple[int, ...]
    x: tuple[np.ndarray, ...]
    z: tuple[np.ndarray, ...]
    r: np.ndarray


def inverse_gate(gate: Gate) -> Gate:
    return Gate(_INVERSE.get(gate.kind, gate.kind), gate.qubits)


def _run_steps(steps, xs: list[np.ndarray], zs: list[np.ndarray], r: np.ndarray) -> np.ndarray:
    for step in steps:
        if step[0] == "h":
            a = step[1]
            r = r ^ (xs[a] & zs[a])
            xs[a], zs[a] = zs[a], xs[a]
        elif step[0] == "s":
            a = step[1]
            r = r ^ (xs[a] & zs[a])
            zs[a] = zs[a] ^ xs[a]
        else:
            c, t = step[1], step[2]
            r = r ^ (xs[c] & zs[t] & ~(xs[t] ^ zs[c]))
            xs[t] = xs[t] ^ xs[c]
            zs[c] = zs[c] ^ zs[t]
    return r


def clifford_steps(gate: Gate) -> tuple[tuple, ...]:
    steps = _STEPS.get(gate.kind)
    if steps is None:
        raise UnsupportedGateError(f"{gate.kind.value} is not a Clifford gate the tableau can apply")
    return steps


def gate_flips(x: np.ndarray, z: np.ndarray, gate: Gate, rows: slice) -> GateFlips:
    """Compute the changes `gate` makes to rows `rows` without writing anything."""
    steps = clifford_steps(gate)
    old_x = [bits.column(x[rows], q) for q in gate.qubits]
    old_z = [bits.column(z[rows], q) for q in gate.qubits]
    xs, zs = list(old_x), list(old_z)
    r = _run_steps(steps, xs, zs, np.zeros_like(old_x[0]))
    return GateFlips(
        gate.qubits,
        tuple(new ^ old for new, old in zip(xs, old_x, strict=True)),
        tuple(new ^ old for new, old in zip(zs, old_z, strict=True)),
        r,
    )


def commit_flips(x: np.ndarray, z: np.ndarray, r: np.ndarray, flips: GateFlips, rows: slice) -> None:
    xv, zv = x[rows], z[rows]
    for q, fx, fz in zip(flips.qubits, flips.x, flips.z, strict=True):
        bits.flip_column(xv, q, fx)
        bits.flip_column(zv, q, fz)
    r[rows] ^= flips.r.astype(np.uint8)


def apply_gate_rows(x: np.ndarray, z: np.ndarray, r: np.ndarray, gate: Gate, rows: slice) -> None:
    commit_flips(x, z, r, gate_flips(x, z, gate, rows), rows)


def rowsum_into(
    x: np.ndarray,
    z: np.ndarray,
    r: np.ndarray,
    targets,
    sx: np.ndarray,
    sz: np.ndarray,
    sr: int,
    extra: int = 0,
) -> None:
    """Replace each target row h by (source * h), i.e. rowsum(h, source).

    `extra` adds to the mod-4 phase sum before the sign is read back; 1 multiplies the
    product by i. An odd adjusted sum means an imaginary product and is an error.
    """
    tx, tz = x[targets], z[targets]
    total = 2 * r[targets].astype(np.int64) + 2 * int(sr) + phase_sum(sx, sz, tx, tz) + extra
    total %= 4
    if np.any(total & 1):
        raise InvariantError("rowsum produced an imaginary phase")
    r[targets] = (total // 2).astype(np.uint8)
    x[targets] = tx ^ sx
    z[targets] = tz ^ sz


def scratch_phase_steps(x: np.ndarray, z: np.ndarray, sources: np.ndarray, words: slice) -> tuple:
    """Accumulate the product of rows `sources` over one word range.

    Returns (g, px, pz): the per-step phase contributions of this word range and the
    final product bits for the range. Per-step g values from disjoint word ranges add.
    """
    sxs, szs = x[sources, words], z[sources, words]
    px = np.bitwise_xor.accumulate(sxs, axis=0)
    pz = np.bitwise_xor.accumulate(szs, axis=0)
    before_x = np.zeros_like(px)
    before_z = np.zeros_like(pz)
    before_x[1:], before_z[1:] = px[:-1], pz[:-1]
    g = phase_sum(sxs, szs, before_x, before_z)
    return g, px[-1], pz[-1]


def resolve_scratch_sign(source_signs: np.ndarray, g: np.ndarray) -> int:
    """Sign of the accumulated product given every step's total phase contribution."""
    if np.any(g & 1):
        raise InvariantError("deterministic measurement accumulated an imaginary phase")
    total = 2 * int(source_signs.astype(np.int64).sum()) + int(g.sum())
    return (total % 4) // 2


def pivot_in(x: np.ndarray, q: int, rows: slice) -> int | None:
    """Smallest row index in `rows` whose x bit at `q` is set."""
    hits = np.flatnonzero(bits.column(x[rows], q))
    if hits.size == 0:
        return None
    return int(hits[0]) + (rows.start or 0)


def random_targets(x: np.ndarray, q: int, p: int, n: int, rows: slice) -> np.ndarray:
    """Rows of `rows` to multiply by the pivot p (excludes p and its partner p + n)."""
    start = rows.start or 0
    hits = np.flatnonzero(bits.column(x[rows], q)) + start
    return hits[(hits != p) & (hits != p + n)]


def draw(coin: Coin) -> int:
    if isinstance(coin, np.random.Generator):
        return int(coin.integers(2))
    if callable(coin):
        return int(coin()) & 1
    return int(coin) & 1


class Tableau:
    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        self.n = n
        self.x = x
        self.z = z
        self.r = r

    @classmethod
    def new_identity(cls, n: int) -> "Tableau":
        if n < 1:
            raise InvalidSizeError(f"tableau needs at least one qubit, got {n}")
        x = bits.zeros(2 * n + 1, n)
        z = bits.zeros(2 * n + 1, n)
        for q in range(n):
            w, mask = bits.locate(q)
            z[q, w] |= mask
            x[n + q, w] |= mask
        return cls(n, x, z, np.zeros(2 * n + 1, dtype=np.uint8))

    @property
    def scratch(self) -> int:
        return 2 * self.n

    @property
    def all_rows(self) -> slice:
        return slice(0, 2 * self.n)

    @property
    def logical_bits(self) -> int:
        """Logical bits held: 2n+1 rows of 2n Pauli bits plus one sign bit each."""
        rows = 2 * self.n + 1
        return rows * 2 * self.n + rows

    @property
    def allocated_bits(self) -> int:
        return (self.x.nbytes + self.z.nbytes) * 8 + self.r.size

    def copy(self) -> "Tableau":
        return Tableau(self.n, self.x.copy(), self.z.copy(), self.r.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tableau):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.r, other.r)
        )

    __hash__ = None

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise InvalidGateError(f"qubit {q} out of range for {self.n} qubits")

    def row(self, i: int) -> PauliString:
        return PauliString(self.n, self.x[i], self.z[i], int(self.r[i]))

    def set_row(self, i: int, pauli: PauliString) -> None:
        if pauli.n != self.n:
            raise InvalidSizeError(f"row has {pauli.n} qubits, tableau has {self.n}")
        self.x[i], self.z[i], self.r[i] = pauli.x, pauli.z, pauli.r

    def stabilizers(self) -> list[PauliString]:
        return [self.row(i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliString]:
        return [self.row(self.n + i) for i in range(self.n)]

    def apply_gate(self, gate: Gate, rows: slice | None = None) -> None:
        for q in gate.qubits:
            self._check_qubit(q)
        apply_gate_rows(self.x, self.z, self.r, gate, rows or self.all_rows)

    def apply_h(self, q: int) -> None:
        self.apply_gate(Gate(GateKind.H, (q,)))

    def apply_s(self, q: int) -> None:
        self.apply_gate(Gate(GateKind.S, (q,)))

    def apply_sdg(self, q: int) -> None:
        self.apply_gate(Gate(GateKind.SDG, (q,)))

    def apply_x(self, q: int) -> None:
        self.apply_gate(Gate(GateKind.X, (q,)))

    def apply_y(self, q: int) -> None:
        self.apply_gate(Gate(GateKind.Y, (q,)))

    def apply_z(self, q: int) -> None:
        self.apply_gate(Gate(GateKind.Z, (q,)))

    def apply_cx(self, c: int, t: int) -> None:
        self.apply_gate(Gate(GateKind.CX, (c, t)))

    def apply_cz(self, a: int, b: int) -> None:
        self.apply_gate(Gate(GateKind.CZ, (a, b)))

    def apply_swap(self, a: int, b: int) -> None:
        self.apply_gate(Gate(GateKind.SWAP, (a, b)))

    def rowsum(self, h: int, i: int) -> None:
        last = 2 * self.n
        if h == i or not (0 <= h <= last and 0 <= i <= last):
            raise InvariantError(f"rowsum({h}, {i}) outside rows 0..{last} or on itself")
        rowsum_into(self.x, self.z, self.r, [h], self.x[i], self.z[i], int(self.r[i]))

    def pivot(self, q: int) -> int | None:
        return pivot_in(self.x, q, slice(0, self.n))

    def peek_z(self, q: int) -> int | None:
        """Deterministic Z outcome of qubit `q`, or None when it would be random."""
        self._check_qubit(q)
        if self.pivot(q) is not None:
            return None
        return self._deterministic_outcome(q)

    def _deterministic_outcome(self, q: int) -> int:
        destab = np.flatnonzero(bits.column(self.x[self.n : 2 * self.n], q))
        if destab.size == 0:
            return 0
        g, px, pz = scratch_phase_steps(self.x, self.z, destab, slice(None))
        s = self.scratch
        self.x[s], self.z[s] = px, pz
        outcome = resolve_scratch_sign(self.r[destab], g)
        self.x[s] = 0
        self.z[s] = 0
        self.r[s] = 0
        return outcome

    def measure_z(self, q: int, coin: Coin = 0) -> MeasResult:
        """Measure qubit `q` in Z; `coin` supplies the outcome of a random measurement."""
        self._check_qubit(q)
        p = self.pivot(q)
        if p is None:
            outcome = self._deterministic_outcome(q)
            logger.debug("measure q%d deterministic -> %d", q, outcome)
            return MeasResult(outcome, True)
        targets = random_targets(self.x, q, p, self.n, self.all_rows)
        if targets.size:
            rowsum_into(self.x, self.z, self.r, targets, self.x[p], self.z[p], int(self.r[p]))
        outcome = draw(coin)
        self.collapse_pivot(p, q, outcome)
        logger.debug("measure q%d random pivot=%d -> %d", q, p, outcome)
        return MeasResult(outcome, False)

    def collapse_pivot(self, p: int, q: int, outcome: int) -> None:
        """Move stabilizer p to its destabilizer slot and replace it with +/-Z_q."""
        self.x[p + self.n], self.z[p + self.n], self.r[p + self.n] = self.x[p], self.z[p], self.r[p]
        self.x[p] = 0
        self.z[p] = 0
        w, mask = bits.locate(q)
        self.z[p, w] = mask
        self.r[p] = outcome

    def audit(self) -> None:
        """Raise InvariantError unless every structural invariant holds."""
        n = self.n
        if not (bits.padding_clear(self.x, n) and bits.padding_clear(self.z, n)):
            raise InvariantError("padding bits set")
        s = self.scratch
        if self.x[s].any() or self.z[s].any() or self.r[s]:
            raise InvariantError("scratch row is not zero")
        sx, sz = self.x[:n], self.z[:n]
        dx, dz = self.x[n : 2 * n], self.z[n : 2 * n]
        stab = anticommutation_bits(sx[:, None, :], sz[:, None, :], sx[None], sz[None])
        if stab.any():
            i, j = np.argwhere(stab)[0]
            raise InvariantError(f"stabilizers {i} and {j} anticommute")
        pairs = anticommutation_bits(dx[:, None, :], dz[:, None, :], sx[None], sz[None])
        if not np.array_equal(pairs, np.eye(n, dtype=np.uint8)):
            i, j = np.argwhere(pairs != np.eye(n, dtype=np.uint8))[0]
            raise InvariantError(f"destabilizer {i} / stabilizer {j} commutation is wrong")
        both = np.concatenate(
            [bits.unpack(self.x[: 2 * n], n), bits.unpack(self.z[: 2 * n], n)], axis=1
        )
        rank = bits.gf2_rank(bits.pack(both), 2 * n)
        if rank != 2 * n:
            raise InvariantError(f"rows have GF(2) rank {rank}, expected {2 * n}")
        if self.logical_bits > 2 * (4 * n * n + n):
            raise InvariantError(f"{self.logical_bits} logical bits held for {n} qubits")

    def dump(self) -> str:
        lines = [f"S{i}: {p}" for i, p in enumerate(self.stabilizers())]
        lines += [f"D{i}: {p}" for i, p in enumerate(self.destabilizers())]
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"Tableau(n={self.n})"
