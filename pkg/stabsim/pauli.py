"""Binary symplectic Pauli strings and commutation arithmetic.

Qubit j of an n-qubit Pauli string is encoded by the bit pair (x_j, z_j):
I -> (0, 0), X -> (1, 0), Z -> (0, 1), Y -> (1, 1). The sign bit r selects +1 (0) or
-1 (1). Text form puts qubit 0 first, e.g. "+XZ" is X on qubit 0 and Z on qubit 1.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import bits
from .errors import DimensionError, ParseError

_SYMBOLS = "IXZY"  # index = x + 2z
_ENCODE = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_SIGNS = {"+": 0, "-": 1, "−": 1}


@dataclass(frozen=True, eq=False)
class PauliString:
    n: int
    x: np.ndarray
    z: np.ndarray
    r: int = 0

    def __post_init__(self) -> None:
        width = bits.words_for(self.n)
        x = np.array(self.x, dtype=np.uint64).reshape(width)
        z = np.array(self.z, dtype=np.uint64).reshape(width)
        if not (bits.padding_clear(x, self.n) and bits.padding_clear(z, self.n)):
            raise DimensionError(f"padding bits set beyond qubit {self.n - 1}")
        if self.r not in (0, 1):
            raise ValueError(f"sign bit must be 0 or 1, got {self.r}")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_bools(cls, x, z, r: int = 0) -> "PauliString":
        x = np.asarray(x, dtype=bool)
        z = np.asarray(z, dtype=bool)
        if x.shape != z.shape:
            raise DimensionError(f"x has {x.size} bits but z has {z.size}")
        return cls(x.size, bits.pack(x), bits.pack(z), int(r))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, bits.zeros((), n), bits.zeros((), n))

    @classmethod
    def single(cls, n: int, q: int, axis: str, r: int = 0) -> "PauliString":
        xs = np.zeros(n, dtype=bool)
        zs = np.zeros(n, dtype=bool)
        xs[q], zs[q] = _ENCODE[axis]
        return cls.from_bools(xs, zs, r)

    def with_sign(self, r: int) -> "PauliString":
        return PauliString(self.n, self.x, self.z, r)

    def xbits(self) -> np.ndarray:
        return bits.unpack(self.x, self.n)

    def zbits(self) -> np.ndarray:
        return bits.unpack(self.z, self.n)

    @property
    def label(self) -> str:
        """Unsigned text form."""
        codes = self.xbits().astype(np.int8) + 2 * self.zbits().astype(np.int8)
        return "".join(_SYMBOLS[c] for c in codes)

    @property
    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def key(self) -> bytes:
        """Sign-free identity of the (x, z) bits."""
        return self.x.tobytes() + self.z.tobytes()

    def __len__(self) -> int:
        return self.n

    def __str__(self) -> str:
        return ("-" if self.r else "+") + self.label

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.r == other.r
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.key()))


def parse_pauli(text: str) -> PauliString:
    """Parse `[+|-]?[IXYZ]+`. Error positions are 1-based within `text`."""
    body = text.strip()
    r = 0
    offset = len(text) - len(text.lstrip())
    if body and body[0] in _SIGNS:
        r = _SIGNS[body[0]]
        body = body[1:]
        offset += 1
    if not body:
        raise ParseError(f"empty Pauli string {text!r}", position=offset + 1)
    xs = np.zeros(len(body), dtype=bool)
    zs = np.zeros(len(body), dtype=bool)
    for j, ch in enumerate(body):
        if ch not in _ENCODE:
            pos = offset + j + 1
            raise ParseError(f"invalid Pauli symbol {ch!r} at position {pos}", position=pos)
        xs[j], zs[j] = _ENCODE[ch]
    return PauliString.from_bools(xs, zs, r)


def _check_same(n1: int, n2: int) -> None:
    if n1 != n2:
        raise DimensionError(f"Pauli strings act on {n1} and {n2} qubits")


def qubitwise_commutes(p1: PauliString, p2: PauliString) -> bool:
    _check_same(p1.n, p2.n)
    return not np.any((p1.x & p2.z) ^ (p2.x & p1.z))


def commutes(p1: PauliString, p2: PauliString) -> bool:
    _check_same(p1.n, p2.n)
    return int(bits.parity((p1.x & p2.z) ^ (p2.x & p1.z))) == 0


def stack(rows: Sequence[PauliString], n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Stack rows into (m, W) x and z word matrices."""
    if n is None:
        n = rows[0].n if rows else 0
    for row in rows:
        _check_same(n, row.n)
    if not rows:
        return bits.zeros(0, n), bits.zeros(0, n)
    return np.stack([row.x for row in rows]), np.stack([row.z for row in rows])


def anticommutation_bits(x: np.ndarray, z: np.ndarray, xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Bit i is 1 iff (x, z) anticommutes with row i of (xs, zs); packed matrix pass."""
    return bits.parity((x & zs) ^ (xs & z)).astype(np.uint8)


def qubitwise_conflicts(x: np.ndarray, z: np.ndarray, xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Bit i is 1 iff (x, z) fails to commute with row i at some single qubit."""
    return np.any((x & zs) ^ (xs & z), axis=-1).astype(np.uint8)


def commutation_vector(p: PauliString, rows: Sequence[PauliString]) -> np.ndarray:
    xs, zs = stack(rows, p.n)
    return anticommutation_bits(p.x, p.z, xs, zs)


def commutation_matrix(rows_a: Sequence[PauliString], rows_b: Sequence[PauliString]) -> np.ndarray:
    """(len(a), len(b)) matrix with 1 where the pair anticommutes."""
    if not rows_a or not rows_b:
        return np.zeros((len(rows_a), len(rows_b)), dtype=np.uint8)
    xa, za = stack(rows_a)
    xb, zb = stack(rows_b, rows_a[0].n)
    return anticommutation_bits(xa[:, None, :], za[:, None, :], xb[None, :, :], zb[None, :, :])


def pauli_weight(p: PauliString) -> int:
    return int(bits.popcount(p.x | p.z))


def phase_sum(xi: np.ndarray, zi: np.ndarray, xh: np.ndarray, zh: np.ndarray) -> np.ndarray:
    """Sum over qubits of g(x_i, z_i, x_h, z_h): the power of i picked up by P_i * P_h.

    +1 for the cyclic products XY, YZ, ZX and -1 for YX, ZY, XZ, counted over packed
    words and reduced along the last axis.
    """
    yi, yh = xi & zi, xh & zh
    xi_only, zi_only = xi & ~zi, zi & ~xi
    xh_only, zh_only = xh & ~zh, zh & ~xh
    plus = (xi_only & yh) | (yi & zh_only) | (zi_only & xh_only)
    minus = (yi & xh_only) | (zi_only & yh) | (xi_only & zh_only)
    return bits.popcount(plus) - bits.popcount(minus)


def multiply(p1: PauliString, p2: PauliString) -> tuple[PauliString, int]:
    """p1 * p2 = i**e * P with P unsigned; returns (P, e mod 4)."""
    _check_same(p1.n, p2.n)
    e = 2 * p1.r + 2 * p2.r + int(phase_sum(p1.x, p1.z, p2.x, p2.z))
    return PauliString(p1.n, p1.x ^ p2.x, p1.z ^ p2.z), e % 4
