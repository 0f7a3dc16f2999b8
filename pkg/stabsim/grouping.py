"""Weighted Pauli terms and greedy commuting-group construction.

Hamiltonian text: one `<real> <pauli>` term per line, `#` comments. Groups text: a
`GROUP k` header per group followed by its `<coeff> <pauli>` members.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import bits
from .errors import DimensionError, InvalidSizeError, ParseError
from .pauli import PauliString, anticommutation_bits, parse_pauli, qubitwise_conflicts, stack

logger = logging.getLogger(__name__)

ZERO_TOLERANCE = 1e-12


class GroupMode(str, Enum):
    QWC = "qwc"
    GC = "gc"


@dataclass(frozen=True)
class WeightedPauli:
    coeff: float
    pauli: PauliString

    def __post_init__(self) -> None:
        if not math.isfinite(self.coeff):
            raise ValueError(f"coefficient must be finite, got {self.coeff}")
        if self.pauli.r:
            object.__setattr__(self, "coeff", -self.coeff)
            object.__setattr__(self, "pauli", self.pauli.with_sign(0))

    @property
    def weight(self) -> float:
        return abs(self.coeff)

    def __str__(self) -> str:
        return f"{self.coeff!r} {self.pauli.label}"


@dataclass
class GroupedHamiltonian:
    mode: GroupMode
    groups: list[list[WeightedPauli]] = field(default_factory=list)

    @property
    def term_count(self) -> int:
        return sum(len(g) for g in self.groups)


@dataclass(frozen=True)
class GroupViolation:
    group: int
    first: int
    second: int

    def __str__(self) -> str:
        return f"group {self.group}: members {self.first} and {self.second} do not commute"


@dataclass(frozen=True)
class GroupStats:
    mode: GroupMode
    terms: int
    groups: int
    largest_group: int
    max_weight_sum: float
    basis_rotations: int | None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "terms": self.terms,
            "groups": self.groups,
            "largest_group": self.largest_group,
            "max_weight_sum": self.max_weight_sum,
            "basis_rotations": self.basis_rotations,
        }


def parse_hamiltonian(text: str) -> list[WeightedPauli]:
    """Parse terms, merging repeated Pauli strings and dropping those that cancel."""
    merged: dict[bytes, list] = {}
    n: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<coeff> <pauli>', got {line!r}", line=lineno)
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ParseError(f"malformed coefficient {parts[0]!r}", line=lineno) from None
        if not math.isfinite(coeff):
            raise ParseError(f"coefficient must be finite, got {parts[0]!r}", line=lineno)
        try:
            pauli = parse_pauli(parts[1])
        except ParseError as e:
            raise ParseError(str(e), line=lineno, position=e.position) from None
        if n is None:
            n = pauli.n
        elif pauli.n != n:
            raise DimensionError(f"term has {pauli.n} qubits, expected {n}", line=lineno)
        if pauli.r:
            coeff, pauli = -coeff, pauli.with_sign(0)
        entry = merged.setdefault(pauli.key(), [0.0, pauli])
        entry[0] += coeff
    terms = [WeightedPauli(c, p) for c, p in merged.values() if abs(c) > ZERO_TOLERANCE]
    logger.debug("parsed %d terms (%d after merging)", len(merged), len(terms))
    return terms


def _predicate(mode: GroupMode):
    return qubitwise_conflicts if mode is GroupMode.QWC else anticommutation_bits


def sort_terms(terms: list[WeightedPauli]) -> list[WeightedPauli]:
    """Descending |coeff|; ties by Pauli text, then input order."""
    order = sorted(range(len(terms)), key=lambda i: (-terms[i].weight, terms[i].pauli.label, i))
    return [terms[i] for i in order]


def group_greedy(terms: list[WeightedPauli], mode: GroupMode | str) -> GroupedHamiltonian:
    mode = GroupMode(mode)
    if not terms:
        raise InvalidSizeError("cannot group an empty term list")
    n = terms[0].pauli.n
    if any(t.pauli.n != n for t in terms):
        raise DimensionError("terms act on different qubit counts")
    conflicts = _predicate(mode)
    groups: list[list[WeightedPauli]] = []
    packed: list[tuple[np.ndarray, np.ndarray]] = []
    for term in sort_terms(terms):
        p = term.pauli
        for k, (xs, zs) in enumerate(packed):
            if not conflicts(p.x, p.z, xs, zs).any():
                groups[k].append(term)
                packed[k] = (np.vstack([xs, p.x]), np.vstack([zs, p.z]))
                break
        else:
            groups.append([term])
            packed.append((p.x[None, :].copy(), p.z[None, :].copy()))
    logger.debug("%s grouping: %d terms -> %d groups", mode.value, len(terms), len(groups))
    return GroupedHamiltonian(mode, groups)


def verify_grouping(g: GroupedHamiltonian) -> list[GroupViolation]:
    conflicts = _predicate(g.mode)
    violations = []
    for k, group in enumerate(g.groups):
        if len(group) < 2:
            continue
        xs, zs = stack([t.pauli for t in group])
        matrix = conflicts(xs[:, None, :], zs[:, None, :], xs[None], zs[None])
        for i, j in zip(*np.nonzero(np.triu(matrix, k=1)), strict=True):
            violations.append(GroupViolation(k, int(i), int(j)))
    return violations


def _qwc_rotations(group: list[WeightedPauli]) -> int:
    """Qubits whose shared measurement basis is X or Y."""
    xs, _ = stack([t.pauli for t in group])
    union_x = np.bitwise_or.reduce(xs, axis=0)
    return int(bits.popcount(union_x))


def group_stats(g: GroupedHamiltonian) -> GroupStats:
    if not g.groups:
        raise InvalidSizeError("grouping is empty")
    rotations = None
    if g.mode is GroupMode.QWC:
        rotations = sum(_qwc_rotations(group) for group in g.groups)
    return GroupStats(
        mode=g.mode,
        terms=g.term_count,
        groups=len(g.groups),
        largest_group=max(len(group) for group in g.groups),
        max_weight_sum=float(sum(max(t.weight for t in group) for group in g.groups)),
        basis_rotations=rotations,
    )


def emit_groups(g: GroupedHamiltonian) -> str:
    lines = []
    for k, group in enumerate(g.groups):
        lines.append(f"GROUP {k}")
        lines.extend(str(t) for t in group)
    return "\n".join(lines) + "\n"


def random_hamiltonian(n_qubits: int, n_terms: int, seed: int = 0) -> list[WeightedPauli]:
    """Distinct random Pauli strings with normally distributed coefficients."""
    if n_qubits < 1 or n_terms < 1:
        raise InvalidSizeError(f"need n_qubits >= 1 and n_terms >= 1, got {n_qubits}, {n_terms}")
    if n_terms > 4**n_qubits:
        raise InvalidSizeError(f"only {4**n_qubits} distinct Pauli strings on {n_qubits} qubits")
    rng = np.random.default_rng(seed)
    seen: dict[str, WeightedPauli] = {}
    while len(seen) < n_terms:
        codes = rng.integers(4, size=n_qubits)
        label = "".join("IXYZ"[c] for c in codes)
        if label in seen:
            continue
        coeff = float(rng.normal())
        seen[label] = WeightedPauli(coeff if coeff != 0.0 else 1.0, parse_pauli(label))
    return list(seen.values())
