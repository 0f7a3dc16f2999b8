"""OpenQASM 2.0 subset front end.

Accepted: the `OPENQASM 2.0;` header, `include "qelib1.inc";` (ignored, the gate subset is
built in), one `qreg`, any number of `creg`, the gates h s sdg x y z cx cz swap t tdg,
`measure q[i] -> c[j];` and `barrier` (becomes a chunk boundary). Single-qubit gates and
measure also accept a whole register.
"""

import logging
import re
from collections.abc import Iterator

from .circuit import Circuit, CircuitBuilder, GateKind
from .errors import InvalidGateError, ParseError, UnsupportedError

logger = logging.getLogger(__name__)

_GATES = {
    "h": GateKind.H,
    "s": GateKind.S,
    "sdg": GateKind.SDG,
    "x": GateKind.X,
    "y": GateKind.Y,
    "z": GateKind.Z,
    "cx": GateKind.CX,
    "CX": GateKind.CX,
    "cz": GateKind.CZ,
    "swap": GateKind.SWAP,
    "t": GateKind.T,
    "tdg": GateKind.TDG,
}
_UNSUPPORTED = ("gate", "opaque", "if", "reset", "U")

_re_symbol = r"[a-zA-Z_][a-zA-Z0-9_]*"
_re_arg = rf"({_re_symbol})\s*(?:\[\s*(\d+)\s*\])?"
_re_header = re.compile(r"OPENQASM\s+(\S+)")
_re_include = re.compile(r'include\s+"([^"]*)"')
_re_reg = re.compile(rf"(qreg|creg)\s+({_re_symbol})\s*\[\s*(\d+)\s*\]")
_re_measure = re.compile(rf"measure\s+{_re_arg}\s*->\s*{_re_arg}")
_re_arg_only = re.compile(rf"^{_re_arg}$")
_re_gate = re.compile(rf"^({_re_symbol})\s*(\(.*\))?\s*(.*)$", re.S)


def _statements(text: str) -> Iterator[tuple[int, str]]:
    """Split into `;`-terminated statements tagged with their starting line."""
    buf: list[str] = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for piece in re.split(r"(;)", line):
            if piece == ";":
                stmt = " ".join(buf).strip()
                yield (start or lineno), stmt
                buf, start = [], None
            elif piece.strip():
                if start is None:
                    start = lineno
                buf.append(piece.strip())
    if buf:
        raise ParseError("missing ';' at end of statement", line=start)


class _Register:
    def __init__(self, name: str, size: int):
        self.name = name
        self.size = size

    def resolve(self, name: str, index: str | None, lineno: int) -> list[int]:
        if name != self.name:
            raise ParseError(f"unknown quantum register {name!r}", line=lineno)
        if index is None:
            return list(range(self.size))
        q = int(index)
        if q >= self.size:
            raise InvalidGateError(f"{name}[{q}] out of range for qreg of size {self.size}", line=lineno)
        return [q]


def parse_qasm2_subset(text: str) -> Circuit:
    stmts = _statements(text)
    first = next(stmts, None)
    header = _re_header.fullmatch(first[1]) if first else None
    if header is None or header.group(1) != "2.0":
        raise ParseError('program must start with "OPENQASM 2.0;"', line=first[0] if first else 1)

    qreg: _Register | None = None
    builder: CircuitBuilder | None = None
    cregs: dict[str, int] = {}

    for lineno, stmt in stmts:
        if not stmt:
            continue
        word = re.match(r"[A-Za-z_]\w*", stmt)
        keyword = word.group(0) if word else stmt.split()[0]

        if keyword in _UNSUPPORTED:
            raise UnsupportedError(f"unsupported construct '{keyword}'", line=lineno)
        if keyword == "include":
            m = _re_include.fullmatch(stmt)
            if m is None:
                raise ParseError(f"malformed include: {stmt!r}", line=lineno)
            logger.debug("include %s treated as built-in gate set", m.group(1))
            continue
        if keyword in ("qreg", "creg"):
            m = _re_reg.fullmatch(stmt)
            if m is None:
                raise ParseError(f"malformed register declaration: {stmt!r}", line=lineno)
            kind, name, size = m.group(1), m.group(2), int(m.group(3))
            if kind == "creg":
                cregs[name] = size
                continue
            if qreg is not None:
                raise UnsupportedError("unsupported construct 'multiple qreg'", line=lineno)
            if size < 1:
                raise ParseError("qreg must hold at least one qubit", line=lineno)
            qreg = _Register(name, size)
            builder = CircuitBuilder(size)
            continue

        if qreg is None or builder is None:
            raise ParseError(f"'{keyword}' before any qreg declaration", line=lineno)

        if keyword == "barrier":
            builder.chunk()
            continue
        if keyword == "measure":
            m = _re_measure.fullmatch(stmt)
            if m is None:
                raise ParseError(f"malformed measure: {stmt!r}", line=lineno)
            qubits = qreg.resolve(m.group(1), m.group(2), lineno)
            if m.group(3) not in cregs:
                raise ParseError(f"unknown classical register {m.group(3)!r}", line=lineno)
            for q in qubits:
                builder.add(GateKind.M, q)
            continue

        m = _re_gate.match(stmt)
        if m is None:
            raise ParseError(f"malformed statement {stmt!r}", line=lineno)
        name, params, rest = m.group(1), m.group(2), m.group(3)
        if params is not None:
            raise UnsupportedError(f"unsupported construct 'parameterized gate {name}'", line=lineno)
        if name not in _GATES:
            raise UnsupportedError(f"unsupported construct 'gate {name}'", line=lineno)
        kind = _GATES[name]
        operands = [a.strip() for a in rest.split(",")] if rest.strip() else []
        resolved = []
        for operand in operands:
            am = _re_arg_only.match(operand)
            if am is None:
                raise ParseError(f"malformed operand {operand!r}", line=lineno)
            resolved.append(qreg.resolve(am.group(1), am.group(2), lineno))
        if len(resolved) != kind.arity:
            raise ParseError(f"{name} takes {kind.arity} operand(s), got {len(resolved)}", line=lineno)
        try:
            if kind.arity == 1:
                for q in resolved[0]:
                    builder.add(kind, q)
            else:
                if any(len(r) != 1 for r in resolved):
                    raise UnsupportedError(
                        f"unsupported construct 'register broadcast on {name}'", line=lineno
                    )
                builder.add(kind, resolved[0][0], resolved[1][0])
        except InvalidGateError as e:
            raise InvalidGateError(str(e), line=lineno) from None

    if builder is None:
        raise ParseError("no qreg declared")
    return builder.build()
