import pytest

from stabsim.circuit import (
    Circuit,
    CircuitBuilder,
    Gate,
    GateKind,
    ViolationKind,
    emit_native,
    load_circuit,
    measurement_only,
    parse_native,
    validate_chunks,
)
from stabsim.errors import InvalidGateError, InvalidSizeError, ParseError

BELL = """\
# bell pair
qubits 2
h 0
cx 0 1   # entangle
chunk
m 0
m 1
"""


def test_parse_native():
    c = parse_native(BELL)
    assert c.n == 2
    assert [str(g) for g in c.gates] == ["h 0", "cx 0 1", "m 0", "m 1"]
    assert c.chunk_marks == (2,)
    assert c.measurement_count == 2
    assert c.t_count == 0


def test_emit_native_reparses_to_same_circuit():
    c = parse_native(BELL)
    text = emit_native(c)
    assert text.splitlines() == ["qubits 2", "h 0", "cx 0 1", "chunk", "m 0", "m 1"]
    assert parse_native(text) == c


@pytest.mark.parametrize(
    ("text", "line", "error"),
    [
        ("h 0\n", 1, ParseError),
        ("qubits 2\nfoo 1\n", 2, ParseError),
        ("qubits 2\nh\n", 2, ParseError),
        ("qubits 2\ncx 0\n", 2, ParseError),
        ("qubits 2\nh -1\n", 2, ParseError),
        ("qubits 2\n\nh 2\n", 3, InvalidGateError),
        ("qubits 2\ncx 1 1\n", 2, InvalidGateError),
        ("qubits 2\nqubits 3\n", 2, ParseError),
        ("qubits 0\n", 1, ParseError),
    ],
)
def test_parse_native_errors_carry_line(text, line, error):
    with pytest.raises(error) as exc:
        parse_native(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_empty_text_is_missing_header():
    with pytest.raises(ParseError, match="header"):
        parse_native("# nothing\n")


def test_gate_arity_checked():
    with pytest.raises(InvalidGateError):
        Gate(GateKind.CX, (0,))
    assert GateKind.SWAP.arity == 2
    assert not GateKind.T.is_clifford
    assert GateKind.SDG.is_clifford


def test_circuit_validates_qubits():
    with pytest.raises(InvalidSizeError):
        Circuit(0)
    with pytest.raises(InvalidGateError):
        Circuit(1, (Gate(GateKind.H, (1,)),))


def test_builder_collapses_redundant_marks():
    b = CircuitBuilder(2)
    b.chunk().chunk().add("h", 0).chunk().chunk().add("h", 1).chunk()
    c = b.build()
    assert c.chunk_marks == (1,)
    assert list(c.chunks()) == [(0, 0, 1), (1, 1, 2)]


def test_validate_chunks_reports_collisions_and_measurements():
    c = parse_native("qubits 3\nh 0\ncx 0 1\nchunk\nh 2\nm 1\nchunk\nh 0\nh 1\n")
    found = validate_chunks(c)
    assert [(v.chunk, v.gate_index, v.kind, v.qubit) for v in found] == [
        (0, 1, ViolationKind.COLLISION, 0),
        (1, 3, ViolationKind.MEASUREMENT, 1),
    ]
    assert "collision on qubit 0" in str(found[0])


def test_measurement_only():
    c = parse_native("qubits 2\nh 0\nchunk\nm 0\nm 1\n")
    assert measurement_only(c, 1, 3)
    assert not measurement_only(c, 0, 3)
    assert not measurement_only(c, 1, 1)


def test_load_circuit_picks_parser(tmp_path):
    native = tmp_path / "bell.stab"
    native.write_text(BELL)
    qasm = tmp_path / "bell.qasm"
    qasm.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\n')

    assert load_circuit(native).n == 2
    assert [str(g) for g in load_circuit(qasm).gates] == ["h 0", "cx 0 1"]

    other = tmp_path / "bell.txt"
    other.write_text(BELL)
    with pytest.raises(ParseError):
        load_circuit(other)
    assert load_circuit(other, "stab").measurement_count == 2


def test_load_circuit_rejects_non_utf8(tmp_path):
    path = tmp_path / "latin.stab"
    path.write_bytes(b"qubits 1\n# caf\xe9\nh 0\n")
    with pytest.raises(ParseError, match="latin.stab is not UTF-8 text"):
        load_circuit(path)
