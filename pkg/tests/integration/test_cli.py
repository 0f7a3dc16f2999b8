import csv
import io
import json
from pathlib import Path

import pytest

from stabsim.cli import app
from stabsim.pbc import parse_pbc


def test_no_subcommand_prints_help(cli_runner):
    result = cli_runner.invoke(app, [])
    assert result.exit_code == 2
    assert "sim" in result.output
    assert "transpile" in result.output


def test_sim_text(cli_runner, bell_file: Path):
    result = cli_runner.invoke(app, ["sim", "-i", str(bell_file)])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert len(lines) == 2
    assert "random" in lines[0]
    assert "deterministic" in lines[1]
    assert lines[0].split("-> ")[1][0] == lines[1].split("-> ")[1][0]


def test_sim_json_is_seeded(cli_runner, bell_file: Path):
    runs = [
        json.loads(cli_runner.invoke(app, ["--seed", "3", "sim", "-i", str(bell_file), "-f", "json"]).stdout)
        for _ in range(2)
    ]
    assert runs[0] == runs[1]
    entries = runs[0]["entries"]
    assert [e["gate"] for e in entries] == [2, 3]
    assert [e["deterministic"] for e in entries] == [False, True]
    assert runs[0]["fallback_chunks"] == []


def test_sim2d_with_workers_matches_sim(cli_runner, bell_qasm: Path):
    base = ["sim", "-i", str(bell_qasm), "-f", "json", "--seed", "9"]
    a = cli_runner.invoke(app, base)
    b = cli_runner.invoke(app, ["--workers", "4", *base, "--mode", "sim2d"])
    assert a.exit_code == b.exit_code == 0
    assert json.loads(a.stdout)["entries"] == json.loads(b.stdout)["entries"]
    assert json.loads(b.stdout)["fallback_chunks"] == []


def test_sim_shots_histogram(cli_runner, bell_file: Path):
    result = cli_runner.invoke(app, ["sim", "-i", str(bell_file), "--shots", "64", "-f", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["shots"] == 64
    assert set(payload["joint"]) <= {"00", "11"}
    assert sum(payload["joint"].values()) == 64


def test_sim_dump(cli_runner, bell_file: Path):
    result = cli_runner.invoke(app, ["sim", "-i", str(bell_file), "--dump"])
    assert result.exit_code == 0
    assert "S0:" in result.stdout
    assert "D1:" in result.stdout


def test_sim_missing_file(cli_runner, tmp_path: Path):
    result = cli_runner.invoke(app, ["sim", "-i", str(tmp_path / "absent.stab")])
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_sim_parse_error_reports_line(cli_runner, tmp_path: Path):
    bad = tmp_path / "bad.stab"
    bad.write_text("qubits 2\nh 0\nfrobnicate 1\n")
    result = cli_runner.invoke(app, ["sim", "-i", str(bad)])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "line 3" in result.output


def test_sim_rejects_t(cli_runner, tmp_path: Path):
    path = tmp_path / "t.stab"
    path.write_text("qubits 1\nt 0\nm 0\n")
    result = cli_runner.invoke(app, ["sim", "-i", str(path)])
    assert result.exit_code == 1


def test_group_to_file(cli_runner, tmp_path: Path):
    ham = tmp_path / "h.txt"
    ham.write_text("0.5 XX\n0.25 ZZ\n-0.1 XI\n")
    out = tmp_path / "groups.txt"
    result = cli_runner.invoke(app, ["group", "-i", str(ham), "--mode", "qwc", "-o", str(out)])
    assert result.exit_code == 0, result.output
    stats = json.loads(result.stdout)
    assert stats["mode"] == "qwc"
    assert stats["terms"] == 3
    assert stats["groups"] == 2
    assert out.read_text().startswith("GROUP 0\n")


def test_group_general_commutation_to_stdout(cli_runner, tmp_path: Path):
    ham = tmp_path / "h.txt"
    ham.write_text("1.0 XX\n1.0 YY\n1.0 ZZ\n")
    result = cli_runner.invoke(app, ["group", "-i", str(ham), "-m", "gc"])
    assert result.exit_code == 0
    assert "GROUP 0" in result.output
    assert "GROUP 1" not in result.output


def test_transpile_verify(cli_runner, tmp_path: Path):
    src = tmp_path / "tt.stab"
    src.write_text("qubits 1\nt 0\nt 0\nm 0\n")
    out = tmp_path / "tt.pbc"
    result = cli_runner.invoke(app, ["transpile", "-i", str(src), "-o", str(out), "--verify"])
    assert result.exit_code == 0, result.output
    stats = json.loads(result.stdout)
    assert stats["initial_t"] == 2
    assert stats["final_rotations_rowcount"] == 0
    assert stats["t_ratio"] is None
    assert stats["verify"]["passed"] is True
    program = parse_pbc(out.read_text())
    assert program.layers == []
    assert program.measured == (0,)


def test_transpile_csv_stats(cli_runner, tmp_path: Path):
    src = tmp_path / "c.stab"
    src.write_text("qubits 2\nh 0\nt 0\ncx 0 1\nt 1\nm 0\nm 1\n")
    out = tmp_path / "c.pbc"
    result = cli_runner.invoke(
        app, ["transpile", "-i", str(src), "-o", str(out), "-f", "csv", "--scan", "reverse", "--verify"]
    )
    assert result.exit_code == 0, result.output
    (row,) = list(csv.DictReader(io.StringIO(result.stdout)))
    assert row["initial_t"] == "2"
    assert "verify" not in row


def test_transpile_rejects_mid_circuit_measurement(cli_runner, tmp_path: Path):
    src = tmp_path / "mid.stab"
    src.write_text("qubits 1\nm 0\nh 0\nm 0\n")
    result = cli_runner.invoke(app, ["transpile", "-i", str(src)])
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_bench_surface_sweep(cli_runner, tmp_path: Path):
    emit = tmp_path / "circuits"
    result = cli_runner.invoke(app, ["bench", "surface", "--sweep", "3,5", "--emit", str(emit)])
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.stdout)))
    assert [r["circuit"] for r in rows] == ["surface_d3_r1", "surface_d5_r1"]
    assert [r["n"] for r in rows] == ["17", "49"]
    assert (emit / "surface_d5_r1.stab").read_text().startswith("qubits 49")


def test_bench_random_json_reports_speedup(cli_runner, tmp_path: Path):
    out = tmp_path / "rows.json"
    result = cli_runner.invoke(
        app,
        [
            "bench", "random", "-n", "8", "--workers-sweep", "1,2",
            "-m", "sim", "-m", "sim2d", "-f", "json", "-o", str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    rows = json.loads(out.read_text())
    assert len(rows) == 4
    assert {r["mode"] for r in rows} == {"sim", "sim2d"}
    ratios = json.loads(result.stdout)
    assert set(ratios) == {"random_n8_s0/sim/w2", "random_n8_s0/sim2d/w2"}
    assert all(v > 0 for v in ratios.values())


def test_bench_single_worker_has_no_speedup(cli_runner, tmp_path: Path):
    out = tmp_path / "rows.csv"
    result = cli_runner.invoke(app, ["bench", "surface", "-d", "3", "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert result.stdout == ""
    assert out.read_text().startswith("circuit,n,")


def test_bench_bad_sweep(cli_runner):
    result = cli_runner.invoke(app, ["bench", "surface", "--sweep", "3,x"])
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_verify_tableau(cli_runner):
    result = cli_runner.invoke(app, ["verify", "tableau", "--trials", "5", "-n", "4", "-f", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["trials"] == 5
    assert payload["passed"] is True


def test_verify_transpile(cli_runner):
    result = cli_runner.invoke(app, ["verify", "transpile", "--trials", "5", "-n", "3", "-g", "20"])
    assert result.exit_code == 0, result.output
    assert "passed: True" in result.stdout


def test_set_persists(cli_runner, config_dir: Path):
    result = cli_runner.invoke(app, ["set", "workers", "4"])
    assert result.exit_code == 0, result.output
    assert "workers=4" in result.stdout
    assert json.loads((config_dir / "stabsim.json").read_text())["workers"] == 4


def test_set_rejects_unknown_key(cli_runner, config_dir: Path):
    result = cli_runner.invoke(app, ["set", "colour", "blue"])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert not (config_dir / "stabsim.json").exists()


def test_one_off_flags_are_not_persisted(cli_runner, config_dir: Path):
    result = cli_runner.invoke(app, ["--workers", "3", "--seed", "8", "set", "audit", "true"])
    assert result.exit_code == 0, result.output
    assert json.loads((config_dir / "stabsim.json").read_text()) == {"audit": True}


def test_environment_workers_are_not_persisted(cli_runner, config_dir: Path, monkeypatch):
    monkeypatch.setenv("STABSIM_WORKERS", "5")
    result = cli_runner.invoke(app, ["set", "seed", "2"])
    assert result.exit_code == 0, result.output
    assert json.loads((config_dir / "stabsim.json").read_text()) == {"seed": 2}


@pytest.mark.parametrize(
    ("command", "name"), [("sim", "bad.stab"), ("transpile", "bad.qasm"), ("group", "bad.txt")]
)
def test_non_utf8_input_is_reported(cli_runner, tmp_path: Path, command, name):
    path = tmp_path / name
    path.write_bytes(b"qubits 1\nh 0\n\xff\n")
    result = cli_runner.invoke(app, [command, "-i", str(path)])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "not UTF-8" in result.output
    assert not isinstance(result.exception, UnicodeDecodeError)


def test_qasm_malformed_statement_is_reported(cli_runner, tmp_path: Path):
    path = tmp_path / "bad.qasm"
    path.write_text("OPENQASM 2.0;\nqreg q[2];\n1 q[0];\n", encoding="utf-8")
    result = cli_runner.invoke(app, ["transpile", "-i", str(path)])
    assert result.exit_code == 1
    assert "line 3: malformed statement" in result.output
