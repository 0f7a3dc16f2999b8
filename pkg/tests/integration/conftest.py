from pathlib import Path

import pytest

from stabsim import cli
from stabsim.config import Config

BELL = "qubits 2\nh 0\ncx 0 1\nm 0\nm 1\n"


@pytest.fixture(autouse=True)
def config_dir(tmp_path: Path, monkeypatch) -> Path:
    """Point every CLI invocation at a throwaway config directory."""
    path = tmp_path / ".stabsim"
    load = Config.load_or_default
    monkeypatch.setattr(cli.Config, "load_or_default", lambda **kw: load(config_dir=path, **kw))
    return path


@pytest.fixture
def bell_file(tmp_path: Path) -> Path:
    path = tmp_path / "bell.stab"
    path.write_text(BELL, encoding="utf-8")
    return path


@pytest.fixture
def bell_qasm(tmp_path: Path) -> Path:
    path = tmp_path / "bell.qasm"
    path.write_text(
        'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncreg c[2];\n'
        "h q[0];\nbarrier q;\ncx q[0],q[1];\nbarrier q;\nmeasure q -> c;\n",
        encoding="utf-8",
    )
    return path
