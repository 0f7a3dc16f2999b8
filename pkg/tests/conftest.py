"""Shared fixtures for stabsim tests."""

import pytest
from typer.testing import CliRunner

from stabsim.qec import random_clifford_circuit, random_clifford_t_circuit


@pytest.fixture
def cli_runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def _no_worker_env(monkeypatch):
    monkeypatch.delenv("STABSIM_WORKERS", raising=False)


@pytest.fixture
def clifford_circuits():
    return [
        random_clifford_circuit(n, 40, seed=seed, measure_density=0.2)
        for seed, n in enumerate([1, 2, 3, 5, 8])
    ]


@pytest.fixture
def clifford_t_circuits():
    return [
        random_clifford_t_circuit(n, 30, seed=seed, t_density=0.4)
        for seed, n in enumerate([1, 2, 3, 4, 4, 5])
    ]
