"""Shared fixtures.

The engine is exercised exclusively through its CLI, never imported; small
exports are generated once per session for the unit tests.
"""

import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def run_engine(*args: str) -> subprocess.CompletedProcess:
    """Invoke the estimation-engine CLI."""
    exe = shutil.which("bqst")
    cmd = [exe, *args] if exe else [sys.executable, "-m", "bqst.harness.cli", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"engine call {args} failed: {proc.stderr}")
    return proc


def assert_physical(rho: np.ndarray, atol: float = 1e-10):
    assert np.abs(rho - rho.conj().T).max() <= atol
    assert abs(rho.trace() - 1.0) <= atol
    assert np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] >= -atol


@pytest.fixture(scope="session")
def small_export(tmp_path_factory) -> Path:
    """60 one-qubit states with 2000-shot datasets."""
    out = tmp_path_factory.mktemp("export_1q")
    run_engine("--seed", "9001", "--out", str(out), "prior-sample",
               "--prior", "bures", "--qubits", "1", "-n", "60", "--shots", "2000")
    return out


@pytest.fixture(scope="session")
def small_export_2q(tmp_path_factory) -> Path:
    """A handful of two-qubit states for shape/mismatch tests."""
    out = tmp_path_factory.mktemp("export_2q")
    run_engine("--seed", "9002", "--out", str(out), "prior-sample",
               "--prior", "ma:K=5,alpha=0.4", "--qubits", "2", "-n", "4", "--shots", "2000")
    return out
