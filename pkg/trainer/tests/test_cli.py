"""Trainer CLI smoke flow: train, evaluate, predict."""

import json
import shutil
import subprocess
import sys
from pathlib import Path


def _run_trainer(*args: str) -> subprocess.CompletedProcess:
    exe = shutil.which("qst-trainer")
    cmd = [exe, *args] if exe else [sys.executable, "-m", "qst_trainer.cli", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def test_train_evaluate_predict_flow(small_export, tmp_path):
    weights = tmp_path / "model.pt"
    proc = _run_trainer("train", "--data", str(small_export), "--qubits", "1",
                        "--out", str(weights), "--epochs", "3", "--seed", "2")
    assert proc.returncode == 0, proc.stderr
    history = json.loads(weights.with_suffix(".history.json").read_text())
    assert len(history["val_fidelity"]) == 3

    proc = _run_trainer("evaluate", "--weights", str(weights),
                        "--data", str(small_export), "--limit", "10")
    assert proc.returncode == 0, proc.stderr
    assert "mean fidelity" in proc.stdout

    out_dir = tmp_path / "pred"
    proc = _run_trainer("predict", "--weights", str(weights),
                        "--data-dir", str(small_export), "--out", str(out_dir))
    assert proc.returncode == 0, proc.stderr
    assert len(list(Path(out_dir).glob("*.rho_ml.json"))) == 60


def test_errors_are_machine_readable(tmp_path):
    proc = _run_trainer("train", "--data", str(tmp_path), "--qubits", "1",
                        "--out", str(tmp_path / "m.pt"), "--epochs", "1")
    assert proc.returncode == 1
    err = json.loads(proc.stderr.strip().splitlines()[-1])
    assert set(err) == {"error", "message"}
