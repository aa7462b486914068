"""Loading of engine prior-sample exports.

An export directory contains manifest.json plus, per state, an interchange
density matrix, a tau vector, and a simulated shot dataset.  The trainer
consumes (frequency tensor, tau) pairs for the loss and the target states
for validation fidelity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .layout import load_density_matrix, load_frequency_tensor, load_tau


@dataclass
class Dataset:
    tensors: np.ndarray  # (N, H, W) frequency tensors
    taus: np.ndarray  # (N, D*D) targets
    states: np.ndarray  # (N, D, D) target density matrices
    qubits: int

    def __len__(self) -> int:
        return self.tensors.shape[0]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices)
        return Dataset(self.tensors[idx], self.taus[idx], self.states[idx], self.qubits)


def load_export(data_dir, limit: int | None = None) -> Dataset:
    data_dir = Path(data_dir)
    manifest = json.loads((data_dir / "manifest.json").read_text())
    entries = manifest["files"][:limit]
    if not entries:
        raise ValueError(f"{data_dir}: empty export")
    tensors, taus, states = [], [], []
    for entry in entries:
        if "shots" not in entry:
            raise ValueError(f"{data_dir}: export lacks shot datasets")
        tensors.append(load_frequency_tensor(data_dir / entry["shots"]))
        taus.append(load_tau(data_dir / entry["tau"]))
        states.append(load_density_matrix(data_dir / entry["state"]))
    return Dataset(
        np.stack(tensors).astype(np.float32),
        np.stack(taus).astype(np.float64),
        np.stack(states),
        int(manifest["qubits"]),
    )


def split(dataset: Dataset, train_fraction: float) -> tuple:
    """Head/tail split by manifest order, matching a fixed train/validation
    partition across runs."""
    n_train = int(round(train_fraction * len(dataset)))
    n_train = min(max(n_train, 1), len(dataset) - 1)
    return dataset.subset(range(n_train)), dataset.subset(range(n_train, len(dataset)))
