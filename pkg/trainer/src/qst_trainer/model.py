"""Convolutional point estimator.

Two conv units (2x2 kernels, stride 1, 25 filters, ReLU) with a 2x2 max
pool between them, then two dense layers, dropout 0.5, and a linear tau
output head.  Dense widths and the tau length scale with the qubit count:

    qubits  input     dense1  dense2  tau
    1       (2, 3)    250     150     4
    2       (6, 6)    750     450     16
    3       (6, 36)   2500    1000    64
    4       (36, 36)  4500    2500    256

Convolutions use 'same' padding and pooling is ceil-mode so the one-qubit
(2, 3) input survives the stack.  The predicted tau decodes through the
Cholesky construction, so emitted states are physical for any weights.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch
import torch.nn as nn

from .layout import FREQ_SHAPES, tau_to_rho

DENSE_WIDTHS = {1: (250, 150, 4), 2: (750, 450, 16), 3: (2500, 1000, 64), 4: (4500, 2500, 256)}


class TauEstimator(nn.Module):
    def __init__(self, qubits: int):
        super().__init__()
        if qubits not in DENSE_WIDTHS:
            raise ValueError(f"supported qubit counts are 1..4, got {qubits}")
        self.qubits = qubits
        self.input_shape = FREQ_SHAPES[qubits]
        d1, d2, out = DENSE_WIDTHS[qubits]
        # kernel-2 'same' padding, written explicitly (pad right/bottom)
        self.features = nn.Sequential(
            nn.ZeroPad2d((0, 1, 0, 1)),
            nn.Conv2d(1, 25, kernel_size=2, stride=1),
            nn.ReLU(),
            nn.MaxPool2d(2, ceil_mode=True),
            nn.ZeroPad2d((0, 1, 0, 1)),
            nn.Conv2d(25, 25, kernel_size=2, stride=1),
            nn.ReLU(),
            nn.Flatten(),
        )
        with torch.no_grad():
            flat = self.features(torch.zeros(1, 1, *self.input_shape)).shape[1]
        self.head = nn.Sequential(
            nn.Linear(flat, d1),
            nn.ReLU(),
            nn.Linear(d1, d2),
            nn.ReLU(),
            nn.Dropout(0.5),
            nn.Linear(d2, out),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() == 3:
            x = x.unsqueeze(1)
        if tuple(x.shape[-2:]) != self.input_shape:
            raise ValueError(
                f"input axes {tuple(x.shape[-2:])} do not match the "
                f"{self.qubits}-qubit layout {self.input_shape}"
            )
        return self.head(self.features(x))

    @torch.no_grad()
    def predict_tau(self, tensors: np.ndarray) -> np.ndarray:
        """Tau vectors for a (N, H, W) stack of frequency tensors."""
        self.eval()
        x = torch.as_tensor(np.asarray(tensors, dtype=np.float32))
        if x.dim() == 2:
            x = x.unsqueeze(0)
        return self(x).cpu().numpy().astype(float)

    def predict_rho(self, tensors: np.ndarray) -> np.ndarray:
        """Decoded density matrices for a stack of frequency tensors."""
        taus = self.predict_tau(tensors)
        return np.stack([tau_to_rho(t) for t in taus])


def save_model(model: TauEstimator, path) -> None:
    path = Path(path)
    torch.save({"qubits": model.qubits, "state_dict": model.state_dict()}, path)
    path.with_suffix(path.suffix + ".meta.json").write_text(
        json.dumps({"qubits": model.qubits})
    )


def load_model(path) -> TauEstimator:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    model = TauEstimator(int(blob["qubits"]))
    model.load_state_dict(blob["state_dict"])
    model.eval()
    return model
