"""Training loop: mean-square tau loss, Adagrad, per-epoch validation
fidelity."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch

from .data import Dataset, load_export, split
from .layout import fidelity
from .model import TauEstimator


@dataclass
class TrainerConfig:
    qubits: int
    data_dir: str
    learning_rate: float = 0.01
    batch_size: int = 100
    epochs: int = 75
    train_fraction: float = 0.875  # 35000/40000 at full scale
    limit: int | None = None  # cap on states read from the export
    seed: int = 0


@dataclass
class TrainingLog:
    train_loss: list = field(default_factory=list)
    val_fidelity: list = field(default_factory=list)
    initial_val_fidelity: float = 0.0


def mean_fidelity(model: TauEstimator, data: Dataset) -> float:
    rhos = model.predict_rho(data.tensors)
    return float(np.mean([fidelity(r, s) for r, s in zip(rhos, data.states)]))


def train(cfg: TrainerConfig):
    """Returns (model, TrainingLog, validation Dataset)."""
    torch.manual_seed(cfg.seed)
    data = load_export(cfg.data_dir, limit=cfg.limit)
    if data.qubits != cfg.qubits:
        raise ValueError(f"export has {data.qubits} qubits, config says {cfg.qubits}")
    train_set, val_set = split(data, cfg.train_fraction)

    model = TauEstimator(cfg.qubits)
    log = TrainingLog(initial_val_fidelity=mean_fidelity(model, val_set))
    optimizer = torch.optim.Adagrad(model.parameters(), lr=cfg.learning_rate)
    loss_fn = torch.nn.MSELoss()

    x_train = torch.as_tensor(train_set.tensors).unsqueeze(1)
    y_train = torch.as_tensor(train_set.taus.astype(np.float32))
    order_rng = np.random.default_rng(cfg.seed)

    for _ in range(cfg.epochs):
        model.train()
        perm = torch.as_tensor(order_rng.permutation(len(train_set)))
        epoch_loss = 0.0
        for start in range(0, len(train_set), cfg.batch_size):
            idx = perm[start : start + cfg.batch_size]
            optimizer.zero_grad()
            pred = model(x_train[idx])
            loss = loss_fn(pred, y_train[idx])
            loss.backward()
            optimizer.step()
            epoch_loss += loss.detach().item() * len(idx)
        log.train_loss.append(epoch_loss / len(train_set))
        log.val_fidelity.append(mean_fidelity(model, val_set))
    return model, log, val_set
