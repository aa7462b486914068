"""Trainer command line: train on engine exports, predict point estimates."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .data import load_export
from .model import load_model, save_model
from .predict import predict_export
from .train import TrainerConfig, mean_fidelity, train


@click.group()
def main():
    """Convolutional point estimator for state tomography."""


@main.command("train")
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True, file_okay=False),
              help="Engine prior-sample export directory.")
@click.option("--qubits", type=int, required=True)
@click.option("--out", "out_path", default="model.pt", show_default=True)
@click.option("--learning-rate", type=float, default=0.01, show_default=True)
@click.option("--batch-size", type=int, default=100, show_default=True)
@click.option("--epochs", type=int, default=75, show_default=True)
@click.option("--train-fraction", type=float, default=0.875, show_default=True)
@click.option("--limit", type=int, default=None, help="Cap on states read from the export.")
@click.option("--seed", type=int, default=0, show_default=True)
def train_cmd(data_dir, qubits, out_path, learning_rate, batch_size, epochs,
              train_fraction, limit, seed):
    """Train and save weights plus a JSON history of validation fidelity."""
    try:
        cfg = TrainerConfig(
            qubits=qubits, data_dir=data_dir, learning_rate=learning_rate,
            batch_size=batch_size, epochs=epochs, train_fraction=train_fraction,
            limit=limit, seed=seed,
        )
        model, log, _ = train(cfg)
        save_model(model, out_path)
        history = {
            "initial_val_fidelity": log.initial_val_fidelity,
            "train_loss": log.train_loss,
            "val_fidelity": log.val_fidelity,
        }
        Path(out_path).with_suffix(".history.json").write_text(json.dumps(history))
        click.echo(
            f"trained {epochs} epochs; validation fidelity "
            f"{log.initial_val_fidelity:.4f} -> {log.val_fidelity[-1]:.4f}; wrote {out_path}"
        )
    except Exception as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        sys.exit(1)


@main.command("predict")
@click.option("--weights", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--pattern", default="*.shots.json", show_default=True)
@click.option("--out", "out_dir", default="predictions", show_default=True)
def predict_cmd(weights, data_dir, pattern, out_dir):
    """Emit interchange point estimates (with timing sidecars) for every
    dataset matching the pattern."""
    try:
        model = load_model(weights)
        paths = sorted(Path(data_dir).glob(pattern))
        if not paths:
            raise FileNotFoundError(f"no files matching {pattern} in {data_dir}")
        emitted = predict_export(model, paths, out_dir)
        click.echo(f"wrote {len(emitted)} estimates to {out_dir}")
    except Exception as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        sys.exit(1)


@main.command("evaluate")
@click.option("--weights", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--limit", type=int, default=None)
def evaluate_cmd(weights, data_dir, limit):
    """Mean fidelity of the model's estimates against an export's states."""
    try:
        model = load_model(weights)
        data = load_export(data_dir, limit=limit)
        click.echo(f"mean fidelity {mean_fidelity(model, data):.4f} over {len(data)} states")
    except Exception as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        sys.exit(1)


if __name__ == "__main__":
    main()
