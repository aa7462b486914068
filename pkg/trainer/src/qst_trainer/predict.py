"""Batch inference: dataset files in, interchange point estimates out.

Output naming matches what the engine's fidelity-versus-time driver
expects from a point-estimate directory: <stem>.rho_ml.json plus a
<stem>.rho_ml.time.json sidecar recording per-state inference seconds.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

from .layout import load_frequency_tensor, save_density_matrix
from .model import TauEstimator


def _stem(name: str) -> str:
    for suffix in (".shots.json", ".counts36.json", ".json"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name


def predict_export(model: TauEstimator, dataset_paths, out_dir) -> list:
    """One interchange file (+ timing sidecar) per input dataset, in input
    order.  Returns the emitted state-file paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    emitted = []
    for path in dataset_paths:
        path = Path(path)
        tensor = load_frequency_tensor(path)
        if tensor.shape != model.input_shape:
            raise ValueError(
                f"{path}: frequency-tensor axes {tensor.shape} do not match "
                f"the {model.qubits}-qubit model layout {model.input_shape}"
            )
        t0 = time.perf_counter()
        rho = model.predict_rho(tensor[None, ...])[0]
        seconds = time.perf_counter() - t0
        stem = _stem(path.name)
        rho_path = out_dir / f"{stem}.rho_ml.json"
        save_density_matrix(rho_path, rho)
        (out_dir / f"{stem}.rho_ml.time.json").write_text(
            json.dumps({"state_id": stem, "inference_s": seconds})
        )
        emitted.append(rho_path)
    return emitted
