"""File-format conventions shared with the estimation engine.

The trainer talks to the engine exclusively through files, so the layout
rules are restated here and pinned by golden fixtures generated with the
engine:

* Per qubit, projectors are ordered basis-major then outcome with bases
  (X, Y, Z) and outcomes (+, -): X+ X- Y+ Y- Z+ Z-.  The joint index is
  lexicographic with qubit 1 most significant, and the frequency tensor is
  the C-order reshape of the length-6^n frequency vector into the fixed
  shape for the qubit count.
* Tau vectors hold the lower-triangular Cholesky factor of the density
  matrix: diagonal entries first, then (real, imag) pairs filling
  successive sub-diagonals top to bottom; rho = T T^dag / Tr(T T^dag).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FREQ_SHAPES = {1: (2, 3), 2: (6, 6), 3: (6, 36), 4: (36, 36)}

_BASIS_INDEX = {"X": 0, "Y": 1, "Z": 2}


def frequency_tensor(dataset_obj: dict) -> np.ndarray:
    """Relative projector frequencies for a dataset JSON object."""
    qubits = int(dataset_obj["qubits"])
    if qubits not in FREQ_SHAPES:
        raise ValueError(f"frequency tensor defined for 1..4 qubits, got {qubits}")
    counted = dataset_obj["mode"] == "counted"
    counts = np.zeros(6**qubits)
    weights = 6 ** np.arange(qubits - 1, -1, -1, dtype=np.int64)
    for rec in dataset_obj["records"]:
        p = np.array(
            [2 * _BASIS_INDEX[b] + int(o) for b, o in zip(rec["bases"], rec["outcomes"])],
            dtype=np.int64,
        )
        counts[int(p @ weights)] += rec["count"] if counted else 1
    total = counts.sum()
    freq = counts / total if total > 0 else counts
    return freq.reshape(FREQ_SHAPES[qubits])


def load_frequency_tensor(path) -> np.ndarray:
    return frequency_tensor(json.loads(Path(path).read_text()))


def tau_to_rho(tau: np.ndarray) -> np.ndarray:
    """Decode a tau vector to a density matrix.

    Total for any finite input: an all-zero tau decodes to the maximally
    mixed state so predictions are physical for arbitrary weights.
    """
    tau = np.asarray(tau, dtype=float)
    dim = int(round(np.sqrt(tau.size)))
    if dim * dim != tau.size:
        raise ValueError(f"tau length {tau.size} is not a perfect square")
    t = np.zeros((dim, dim), dtype=complex)
    t[np.diag_indices(dim)] = tau[:dim]
    idx = dim
    for k in range(1, dim):
        for i in range(dim - k):
            t[i + k, i] = tau[idx] + 1j * tau[idx + 1]
            idx += 2
    rho = t @ t.conj().T
    tr = rho.trace().real
    if tr <= 0.0:
        return np.eye(dim, dtype=complex) / dim
    return rho / tr


def load_tau(path) -> np.ndarray:
    obj = json.loads(Path(path).read_text())
    tau = np.asarray(obj["tau"], dtype=float)
    if tau.shape != (int(obj["dim"]) ** 2,):
        raise ValueError(f"{path}: tau length inconsistent with dim")
    return tau


def density_matrix_to_obj(rho: np.ndarray) -> dict:
    return {"dim": int(rho.shape[0]), "re": rho.real.tolist(), "im": rho.imag.tolist()}


def load_density_matrix(path) -> np.ndarray:
    obj = json.loads(Path(path).read_text())
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    return re + 1j * im


def save_density_matrix(path, rho: np.ndarray) -> None:
    Path(path).write_text(json.dumps(density_matrix_to_obj(rho)))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|Tr sqrt(sqrt(a) b sqrt(a))|^2 with eigenvalue clamping."""
    lam, vec = np.linalg.eigh(0.5 * (a + a.conj().T))
    root = (vec * np.sqrt(np.clip(lam, 0.0, None))) @ vec.conj().T
    inner = root @ b @ root
    lam2 = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    val = float(np.sqrt(np.clip(lam2, 0.0, None)).sum() ** 2)
    return min(max(val, 0.0), 1.0)
