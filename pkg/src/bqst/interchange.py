"""JSON interchange formats shared by the engine, the CLI, and external
point estimators.

Density matrix:  { "dim": D, "re": [[...]], "im": [[...]] }   row-major,
computational tensor-product basis.

Tau vector:      { "dim": D, "tau": [ ... D*D reals ... ] }

These loaders perform structural validation only; physicality checks live
with the consumers (see ``estimators.load_rho_ml``).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import DimensionMismatchError


class MalformedFileError(ValueError):
    """File does not conform to the interchange schema."""


def density_matrix_to_obj(rho: np.ndarray) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {
        "dim": int(rho.shape[0]),
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }


def density_matrix_from_obj(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFileError(f"bad density-matrix object: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise MalformedFileError(
            f"matrix shape {re.shape}/{im.shape} inconsistent with dim={dim}"
        )
    return re + 1j * im


def save_density_matrix(path, rho: np.ndarray) -> None:
    Path(path).write_text(json.dumps(density_matrix_to_obj(rho)))


def load_density_matrix(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"{path}: invalid JSON: {exc}") from exc
    return density_matrix_from_obj(obj)


def tau_to_obj(tau: np.ndarray) -> dict:
    tau = np.asarray(tau, dtype=float)
    dim = int(round(np.sqrt(tau.size)))
    if dim * dim != tau.size:
        raise DimensionMismatchError(f"tau length {tau.size} is not a perfect square")
    return {"dim": dim, "tau": tau.tolist()}


def save_tau(path, tau: np.ndarray) -> None:
    Path(path).write_text(json.dumps(tau_to_obj(tau)))


def load_tau(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
        dim = int(obj["dim"])
        tau = np.asarray(obj["tau"], dtype=float)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedFileError(f"{path}: bad tau file: {exc}") from exc
    if tau.shape != (dim * dim,):
        raise MalformedFileError(f"{path}: tau length {tau.size} != dim^2 = {dim * dim}")
    return tau
