"""Cholesky tau-vector codec and fast point estimators.

Tau layout
----------
A density matrix is encoded as the D^2 real coefficients of its lower
triangular Cholesky factor T, with rho = T T^dag / Tr(T T^dag).  The
coefficient order is: diagonal tau_0..tau_{D-1} first, then (real, imag)
pairs filling successive sub-diagonals top to bottom.  For D = 4:

    [ tau_0                                                ]
    [ tau_4  + i tau_5    tau_1                            ]
    [ tau_10 + i tau_11   tau_6  + i tau_7    tau_2        ]
    [ tau_14 + i tau_15   tau_12 + i tau_13   tau_8 + i tau_9   tau_3 ]

Decoding is total: any tau with a nonzero entry yields a physical matrix.
"""

from __future__ import annotations

import warnings
from functools import lru_cache
from itertools import product

import numpy as np

from .linalg import (
    DimensionMismatchError,
    PhysicalityError,
    hermitize,
    psd_project,
    _as_square,
)
from .interchange import load_density_matrix
from .measurement import MeasurementDataset

CHOLESKY_JITTER = 1e-12
LOAD_VIOLATION_ATOL = 1e-6

_PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@lru_cache(maxsize=8)
def _subdiagonal_slots(dim: int):
    """((row, col, pair_index) ...) for the off-diagonal tau slots."""
    slots = []
    pair = 0
    for k in range(1, dim):
        for i in range(dim - k):
            slots.append((i + k, i, dim + 2 * pair))
            pair += 1
    return tuple(slots)


def _tau_to_t(tau: np.ndarray, dim: int) -> np.ndarray:
    t = np.zeros((dim, dim), dtype=complex)
    t[np.diag_indices(dim)] = tau[:dim]
    for row, col, idx in _subdiagonal_slots(dim):
        t[row, col] = tau[idx] + 1j * tau[idx + 1]
    return t


def tau_to_rho(tau) -> np.ndarray:
    """Decode a tau vector to the density matrix T T^dag / Tr(T T^dag)."""
    tau = np.asarray(tau, dtype=float)
    dim = int(round(np.sqrt(tau.size)))
    if dim * dim != tau.size or dim < 1:
        raise DimensionMismatchError(f"tau length {tau.size} is not a square")
    t = _tau_to_t(tau, dim)
    rho = t @ t.conj().T
    tr = rho.trace().real
    if tr <= 0:
        raise PhysicalityError("all-zero tau vector has no decodable state")
    return rho / tr


def rho_to_tau(rho) -> np.ndarray:
    """Encode a physical density matrix as its tau vector.

    Rank-deficient input is regularized with a small diagonal jitter before
    factorization; the decode round-trip stays within 1e-8 trace distance.
    The Cholesky diagonal is non-negative, which makes the encoding unique.
    """
    rho = _as_square(rho, "rho")
    dim = rho.shape[0]
    t = np.linalg.cholesky(hermitize(rho) + CHOLESKY_JITTER * np.eye(dim))
    tau = np.empty(dim * dim)
    tau[:dim] = np.diagonal(t).real
    for row, col, idx in _subdiagonal_slots(dim):
        tau[idx] = t[row, col].real
        tau[idx + 1] = t[row, col].imag
    return tau


def _pauli_string_matrix(labels) -> np.ndarray:
    m = np.array([[1.0]], dtype=complex)
    for c in labels:
        m = np.kron(m, _PAULIS[c])
    return m


def baseline_estimate(dataset: MeasurementDataset) -> np.ndarray:
    """Linear-inversion point estimate: Pauli-string expectations from
    observed frequencies, assembled into (1/D) sum <P> P and projected to
    the physical set.

    Strings with no covering measurement default to expectation zero, so
    the output is the physical state consistent with the measured
    information and maximally noncommittal elsewhere.
    """
    if dataset.n_records == 0:
        raise ValueError("cannot estimate from an empty dataset")
    n = dataset.qubits
    counts = dataset.projector_counts().astype(float)
    total = counts.sum()
    if total <= 0:
        raise ValueError("dataset has no shots")

    # per-record joint projector decomposed back to per-qubit basis/outcome
    j = np.nonzero(counts)[0]
    weight = counts[j]
    digits = np.empty((j.size, n), dtype=np.int64)
    rem = j.copy()
    for k in range(n - 1, -1, -1):
        digits[:, k] = rem % 6
        rem //= 6
    bases = digits // 2
    signs = 1.0 - 2.0 * (digits % 2)

    dim = dataset.dim
    rho = np.eye(dim, dtype=complex)  # identity term, <I..I> = 1
    for string in product(range(4), repeat=n):
        if all(s == 0 for s in string):
            continue
        support = [k for k, s in enumerate(string) if s != 0]
        match = np.ones(j.size, dtype=bool)
        for k in support:
            match &= bases[:, k] == string[k] - 1
        covered = weight[match].sum()
        if covered <= 0:
            continue
        sign = np.prod(signs[match][:, [k for k in support]], axis=1)
        expectation = float((weight[match] * sign).sum() / covered)
        labels = "".join("IXYZ"[s] for s in string)
        rho += expectation * _pauli_string_matrix(labels)
    return psd_project(rho / dim)


def load_rho_ml(path) -> np.ndarray:
    """Load a density matrix from an interchange file, sanitizing
    float-level physicality violations and rejecting anything worse.

    Violations (Hermiticity deviation, trace error, negative eigenvalue
    magnitude) up to 1e-6 are repaired with psd_project; beyond that the
    file is rejected with a report of the worst violation.
    """
    rho = load_density_matrix(path)
    dim = rho.shape[0]
    if dim & (dim - 1):
        warnings.warn(f"{path}: dimension {dim} is not a power of two", stacklevel=2)
    herm = float(np.abs(rho - rho.conj().T).max())
    tr = float(abs(rho.trace() - 1.0))
    lam_min = float(np.linalg.eigvalsh(hermitize(rho))[0])
    worst = max(herm, tr, -lam_min)
    if worst > LOAD_VIOLATION_ATOL:
        raise PhysicalityError(
            f"{path}: physicality violation {worst:.3e} exceeds {LOAD_VIOLATION_ATOL:.0e} "
            f"(hermiticity {herm:.3e}, trace {tr:.3e}, min eigenvalue {lam_min:.3e})"
        )
    return psd_project(rho)
