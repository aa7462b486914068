"""Pauli projector catalog, measurement simulation, dataset ingestion, and
the Born-rule log-likelihood.

Canonical projector enumeration
-------------------------------
Per qubit, the six Pauli eigenstate projectors are ordered basis-major then
outcome, with bases ordered (X, Y, Z) and outcomes (+, -):

    0: X+   1: X-   2: Y+   3: Y-   4: Z+   5: Z-

For n qubits the joint projector index is the lexicographic combination
J = sum_k p_k * 6**(n-1-k) with qubit 1 most significant.  The frequency
tensor is the C-order reshape of the length-6**n frequency vector into the
fixed per-qubit-count shape (qubit 1 indexes rows; remaining qubits are
flattened into columns):

    1 qubit: (2, 3)    2 qubits: (6, 6)    3 qubits: (6, 36)    4 qubits: (36, 36)

This single bijection is shared with any external estimator consuming
dataset files, so both sides agree on cell meanings bit-exactly.

Dataset file format (JSON, UTF-8):

    { "qubits": n, "mode": "single_shot" | "counted",
      "records": [ { "bases": "XZ..", "outcomes": "01..", "count": k } ] }

with ``count`` omitted in single-shot mode and outcomes encoded + -> "0",
- -> "1".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .linalg import DimensionMismatchError, _as_square

BASIS_LABELS = "XYZ"

# Single-qubit eigenstates in canonical projector order (X+, X-, Y+, Y-, Z+, Z-).
_SQRT2 = np.sqrt(2.0)
EIGENSTATES = np.array(
    [
        [1.0, 1.0],
        [1.0, -1.0],
        [1.0, 1.0j],
        [1.0, -1.0j],
        [_SQRT2, 0.0],
        [0.0, _SQRT2],
    ],
    dtype=complex,
) / _SQRT2

FREQ_SHAPES = {1: (2, 3), 2: (6, 6), 3: (6, 36), 4: (36, 36)}

PROB_CLAMP = 1e-12


@dataclass(frozen=True)
class PauliSetting:
    """One projective measurement record: per-qubit basis labels and
    outcome bits (+ -> '0', - -> '1')."""

    bases: str
    outcomes: str

    def __post_init__(self):
        if len(self.bases) != len(self.outcomes) or not self.bases:
            raise ValueError(f"inconsistent setting {self.bases!r}/{self.outcomes!r}")
        if any(c not in BASIS_LABELS for c in self.bases):
            raise ValueError(f"invalid basis label in {self.bases!r}")
        if any(c not in "01" for c in self.outcomes):
            raise ValueError(f"invalid outcome bit in {self.outcomes!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.bases)

    def projector_indices(self) -> np.ndarray:
        b = np.array([BASIS_LABELS.index(c) for c in self.bases], dtype=np.uint8)
        o = np.array([int(c) for c in self.outcomes], dtype=np.uint8)
        return 2 * b + o

    def state(self) -> np.ndarray:
        return setting_to_state(self)


def setting_to_state(setting: PauliSetting) -> np.ndarray:
    """Tensor-product eigenstate for the setting, qubit 1 leftmost."""
    psi = np.array([1.0], dtype=complex)
    for p in setting.projector_indices():
        psi = np.kron(psi, EIGENSTATES[p])
    return psi


@lru_cache(maxsize=8)
def _projector_states(n: int) -> np.ndarray:
    """(6**n, 2**n) matrix of all joint eigenstates in canonical order."""
    states = EIGENSTATES
    for _ in range(n - 1):
        states = (states[:, None, :, None] * EIGENSTATES[None, :, None, :]).reshape(
            states.shape[0] * 6, states.shape[1] * 2
        )
    return states


def born_probabilities(rho: np.ndarray, n: int) -> np.ndarray:
    """Born probabilities <psi_J|rho|psi_J> for all 6**n joint projectors."""
    psi = _projector_states(n)
    return np.einsum("jd,de,je->j", psi.conj(), rho, psi).real


def _qubit_count(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise DimensionMismatchError(f"dimension {dim} is not a power of two")
    return n


class MeasurementDataset:
    """Immutable collection of projective measurement records.

    ``bases`` and ``outcomes`` are (M, n) uint8 arrays (basis 0/1/2 for
    X/Y/Z, outcome bit 0/1).  ``counts`` is None in single-shot mode and a
    non-negative (M,) int64 array in counted mode.  Total shots is the
    number of records (single-shot) or the sum of counts (counted).
    """

    def __init__(self, qubits: int, bases: np.ndarray, outcomes: np.ndarray, counts=None):
        if qubits < 1:
            raise ValueError(f"qubits must be >= 1, got {qubits}")
        bases = np.asarray(bases, dtype=np.uint8).reshape(-1, qubits)
        outcomes = np.asarray(outcomes, dtype=np.uint8).reshape(-1, qubits)
        if bases.shape != outcomes.shape:
            raise ValueError("bases/outcomes shape mismatch")
        if bases.size and (bases.max() > 2 or outcomes.max() > 1):
            raise ValueError("basis indices must be in 0..2, outcomes in 0..1")
        if counts is not None:
            counts = np.asarray(counts, dtype=np.int64).reshape(-1)
            if counts.shape[0] != bases.shape[0]:
                raise ValueError("counts length mismatch")
            if np.any(counts < 0):
                raise ValueError("counts must be non-negative")
        self.qubits = int(qubits)
        self.bases = bases
        self.outcomes = outcomes
        self.counts = counts
        self.bases.setflags(write=False)
        self.outcomes.setflags(write=False)
        if counts is not None:
            self.counts.setflags(write=False)
        self._projector_counts = None

    @property
    def mode(self) -> str:
        return "single_shot" if self.counts is None else "counted"

    @property
    def dim(self) -> int:
        return 2**self.qubits

    @property
    def n_records(self) -> int:
        return self.bases.shape[0]

    @property
    def total_shots(self) -> int:
        if self.counts is None:
            return self.n_records
        return int(self.counts.sum())

    def records(self):
        """Iterate (PauliSetting, count) pairs; count is 1 in single-shot mode."""
        for i in range(self.n_records):
            setting = PauliSetting(
                "".join(BASIS_LABELS[b] for b in self.bases[i]),
                "".join(str(int(o)) for o in self.outcomes[i]),
            )
            yield setting, 1 if self.counts is None else int(self.counts[i])

    @classmethod
    def from_records(cls, qubits: int, records, counted: bool = False) -> "MeasurementDataset":
        """Build from an iterable of PauliSetting (single-shot) or
        (PauliSetting, count) pairs (counted)."""
        bases, outcomes, counts = [], [], []
        for rec in records:
            setting, count = rec if counted else (rec, 1)
            if setting.n_qubits != qubits:
                raise DimensionMismatchError(
                    f"setting on {setting.n_qubits} qubits in a {qubits}-qubit dataset"
                )
            bases.append([BASIS_LABELS.index(c) for c in setting.bases])
            outcomes.append([int(c) for c in setting.outcomes])
            counts.append(count)
        bases = np.asarray(bases, dtype=np.uint8).reshape(-1, qubits)
        outcomes = np.asarray(outcomes, dtype=np.uint8).reshape(-1, qubits)
        return cls(qubits, bases, outcomes, np.asarray(counts, dtype=np.int64) if counted else None)

    def projector_joint_indices(self) -> np.ndarray:
        """Canonical joint projector index J for every record."""
        p = 2 * self.bases.astype(np.int64) + self.outcomes
        weights = 6 ** np.arange(self.qubits - 1, -1, -1, dtype=np.int64)
        return p @ weights

    def projector_counts(self) -> np.ndarray:
        """(6**n,) shot counts aggregated per joint projector."""
        if self._projector_counts is None:
            j = self.projector_joint_indices()
            w = None if self.counts is None else self.counts
            self._projector_counts = np.bincount(j, weights=w, minlength=6**self.qubits)
        return self._projector_counts

    # --- file format ---------------------------------------------------

    def to_obj(self) -> dict:
        records = []
        for i in range(self.n_records):
            rec = {
                "bases": "".join(BASIS_LABELS[b] for b in self.bases[i]),
                "outcomes": "".join(str(int(o)) for o in self.outcomes[i]),
            }
            if self.counts is not None:
                rec["count"] = int(self.counts[i])
            records.append(rec)
        return {"qubits": self.qubits, "mode": self.mode, "records": records}

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_obj()))

    @classmethod
    def from_obj(cls, obj: dict) -> "MeasurementDataset":
        try:
            qubits = int(obj["qubits"])
            mode = obj["mode"]
            raw = obj["records"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad dataset object: {exc}") from exc
        if mode not in ("single_shot", "counted"):
            raise ValueError(f"unknown dataset mode {mode!r}")
        counted = mode == "counted"
        records = []
        for rec in raw:
            setting = PauliSetting(rec["bases"], rec["outcomes"])
            records.append((setting, int(rec["count"])) if counted else setting)
        return cls.from_records(qubits, records, counted=counted)

    @classmethod
    def load(cls, path) -> "MeasurementDataset":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_obj(obj)


def concat_datasets(a: MeasurementDataset, b: MeasurementDataset) -> MeasurementDataset:
    """Concatenate two datasets of the same qubit count and mode."""
    if a.qubits != b.qubits:
        raise DimensionMismatchError("qubit count mismatch")
    if a.mode != b.mode:
        raise ValueError("mode mismatch")
    counts = None if a.counts is None else np.concatenate([a.counts, b.counts])
    return MeasurementDataset(
        a.qubits,
        np.concatenate([a.bases, b.bases]),
        np.concatenate([a.outcomes, b.outcomes]),
        counts,
    )


def aggregated(dataset: MeasurementDataset) -> MeasurementDataset:
    """Counted dataset with one record per occupied joint projector, in
    canonical order.  Lossless for the likelihood and frequency tensor."""
    counts = dataset.projector_counts().astype(np.int64)
    occupied = np.nonzero(counts)[0]
    n = dataset.qubits
    digits = np.empty((occupied.size, n), dtype=np.int64)
    rem = occupied
    for k in range(n - 1, -1, -1):
        digits[:, k] = rem % 6
        rem = rem // 6
    return MeasurementDataset(n, (digits // 2), (digits % 2), counts[occupied])


def simulate_shots(rho: np.ndarray, n_shots: int, rng: np.random.Generator) -> MeasurementDataset:
    """Single-shot dataset: each shot draws a uniformly random basis
    combination (3**n choices) and samples the outcome from the Born rule."""
    rho = _as_square(rho, "rho")
    n = _qubit_count(rho.shape[0])
    if n_shots < 0:
        raise ValueError(f"n_shots must be >= 0, got {n_shots}")
    if n_shots == 0:
        return MeasurementDataset(n, np.empty((0, n)), np.empty((0, n)))

    probs = np.clip(born_probabilities(rho, n), 0.0, None)
    # per basis combination c and outcome word o: row c of the (3**n, 2**n)
    # table indexes joint projector J(c, o)
    combos = 3**n
    words = 2**n
    basis_digits = np.empty((combos, n), dtype=np.int64)
    rem = np.arange(combos)
    for k in range(n - 1, -1, -1):
        basis_digits[:, k] = rem % 3
        rem = rem // 3
    outcome_bits = (np.arange(words)[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    p_q = 2 * basis_digits[:, None, :] + outcome_bits[None, :, :]
    weights = 6 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    joint = p_q @ weights
    table = probs[joint]
    table /= table.sum(axis=1, keepdims=True)

    chosen = rng.integers(0, combos, size=n_shots)
    u = rng.random(n_shots)
    cum = np.cumsum(table, axis=1)
    outcome_word = (u[:, None] > cum[chosen]).sum(axis=1)

    bases = basis_digits[chosen].astype(np.uint8)
    outcomes = outcome_bits[outcome_word].astype(np.uint8)
    return MeasurementDataset(n, bases, outcomes)


def simulate_counts_36(
    rho: np.ndarray, shots_per_setting: int, rng: np.random.Generator
) -> MeasurementDataset:
    """Two-qubit counted dataset: an independent binomial count for each of
    the 36 tensor-product Pauli eigenstate projectors."""
    rho = _as_square(rho, "rho")
    if rho.shape[0] != 4:
        raise DimensionMismatchError(f"expected a two-qubit state, got dim {rho.shape[0]}")
    if shots_per_setting < 0:
        raise ValueError("shots_per_setting must be >= 0")
    probs = np.clip(born_probabilities(rho, 2), 0.0, 1.0)
    counts = rng.binomial(shots_per_setting, probs)
    j = np.arange(36)
    p1, p2 = j // 6, j % 6
    bases = np.stack([p1 // 2, p2 // 2], axis=1).astype(np.uint8)
    outcomes = np.stack([p1 % 2, p2 % 2], axis=1).astype(np.uint8)
    return MeasurementDataset(2, bases, outcomes, counts.astype(np.int64))


class CompiledLikelihood:
    """Dataset folded to unique projectors for fast repeated evaluation."""

    def __init__(self, dataset: MeasurementDataset, clamp: float = PROB_CLAMP):
        counts = dataset.projector_counts()
        occupied = np.nonzero(counts)[0]
        self.psi = _projector_states(dataset.qubits)[occupied]
        self.counts = counts[occupied]
        self.clamp = clamp
        self.dim = dataset.dim

    def __call__(self, rho: np.ndarray) -> float:
        if self.counts.size == 0:
            return 0.0
        p = np.einsum("sd,de,se->s", self.psi.conj(), rho, self.psi).real
        return float(self.counts @ np.log(np.maximum(p, self.clamp)))


def log_likelihood(rho: np.ndarray, dataset: MeasurementDataset, clamp: float = PROB_CLAMP) -> float:
    """sum_m n_m log <psi_m|rho|psi_m>, probabilities clamped below at
    ``clamp`` so rank-deficient states stay finite (and heavily penalized)."""
    rho = _as_square(rho, "rho")
    if rho.shape[0] != dataset.dim:
        raise DimensionMismatchError(
            f"state dim {rho.shape[0]} != dataset dim {dataset.dim}"
        )
    return CompiledLikelihood(dataset, clamp)(rho)


def build_frequency_tensor(dataset: MeasurementDataset) -> np.ndarray:
    """Observed relative frequency of every joint projector, reshaped to
    the fixed per-qubit-count layout (see module docstring).

    An empty dataset gives an all-zero tensor.
    """
    n = dataset.qubits
    if n not in FREQ_SHAPES:
        raise DimensionMismatchError(f"frequency tensor defined for 1..4 qubits, got {n}")
    counts = dataset.projector_counts()
    total = counts.sum()
    freq = counts / total if total > 0 else counts
    return freq.reshape(FREQ_SHAPES[n])
