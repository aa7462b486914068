"""Gaussian-reference parameterizations for pCN sampling.

Each prior is a deterministic map from a parameter vector w, whose
reference measure is i.i.d. standard normal in every coordinate, onto a
physical density matrix rho(w).  Pushing standard-normal draws through a
map must reproduce the matching direct sampler in :mod:`bqst.ensembles`;
that equivalence is what licenses the pCN proposal, whose acceptance ratio
sees only the likelihood.

Complex parameters occupy consecutive (real, imag) slots.  Gamma-distributed
mixture weights are realized as inverse-CDF transforms of standard normals,
y_i = GammaInvCDF(alpha_i, NormalCDF(v_i)): the transform is monotone and
smooth, keeps the reference measure Gaussian, and the normalized weights
remain exactly Dirichlet(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincinv, ndtr

from .ensembles import BiasedDirichletSpec, resolve_biased_alphas
from .linalg import (
    DimensionMismatchError,
    PhysicalityError,
    psd_project,
    _as_square,
)

# Saturation bounds for the normal-CDF bridge: |v| beyond ~8 hits these.
_CDF_FLOOR = 1e-300
_CDF_CEIL = 1.0 - 1e-16
_GAMMA_FLOOR = 1e-300

PRIOR_NAMES = ("bures", "ml_biased", "ma")


def _complex_from_pairs(x: np.ndarray) -> np.ndarray:
    if x.size % 2:
        raise DimensionMismatchError("odd number of slots for complex parameters")
    return x[0::2] + 1j * x[1::2]


def _gamma_from_normal(v: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    q = np.clip(ndtr(v), _CDF_FLOOR, _CDF_CEIL)
    y = gammaincinv(alpha, q)
    # tiny alpha can underflow the inverse CDF to exactly zero
    return np.maximum(y, _GAMMA_FLOOR)


def _pure_projectors(z: np.ndarray) -> np.ndarray:
    """(K, D, D) projectors z_i z_i^dag / |z_i|^2 for rows of z."""
    norms = np.einsum("kd,kd->k", z.conj(), z).real
    if np.any(norms <= 0):
        raise PhysicalityError("zero-norm state parameter block")
    return np.einsum("kd,ke->kde", z, z.conj()) / norms[:, None, None]


@dataclass(frozen=True, eq=False)
class PriorModel:
    """Immutable prior description: dimension, parameter count, and the
    hyperparameters of the map.  Shareable across workers."""

    name: str
    dim: int
    rho_ml: np.ndarray | None = None
    mu: float | None = None
    alpha0: float | None = None
    K: int | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.name not in PRIOR_NAMES:
            raise ValueError(f"unknown prior {self.name!r}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    @classmethod
    def bures(cls, dim: int) -> "PriorModel":
        return cls("bures", dim)

    @classmethod
    def ml_biased(
        cls, dim: int, rho_ml: np.ndarray, mu: float, alpha0: float, K: int | None = None
    ) -> "PriorModel":
        """Mixture prior biased toward a supplied point estimate.

        K defaults to dim + 1 so the pure-state tail spans the full space
        and samples are full rank with high probability.  rho_ml is
        sanitized with psd_project, so estimates that are physical only to
        float precision are accepted.
        """
        rho_ml = psd_project(_as_square(rho_ml, "rho_ml"))
        if rho_ml.shape[0] != dim:
            raise DimensionMismatchError(
                f"rho_ml dim {rho_ml.shape[0]} != model dim {dim}"
            )
        K = dim + 1 if K is None else K
        spec = BiasedDirichletSpec(K=K, mu=mu, alpha0=alpha0)  # validates
        return cls("ml_biased", dim, rho_ml=rho_ml, mu=spec.mu, alpha0=spec.alpha0, K=K)

    @classmethod
    def ma(cls, dim: int, K: int, alpha: float) -> "PriorModel":
        if K < 1:
            raise ValueError(f"K must be >= 1, got {K}")
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        return cls("ma", dim, K=K, alpha=alpha)

    @property
    def param_count(self) -> int:
        if self.name == "bures":
            return 4 * self.dim**2
        if self.name == "ml_biased":
            return self.K + 2 * self.dim * (self.K - 1)
        return self.K + 2 * self.dim * self.K

    def alphas(self) -> np.ndarray:
        if self.name == "ml_biased":
            spec = BiasedDirichletSpec(K=self.K, mu=self.mu, alpha0=self.alpha0)
            return resolve_biased_alphas(spec).as_array()
        if self.name == "ma":
            return np.full(self.K, self.alpha)
        raise ValueError(f"{self.name} prior has no concentration parameters")

    def map(self, w: np.ndarray) -> np.ndarray:
        if self.name == "bures":
            return map_bures(w, self.dim)
        if self.name == "ml_biased":
            return map_ml_biased(w, self)
        return map_ma(w, self)


def map_bures(w: np.ndarray, dim: int) -> np.ndarray:
    """Bures-ensemble map: the first 2 D^2 slots fill a Ginibre matrix G,
    the rest fill a second Ginibre matrix fed through phase-fixed QR to
    give a Haar unitary U; returns the trace-normalized
    (1+U) G G^dag (1+U^dag)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (4 * dim**2,):
        raise DimensionMismatchError(
            f"bures map at dim {dim} needs {4 * dim**2} parameters, got {w.shape}"
        )
    half = 2 * dim**2
    g = (_complex_from_pairs(w[:half]) / np.sqrt(2.0)).reshape(dim, dim)
    g2 = (_complex_from_pairs(w[half:]) / np.sqrt(2.0)).reshape(dim, dim)
    q, r = np.linalg.qr(g2)
    d = np.diagonal(r)
    mag = np.abs(d)
    ph = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    u = q * ph[None, :]
    a = (np.eye(dim) + u) @ g
    rho = a @ a.conj().T
    tr = rho.trace().real
    if tr <= 0:
        raise PhysicalityError("bures map hit a zero-trace point")
    return rho / tr


def map_ml_biased(w: np.ndarray, model: PriorModel) -> np.ndarray:
    """Point-estimate-biased mixture map: K weight drivers (gamma via the
    normal-CDF bridge, concentrations from the model's (mu, alpha0)), then
    K-1 complex vectors whose normalized projectors form the pure tail."""
    if model.name != "ml_biased":
        raise ValueError(f"expected an ml_biased model, got {model.name}")
    w = np.asarray(w, dtype=float)
    if w.shape != (model.param_count,):
        raise DimensionMismatchError(
            f"ml_biased map needs {model.param_count} parameters, got {w.shape}"
        )
    K, dim = model.K, model.dim
    y = _gamma_from_normal(w[:K], model.alphas())
    x = y / y.sum()
    z = _complex_from_pairs(w[K:]).reshape(K - 1, dim)
    rho = np.einsum("k,kde->de", x[1:], _pure_projectors(z))
    rho += x[0] * model.rho_ml
    return rho


def map_ma(w: np.ndarray, model: PriorModel) -> np.ndarray:
    """Symmetric mixture map: identical machinery to the biased map but
    with all K components Haar pure states."""
    if model.name != "ma":
        raise ValueError(f"expected an ma model, got {model.name}")
    w = np.asarray(w, dtype=float)
    if w.shape != (model.param_count,):
        raise DimensionMismatchError(
            f"ma map needs {model.param_count} parameters, got {w.shape}"
        )
    K, dim = model.K, model.dim
    y = _gamma_from_normal(w[:K], model.alphas())
    x = y / y.sum()
    z = _complex_from_pairs(w[K:]).reshape(K, dim)
    return np.einsum("k,kde->de", x, _pure_projectors(z))
