"""Random-state ensembles: Ginibre matrices, Haar unitaries, Bures states,
Dirichlet simplex vectors, and Dirichlet-weighted pure-state mixtures
(symmetric and biased toward a supplied point estimate).

Every sampler takes a ``numpy.random.Generator`` (see :mod:`bqst.rng`) and
accepts an optional ``size`` for batched draws, returning a stacked array
with the batch axis first.  Single draws return unstacked arrays.

Conventions:
  * Complex standard normal entries are (a + ib)/sqrt(2) with a, b unit
    normals, so E|entry|^2 = 1.
  * Haar unitaries come from QR of a Ginibre matrix with each column
    rescaled by the phase of the matching diagonal entry of R; without
    that phase fix QR is not Haar distributed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimensionMismatchError, PhysicalityError, _as_square


@dataclass(frozen=True)
class DirichletParams:
    """Concentration parameters alpha_1..alpha_K, all >= 0, not all zero."""

    alpha: tuple

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        object.__setattr__(self, "alpha", tuple(alpha.tolist()))
        if alpha.ndim != 1 or alpha.size < 2:
            raise ValueError(f"need K >= 2 concentration parameters, got {alpha.shape}")
        if np.any(alpha < 0):
            raise ValueError("concentration parameters must be non-negative")
        if not np.any(alpha > 0):
            raise ValueError("at least one concentration parameter must be positive")

    @property
    def K(self) -> int:
        return len(self.alpha)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)


@dataclass(frozen=True)
class BiasedDirichletSpec:
    """Two-level concentration profile (alpha_a, alpha_b, ..., alpha_b)
    parameterized by the bias ratio mu = alpha_a/alpha_b and the total
    alpha0 = alpha_a + (K-1) alpha_b."""

    K: int
    mu: float
    alpha0: float

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.alpha0 > 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")


def resolve_biased_alphas(spec: BiasedDirichletSpec) -> DirichletParams:
    """Solve alpha0 = alpha_b (mu + K - 1) for the concentration vector
    (alpha_a, alpha_b, ..., alpha_b)."""
    alpha_b = spec.alpha0 / (spec.mu + spec.K - 1)
    alpha_a = spec.mu * alpha_b
    return DirichletParams((alpha_a,) + (alpha_b,) * (spec.K - 1))


def _batch(size):
    # normalize size=None (single draw) vs int batches
    return (1 if size is None else int(size)), size is None


def sample_ginibre(dim: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """dim x dim matrix of i.i.d. complex standard normal entries."""
    if dim < 1:
        raise DimensionMismatchError(f"dim must be >= 1, got {dim}")
    n, single = _batch(size)
    block = rng.standard_normal((n, dim, dim, 2))
    g = (block[..., 0] + 1j * block[..., 1]) / np.sqrt(2.0)
    return g[0] if single else g


def sample_haar_unitary(dim: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    n, single = _batch(size)
    g = sample_ginibre(dim, rng, size=n)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    mag = np.abs(d)
    ph = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    u = q * ph[:, None, :]
    return u[0] if single else u


def sample_bures(dim: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Bures-ensemble state (1+U) G G^dag (1+U^dag), trace-normalized,
    with independent Ginibre G and Haar U."""
    n, single = _batch(size)
    g = sample_ginibre(dim, rng, size=n)
    u = sample_haar_unitary(dim, rng, size=n)
    a = (np.eye(dim) + u) @ g
    rho = a @ np.conj(np.swapaxes(a, -1, -2))
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    if np.any(tr <= 0):
        raise PhysicalityError("degenerate Bures draw with non-positive trace")
    rho /= tr[:, None, None]
    return rho[0] if single else rho


def sample_dirichlet(params: DirichletParams, rng: np.random.Generator, size=None) -> np.ndarray:
    """Simplex vector via the gamma-normalization construction.

    Components with alpha_i = 0 are exactly zero.
    """
    n, single = _batch(size)
    alpha = params.as_array()
    y = rng.standard_gamma(np.broadcast_to(alpha, (n, alpha.size)))
    total = y.sum(axis=1)
    # guard against simultaneous underflow at very small alpha
    bad = total <= 0.0
    if np.any(bad):
        y[bad] = alpha / alpha.sum()
        total[bad] = 1.0
    x = y / total[:, None]
    return x[0] if single else x


def _haar_states(dim: int, count: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, count, dim) stack of Haar-random pure state vectors."""
    block = rng.standard_normal((size, count, dim, 2))
    z = block[..., 0] + 1j * block[..., 1]
    norms = np.linalg.norm(z, axis=-1, keepdims=True)
    # zero-norm draws are measure zero; regenerating would desync streams
    if np.any(norms == 0):
        raise PhysicalityError("degenerate zero-norm state draw")
    return z / norms


def _mix(weights: np.ndarray, states: np.ndarray) -> np.ndarray:
    """rho = sum_i w_i |psi_i><psi_i| over a batch."""
    return np.einsum("nk,nkd,nke->nde", weights, states, states.conj())


def sample_ma(dim: int, K: int, alpha: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Dirichlet-weighted mixture of K Haar-random pure states with
    symmetric concentration alpha."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    n, single = _batch(size)
    if K == 1:
        x = np.ones((n, 1))
    else:
        x = sample_dirichlet(DirichletParams((alpha,) * K), rng, size=n)
    states = _haar_states(dim, K, rng, n)
    rho = _mix(x, states)
    return rho[0] if single else rho


def sample_ml_biased(
    rho_ml: np.ndarray,
    spec: BiasedDirichletSpec,
    rng: np.random.Generator,
    size=None,
) -> np.ndarray:
    """Convex mixture x_1 rho_ml + sum_{i>=2} x_i |psi_i><psi_i| with
    x ~ Dirichlet(resolve_biased_alphas(spec)) and Haar-random psi_i.

    Weight mu biases the mixture toward rho_ml; mu -> 0 recovers a
    uniform-mean ensemble, mu -> inf concentrates at rho_ml.
    """
    rho_ml = _as_square(rho_ml, "rho_ml")
    dim = rho_ml.shape[0]
    n, single = _batch(size)
    x = sample_dirichlet(resolve_biased_alphas(spec), rng, size=n)
    states = _haar_states(dim, spec.K - 1, rng, n)
    rho = _mix(x[:, 1:], states)
    rho += x[:, 0, None, None] * rho_ml
    return rho[0] if single else rho
