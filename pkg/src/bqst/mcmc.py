"""Preconditioned Crank-Nicolson Metropolis sampling over prior parameter
space, with running-mean state estimation at checkpoints.

The proposal w* = sqrt(1 - beta^2) w + beta xi (xi standard normal) is
reversible with respect to the standard-normal reference measure, so the
accept probability is min(1, exp(loglik(w*) - loglik(w))) with no prior
ratio.  Posterior normalization constants never appear.

Chains store running means rather than sample traces: a 2^18-step chain at
dim 16 would otherwise hold gigabytes.  An optional thinned trace can be
kept for diagnostics.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import interchange
from .linalg import hermitize
from .measurement import CompiledLikelihood, MeasurementDataset
from .priors import PriorModel
from .rng import make_rng

BETA_FLOOR = 1e-4
BETA_CEIL = 1.0


def default_checkpoints(length: int, first: int = 32) -> tuple:
    """Powers of two from ``first`` up to ``length``, always ending at
    ``length`` itself."""
    points = []
    p = first
    while p < length:
        points.append(p)
        p *= 2
    points.append(length)
    return tuple(points)


@dataclass(frozen=True)
class ChainConfig:
    """pCN chain settings.

    ``target_accept=None`` disables step-size adaptation; otherwise beta is
    adapted every ``adapt_window`` steps toward the target acceptance rate,
    but only inside the burn-in prefix (adaptation is frozen afterwards to
    preserve stationarity).  ``burn_in`` is the fraction of the chain
    excluded from the running mean.
    """

    length: int
    beta: float = 0.1
    target_accept: float | None = 0.25
    adapt_window: int = 64
    burn_in: float = 0.0
    checkpoints: tuple | None = None
    seed: int = 0
    stream: int = 0
    thin: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"chain length must be >= 1, got {self.length}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if not 0.0 <= self.burn_in < 1.0:
            raise ValueError(f"burn-in fraction must be in [0, 1), got {self.burn_in}")
        if self.checkpoints is not None:
            pts = tuple(int(c) for c in self.checkpoints)
            if not pts or any(c < 1 or c > self.length for c in pts):
                raise ValueError("checkpoints must lie in 1..length")
            object.__setattr__(self, "checkpoints", tuple(sorted(set(pts))))

    def resolved_checkpoints(self) -> tuple:
        if self.checkpoints is not None:
            return self.checkpoints
        return default_checkpoints(self.length)


@dataclass
class ChainResult:
    """Per-checkpoint Bayesian means, cumulative wall-times (seconds,
    including any point-estimate preparation time), and acceptance rates."""

    checkpoint_lengths: list
    wall_times: list
    rho_means: list
    acceptances: list
    acceptance_rate: float
    final_beta: float
    trace: list | None = field(default=None, repr=False)

    @property
    def rho_b(self) -> np.ndarray:
        return self.rho_means[-1]

    def to_obj(self) -> dict:
        return {
            "checkpoints": [
                {
                    "length": int(n),
                    "wall_s": float(t),
                    "rho_b": interchange.density_matrix_to_obj(rho),
                    "acceptance": float(a),
                }
                for n, t, rho, a in zip(
                    self.checkpoint_lengths, self.wall_times, self.rho_means, self.acceptances
                )
            ]
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_obj()))


def _propose(w: np.ndarray, beta: float, rng: np.random.Generator):
    xi = rng.standard_normal(w.shape)
    return np.sqrt(1.0 - beta * beta) * w + beta * xi


def pcn_step(w: np.ndarray, beta: float, loglik, rng: np.random.Generator):
    """One pCN Metropolis step; returns (next state, accepted flag).

    A non-finite log-likelihood at the proposal is an automatic reject.
    """
    w = np.asarray(w, dtype=float)
    ll_w = loglik(w)
    if not np.isfinite(ll_w):
        raise ValueError("log-likelihood is not finite at the current state")
    w_new, accepted, _ = _step(w, ll_w, beta, loglik, rng)
    return w_new, accepted


def _step(w, ll_w, beta, loglik, rng):
    w_star = _propose(w, beta, rng)
    u = rng.random()
    ll_star = loglik(w_star)
    if np.isfinite(ll_star) and (ll_star >= ll_w or u < np.exp(ll_star - ll_w)):
        return w_star, True, ll_star
    return w, False, ll_w


def adapt_beta(
    history,
    beta: float,
    target: float = 0.25,
    gain: float = 1.0,
    floor: float = BETA_FLOOR,
    ceil: float = BETA_CEIL,
) -> float:
    """Multiplicative step-size update steering empirical acceptance toward
    the target rate; a window at exactly the target leaves beta unchanged."""
    rate = float(np.mean(history))
    return float(np.clip(beta * np.exp(gain * (rate - target)), floor, ceil))


def bayes_mean(samples) -> np.ndarray:
    """Arithmetic mean of density matrices; physical by convexity."""
    samples = list(samples)
    if not samples:
        raise ValueError("bayes_mean of an empty sample set")
    return np.mean(np.stack(samples), axis=0)


def run_chain(
    model: PriorModel,
    data: MeasurementDataset,
    cfg: ChainConfig,
    rho_ml_seconds: float = 0.0,
) -> ChainResult:
    """Sample the posterior of ``model`` conditioned on ``data``.

    The initial state is a reference-measure draw.  At every checkpoint the
    running mean of rho(w) over post-burn-in samples is recorded together
    with the cumulative wall-time; ``rho_ml_seconds`` is added to all
    wall-times so priors built on a point estimate account for the time
    spent producing it.
    """
    if data.n_records > 0 and data.dim != model.dim:
        raise ValueError(f"dataset dim {data.dim} != prior dim {model.dim}")
    rng = make_rng(cfg.seed, cfg.stream)
    loglik_rho = CompiledLikelihood(data)
    prior_map = model.map

    def loglik(w):
        return loglik_rho(prior_map(w))

    checkpoints = cfg.resolved_checkpoints()
    burn_count = int(np.floor(cfg.burn_in * cfg.length))
    beta = cfg.beta

    w = rng.standard_normal(model.param_count)
    rho = prior_map(w)
    ll_w = loglik_rho(rho)

    mean_acc = np.zeros((model.dim, model.dim), dtype=complex)
    mean_n = 0
    pre_acc = np.zeros_like(mean_acc)
    pre_n = 0
    accepted_total = 0
    window_hits = 0
    window_len = 0
    trace = [] if cfg.thin > 0 else None

    results_len, results_wall, results_rho, results_acc = [], [], [], []
    next_cp = 0
    t0 = time.perf_counter()

    for t in range(1, cfg.length + 1):
        w_star = _propose(w, beta, rng)
        u = rng.random()
        rho_star = prior_map(w_star)
        ll_star = loglik_rho(rho_star)
        if np.isfinite(ll_star) and (ll_star >= ll_w or u < np.exp(ll_star - ll_w)):
            w, rho, ll_w = w_star, rho_star, ll_star
            accepted_total += 1
            window_hits += 1
        window_len += 1

        if t <= burn_count:
            pre_acc += rho
            pre_n += 1
            if cfg.target_accept is not None and window_len >= cfg.adapt_window:
                beta = adapt_beta([window_hits / window_len], beta, cfg.target_accept)
                window_hits = 0
                window_len = 0
        else:
            mean_acc += rho
            mean_n += 1
            if trace is not None and (mean_n % cfg.thin) == 0:
                trace.append(rho.copy())

        while next_cp < len(checkpoints) and t == checkpoints[next_cp]:
            elapsed = time.perf_counter() - t0 + rho_ml_seconds
            if mean_n > 0:
                rho_b = mean_acc / mean_n
            else:
                # checkpoint inside the burn-in prefix: report the mean so far
                rho_b = pre_acc / pre_n
            rho_b = hermitize(rho_b)
            rho_b /= rho_b.trace().real
            results_len.append(t)
            results_wall.append(elapsed)
            results_rho.append(rho_b)
            results_acc.append(accepted_total / t)
            next_cp += 1

    return ChainResult(
        checkpoint_lengths=results_len,
        wall_times=results_wall,
        rho_means=results_rho,
        acceptances=results_acc,
        acceptance_rate=accepted_total / cfg.length,
        final_beta=beta,
        trace=trace,
    )
