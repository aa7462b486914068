"""Bayesian quantum state estimation with point-estimate-biased priors and
preconditioned Crank-Nicolson MCMC."""

from .linalg import (
    DimensionMismatchError,
    PhysicalityError,
    fidelity,
    is_physical,
    matrix_sqrt,
    psd_project,
    purity,
    trace_distance,
    validate_density_matrix,
)
from .ensembles import (
    BiasedDirichletSpec,
    DirichletParams,
    resolve_biased_alphas,
    sample_bures,
    sample_dirichlet,
    sample_ginibre,
    sample_haar_unitary,
    sample_ma,
    sample_ml_biased,
)
from .measurement import (
    MeasurementDataset,
    PauliSetting,
    build_frequency_tensor,
    log_likelihood,
    setting_to_state,
    simulate_counts_36,
    simulate_shots,
)
from .priors import PriorModel, map_bures, map_ma, map_ml_biased
from .mcmc import ChainConfig, ChainResult, adapt_beta, bayes_mean, pcn_step, run_chain
from .estimators import baseline_estimate, load_rho_ml, rho_to_tau, tau_to_rho
from .rng import RngSeed, make_rng

__version__ = "0.1.0"

__all__ = [
    "BiasedDirichletSpec",
    "ChainConfig",
    "ChainResult",
    "DimensionMismatchError",
    "DirichletParams",
    "MeasurementDataset",
    "PauliSetting",
    "PhysicalityError",
    "PriorModel",
    "RngSeed",
    "adapt_beta",
    "baseline_estimate",
    "bayes_mean",
    "build_frequency_tensor",
    "fidelity",
    "is_physical",
    "load_rho_ml",
    "log_likelihood",
    "make_rng",
    "map_bures",
    "map_ma",
    "map_ml_biased",
    "matrix_sqrt",
    "pcn_step",
    "psd_project",
    "purity",
    "resolve_biased_alphas",
    "rho_to_tau",
    "run_chain",
    "sample_bures",
    "sample_dirichlet",
    "sample_ginibre",
    "sample_haar_unitary",
    "sample_ma",
    "sample_ml_biased",
    "setting_to_state",
    "simulate_counts_36",
    "simulate_shots",
    "tau_to_rho",
    "trace_distance",
    "validate_density_matrix",
]
