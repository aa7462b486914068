"""Experiment drivers, plotting, and the command-line interface."""

from .experiments import (
    BASELINE_SOURCE,
    ChainSpec,
    Fig2Config,
    Fig2Row,
    PriorSpec,
    PuritySource,
    PurityTable,
    ResultTable,
    TruthSpec,
    build_prior_model,
    parse_prior_spec,
    run_fig2,
    run_prior_sample,
    run_purity_pdf,
    run_reconstruct,
)

__all__ = [
    "BASELINE_SOURCE",
    "ChainSpec",
    "Fig2Config",
    "Fig2Row",
    "PriorSpec",
    "PuritySource",
    "PurityTable",
    "ResultTable",
    "TruthSpec",
    "build_prior_model",
    "parse_prior_spec",
    "run_fig2",
    "run_prior_sample",
    "run_purity_pdf",
    "run_reconstruct",
]
