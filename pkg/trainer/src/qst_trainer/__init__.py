"""Convolutional point estimator for quantum state tomography."""

from .data import Dataset, load_export, split
from .layout import fidelity, frequency_tensor, tau_to_rho
from .model import TauEstimator, load_model, save_model
from .predict import predict_export
from .train import TrainerConfig, TrainingLog, mean_fidelity, train

__all__ = [
    "Dataset",
    "TauEstimator",
    "TrainerConfig",
    "TrainingLog",
    "fidelity",
    "frequency_tensor",
    "load_export",
    "load_model",
    "mean_fidelity",
    "predict_export",
    "save_model",
    "split",
    "tau_to_rho",
    "train",
]
