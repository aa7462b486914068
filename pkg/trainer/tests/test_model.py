"""Network construction: widths per qubit count, physical decode, IO."""

import numpy as np
import pytest
import torch

from qst_trainer.layout import FREQ_SHAPES
from qst_trainer.model import DENSE_WIDTHS, TauEstimator, load_model, save_model

from conftest import assert_physical


@pytest.mark.parametrize("qubits", [1, 2, 3, 4])
def test_widths_and_shapes(qubits):
    model = TauEstimator(qubits)
    d1, d2, out = DENSE_WIDTHS[qubits]
    linears = [m for m in model.head if isinstance(m, torch.nn.Linear)]
    assert [m.out_features for m in linears] == [d1, d2, out]
    assert out == (2**qubits) ** 2
    x = torch.zeros(3, 1, *FREQ_SHAPES[qubits])
    assert model(x).shape == (3, out)


def test_unsupported_qubit_count():
    with pytest.raises(ValueError):
        TauEstimator(5)


def test_random_weights_decode_physically():
    for qubits, seed in ((1, 0), (2, 1)):
        torch.manual_seed(seed)
        model = TauEstimator(qubits)
        rng = np.random.default_rng(seed)
        tensors = rng.random((20, *FREQ_SHAPES[qubits])).astype(np.float32)
        for rho in model.predict_rho(tensors):
            assert_physical(rho)


def test_wrong_axes_error_names_layout():
    model = TauEstimator(1)
    with pytest.raises(ValueError, match="axes"):
        model(torch.zeros(1, 1, 6, 6))


def test_inference_is_deterministic():
    torch.manual_seed(7)
    model = TauEstimator(1)
    x = np.random.default_rng(7).random((5, 2, 3)).astype(np.float32)
    a = model.predict_tau(x)
    b = model.predict_tau(x)
    assert np.array_equal(a, b)


def test_save_load_round_trip(tmp_path):
    torch.manual_seed(8)
    model = TauEstimator(2)
    path = tmp_path / "model.pt"
    save_model(model, path)
    clone = load_model(path)
    x = np.random.default_rng(8).random((4, 6, 6)).astype(np.float32)
    assert np.array_equal(model.predict_tau(x), clone.predict_tau(x))
    assert clone.qubits == 2


def test_dropout_disabled_at_inference():
    torch.manual_seed(9)
    model = TauEstimator(1)
    x = np.random.default_rng(9).random((1, 2, 3)).astype(np.float32)
    outs = {model.predict_tau(x).tobytes() for _ in range(5)}
    assert len(outs) == 1
