"""Projector catalog, shot simulation, datasets, and the log-likelihood."""

import json

import numpy as np
import pytest

from bqst.linalg import DimensionMismatchError
from bqst.measurement import (
    FREQ_SHAPES,
    MeasurementDataset,
    PauliSetting,
    aggregated,
    born_probabilities,
    build_frequency_tensor,
    concat_datasets,
    log_likelihood,
    setting_to_state,
    simulate_counts_36,
    simulate_shots,
)
from bqst.ensembles import sample_bures
from bqst.rng import make_rng

BELL = np.zeros((4, 4), dtype=complex)
BELL[np.ix_([0, 3], [0, 3])] = 0.5


class TestSettingToState:
    def test_z_plus_is_ground(self):
        psi = setting_to_state(PauliSetting("Z", "0"))
        assert np.allclose(psi, [1, 0], atol=1e-15)

    def test_tensor_of_x_plus(self):
        psi = setting_to_state(PauliSetting("XX", "00"))
        assert np.allclose(psi, [0.5, 0.5, 0.5, 0.5], atol=1e-15)

    def test_y_minus(self):
        psi = setting_to_state(PauliSetting("Y", "1"))
        assert np.allclose(psi, [1 / np.sqrt(2), -1j / np.sqrt(2)], atol=1e-15)

    def test_invalid_labels_rejected(self):
        with pytest.raises(ValueError):
            PauliSetting("Q", "0")
        with pytest.raises(ValueError):
            PauliSetting("X", "2")
        with pytest.raises(ValueError):
            PauliSetting("XY", "0")


class TestBornProbabilities:
    def test_outcomes_sum_to_one_per_basis(self):
        rng = make_rng(40)
        for n in (1, 2, 3):
            rho = sample_bures(2**n, rng)
            probs = born_probabilities(rho, n)
            # for each of the 3^n basis combinations the 2^n outcomes partition unity
            grouped = probs.reshape([6] * n)
            for combo in np.ndindex(*([3] * n)):
                idx = tuple(slice(2 * b, 2 * b + 2) for b in combo)
                assert abs(grouped[idx].sum() - 1.0) <= 1e-10


class TestSimulateShots:
    def test_eigenstate_measurement_never_flips(self):
        rho = np.diag([1.0, 0.0]).astype(complex)
        data = simulate_shots(rho, 5000, make_rng(41))
        z_records = data.outcomes[data.bases[:, 0] == 2]
        assert z_records.size > 0
        assert np.all(z_records == 0)

    def test_maximally_mixed_frequencies(self):
        data = simulate_shots(np.eye(2) / 2, 100_000, make_rng(42))
        counts = data.projector_counts()
        for j in range(6):
            freq = counts[j] / data.total_shots
            se = np.sqrt((1 / 6) * (5 / 6) / data.total_shots)
            assert abs(freq - 1 / 6) <= 3 * se

    def test_zero_shots_gives_empty_dataset(self):
        data = simulate_shots(np.eye(2) / 2, 0, make_rng(43))
        assert data.total_shots == 0 and data.n_records == 0

    def test_non_power_of_two_rejected(self):
        with pytest.raises(DimensionMismatchError):
            simulate_shots(np.eye(3) / 3, 10, make_rng(44))

    def test_empirical_frequencies_converge_to_born(self):
        rng = make_rng(45)
        rho = sample_bures(2, rng)
        data = simulate_shots(rho, 100_000, make_rng(46))
        probs = born_probabilities(rho, 1) / 3.0  # uniform basis choice
        counts = data.projector_counts()
        m = data.total_shots
        for j in range(6):
            se = np.sqrt(probs[j] * (1 - probs[j]) / m)
            assert abs(counts[j] / m - probs[j]) <= 3 * se + 1e-12


class TestSimulateCounts36:
    def test_bell_forbidden_projector(self):
        data = simulate_counts_36(BELL, 100_000, make_rng(47))
        counts = {tuple(b) + tuple(o): c for (b, o, c) in
                  zip(data.bases.tolist(), data.outcomes.tolist(), data.counts.tolist())}
        assert counts[(2, 2, 0, 1)] == 0  # (Z,+) x (Z,-)

    def test_bell_xx_fraction(self):
        data = simulate_counts_36(BELL, 100_000, make_rng(48))
        idx = np.where(
            (data.bases[:, 0] == 0) & (data.bases[:, 1] == 0)
            & (data.outcomes[:, 0] == 0) & (data.outcomes[:, 1] == 0)
        )[0]
        frac = data.counts[idx[0]] / 100_000
        se = np.sqrt(0.25 / 100_000)
        assert abs(frac - 0.5) <= 3 * se

    def test_maximally_mixed_fractions(self):
        data = simulate_counts_36(np.eye(4) / 4, 100_000, make_rng(49))
        se = np.sqrt(0.25 * 0.75 / 100_000)
        assert np.abs(data.counts / 100_000 - 0.25).max() <= 3 * se

    def test_requires_two_qubits(self):
        with pytest.raises(DimensionMismatchError):
            simulate_counts_36(np.eye(2) / 2, 10, make_rng(50))


class TestLogLikelihood:
    def test_maximally_mixed_closed_form(self):
        data = simulate_shots(np.eye(4) / 4, 1000, make_rng(51))
        assert log_likelihood(np.eye(4) / 4, data) == pytest.approx(1000 * np.log(0.25))

    def test_perfect_record_is_zero(self):
        data = MeasurementDataset.from_records(1, [PauliSetting("Z", "0")])
        assert log_likelihood(np.diag([1.0, 0.0]).astype(complex), data) == pytest.approx(0.0)

    def test_counted_arithmetic(self):
        data = MeasurementDataset.from_records(
            1, [(PauliSetting("Z", "0"), 3), (PauliSetting("Z", "1"), 1)], counted=True
        )
        rho = np.diag([0.75, 0.25]).astype(complex)
        assert log_likelihood(rho, data) == pytest.approx(3 * np.log(0.75) + np.log(0.25))

    def test_permutation_invariance_and_additivity(self):
        rng = make_rng(52)
        rho = sample_bures(2, rng)
        a = simulate_shots(rho, 500, make_rng(53))
        b = simulate_shots(rho, 300, make_rng(54))
        joined = concat_datasets(a, b)
        assert log_likelihood(rho, joined) == pytest.approx(
            log_likelihood(rho, a) + log_likelihood(rho, b)
        )
        perm = make_rng(55).permutation(joined.n_records)
        shuffled = MeasurementDataset(1, joined.bases[perm], joined.outcomes[perm])
        assert log_likelihood(rho, shuffled) == pytest.approx(log_likelihood(rho, joined))

    def test_clamping_keeps_zero_probability_finite(self):
        data = MeasurementDataset.from_records(1, [PauliSetting("Z", "1")])
        ll = log_likelihood(np.diag([1.0, 0.0]).astype(complex), data)
        assert np.isfinite(ll) and ll == pytest.approx(np.log(1e-12))

    def test_dimension_mismatch(self):
        data = MeasurementDataset.from_records(1, [PauliSetting("Z", "0")])
        with pytest.raises(DimensionMismatchError):
            log_likelihood(np.eye(4) / 4, data)

    def test_aggregation_is_lossless(self):
        rho = sample_bures(2, make_rng(56))
        data = simulate_shots(rho, 2000, make_rng(57))
        agg = aggregated(data)
        assert agg.mode == "counted"
        assert agg.total_shots == data.total_shots
        assert log_likelihood(rho, agg) == pytest.approx(log_likelihood(rho, data))


class TestFrequencyTensor:
    def test_one_qubit_uniform_coverage(self):
        records = [PauliSetting(b, o) for b in "XYZ" for o in "01"]
        data = MeasurementDataset.from_records(1, records)
        tensor = build_frequency_tensor(data)
        assert tensor.shape == (2, 3)
        assert np.allclose(tensor, 1 / 6, atol=1e-15)

    def test_empty_dataset_is_zero(self):
        data = MeasurementDataset(1, np.empty((0, 1)), np.empty((0, 1)))
        assert np.all(build_frequency_tensor(data) == 0.0)

    def test_two_qubit_uniform_frequencies(self):
        data = simulate_shots(np.eye(4) / 4, 100_000, make_rng(58))
        tensor = build_frequency_tensor(data)
        assert tensor.shape == (6, 6)
        se = np.sqrt((1 / 36) * (35 / 36) / data.total_shots)
        assert np.abs(tensor - 1 / 36).max() <= 3 * se

    def test_counted_mode_accepted(self):
        data = simulate_counts_36(np.eye(4) / 4, 1000, make_rng(59))
        tensor = build_frequency_tensor(data)
        assert tensor.shape == (6, 6)
        assert tensor.sum() == pytest.approx(1.0)

    def test_layout_bijection(self):
        # a single (Y,-) x (Z,+) record must land at row 2*1+1=3, col 2*2+0=4
        data = MeasurementDataset.from_records(2, [PauliSetting("YZ", "10")])
        tensor = build_frequency_tensor(data)
        assert tensor[3, 4] == 1.0 and tensor.sum() == 1.0

    def test_shapes_catalog(self):
        assert FREQ_SHAPES == {1: (2, 3), 2: (6, 6), 3: (6, 36), 4: (36, 36)}

    def test_block_sums_match_shot_fractions(self):
        data = simulate_shots(sample_bures(2, make_rng(60)), 5000, make_rng(61))
        tensor = build_frequency_tensor(data).ravel()
        grouped = tensor.reshape(3, 2)  # one qubit: basis blocks of two outcomes
        joint = data.projector_counts()
        for b in range(3):
            frac = joint[2 * b : 2 * b + 2].sum() / data.total_shots
            assert grouped[b].sum() == pytest.approx(frac)


class TestDatasetFiles:
    def test_round_trip_single_shot(self, tmp_path):
        rho = sample_bures(2, make_rng(62))
        data = simulate_shots(rho, 300, make_rng(63))
        path = tmp_path / "d.json"
        data.save(path)
        loaded = MeasurementDataset.load(path)
        assert loaded.mode == "single_shot"
        assert np.array_equal(loaded.bases, data.bases)
        assert np.array_equal(loaded.outcomes, data.outcomes)

    def test_round_trip_counted(self, tmp_path):
        data = simulate_counts_36(BELL, 500, make_rng(64))
        path = tmp_path / "d.json"
        data.save(path)
        loaded = MeasurementDataset.load(path)
        assert loaded.mode == "counted"
        assert np.array_equal(loaded.counts, data.counts)
        assert loaded.total_shots == data.total_shots

    def test_schema_shape(self, tmp_path):
        data = MeasurementDataset.from_records(1, [(PauliSetting("X", "0"), 5)], counted=True)
        path = tmp_path / "d.json"
        data.save(path)
        obj = json.loads(path.read_text())
        assert obj == {
            "qubits": 1,
            "mode": "counted",
            "records": [{"bases": "X", "outcomes": "0", "count": 5}],
        }

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValueError):
            MeasurementDataset.load(path)
        path.write_text(json.dumps({"qubits": 1, "mode": "weird", "records": []}))
        with pytest.raises(ValueError):
            MeasurementDataset.load(path)

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            MeasurementDataset.from_records(
                1, [(PauliSetting("X", "0"), -1)], counted=True
            )
