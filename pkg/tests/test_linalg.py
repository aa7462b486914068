"""Quantum-information functionals: examples and random-draw properties."""

import numpy as np
import pytest

from bqst.linalg import (
    DimensionMismatchError,
    PhysicalityError,
    fidelity,
    hermitize,
    is_physical,
    matrix_sqrt,
    psd_project,
    purity,
    trace_distance,
    validate_density_matrix,
)
from bqst.ensembles import sample_bures
from bqst.rng import make_rng

from oracles import oracle_fidelity

KET0 = np.array([[1, 0], [0, 0]], dtype=complex)
KET1 = np.array([[0, 0], [0, 1]], dtype=complex)


class TestFidelity:
    def test_self_fidelity_is_one(self):
        rng = make_rng(1)
        for dim in (2, 4, 8):
            rho = sample_bures(dim, rng)
            assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        assert fidelity(KET0, KET1) == pytest.approx(0.0, abs=1e-12)

    def test_pure_versus_maximally_mixed(self):
        assert fidelity(KET0, np.eye(2) / 2) == pytest.approx(0.5, abs=1e-12)

    def test_range_and_symmetry_on_random_draws(self):
        rng = make_rng(2)
        a = sample_bures(3, rng, size=1000)
        b = sample_bures(3, rng, size=1000)
        for x, y in zip(a, b):
            f = fidelity(x, y)
            assert 0.0 <= f <= 1.0
            assert abs(f - fidelity(y, x)) <= 1e-8

    def test_agrees_with_sqrtm_route(self):
        rng = make_rng(3)
        for _ in range(50):
            a = sample_bures(4, rng)
            b = sample_bures(4, rng)
            assert fidelity(a, b) == pytest.approx(oracle_fidelity(a, b), abs=1e-8)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fidelity(np.eye(2) / 2, np.eye(4) / 4)

    def test_non_hermitian_rejected(self):
        bad = np.array([[0.5, 1.0], [0.0, 0.5]], dtype=complex)
        with pytest.raises(PhysicalityError):
            fidelity(bad, np.eye(2) / 2)


class TestPurity:
    def test_maximally_mixed(self):
        for dim in (2, 4, 16):
            assert purity(np.eye(dim) / dim) == pytest.approx(1.0 / dim, abs=1e-12)

    def test_pure_projector(self):
        assert purity(KET0) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_example(self):
        assert purity(np.diag([0.75, 0.25]).astype(complex)) == pytest.approx(0.625, abs=1e-12)

    def test_bounds_on_random_draws(self):
        rng = make_rng(4)
        for dim in (2, 4):
            for rho in sample_bures(dim, rng, size=500):
                p = purity(rho)
                assert 1.0 / dim - 1e-12 <= p <= 1.0 + 1e-12


class TestPsdProject:
    def test_idempotent_on_physical_input(self):
        rng = make_rng(5)
        rho = sample_bures(4, rng)
        assert np.abs(psd_project(rho) - rho).max() <= 1e-12

    def test_clamps_then_renormalizes(self):
        out = psd_project(np.diag([1.1, -0.1]).astype(complex))
        assert np.allclose(out, np.diag([1.0, 0.0]), atol=1e-12)

    def test_trace_renormalization(self):
        out = psd_project(np.diag([0.6, 0.6]).astype(complex))
        assert np.allclose(out, np.diag([0.5, 0.5]), atol=1e-12)

    def test_all_nonpositive_rejected(self):
        with pytest.raises(PhysicalityError):
            psd_project(np.diag([-1.0, -0.5]).astype(complex))

    def test_output_well_defined_for_hermitian_with_positive_part(self):
        rng = make_rng(6)
        for _ in range(200):
            m = hermitize(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
            if np.linalg.eigvalsh(m)[-1] <= 0:
                continue
            out = psd_project(m)
            validate_density_matrix(out)
            assert 1.0 / 3 - 1e-12 <= purity(out) <= 1.0 + 1e-12


class TestMatrixSqrt:
    def test_identity(self):
        assert np.allclose(matrix_sqrt(np.eye(3)), np.eye(3), atol=1e-12)

    def test_defining_property_on_diagonal(self):
        rho = np.diag([0.8, 0.2]).astype(complex)
        s = matrix_sqrt(rho)
        assert np.abs(s @ s - rho).max() <= 1e-10

    def test_projector_is_its_own_root(self):
        assert np.allclose(matrix_sqrt(KET0), KET0, atol=1e-12)

    def test_square_reproduces_input_on_random_draws(self):
        rng = make_rng(7)
        for dim in (2, 4):
            for rho in sample_bures(dim, rng, size=500):
                s = matrix_sqrt(rho)
                assert np.linalg.norm(s @ s - rho) <= 1e-8

    def test_non_psd_rejected(self):
        with pytest.raises(PhysicalityError):
            matrix_sqrt(np.diag([1.5, -0.5]).astype(complex))


class TestValidation:
    def test_accepts_physical(self):
        validate_density_matrix(np.eye(2) / 2)

    def test_rejects_trace(self):
        with pytest.raises(PhysicalityError):
            validate_density_matrix(np.eye(2))

    def test_rejects_non_hermitian(self):
        with pytest.raises(PhysicalityError):
            validate_density_matrix(np.array([[0.5, 1e-3], [0.0, 0.5]]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(PhysicalityError):
            validate_density_matrix(np.diag([1.2, -0.2]))

    def test_is_physical_flag(self):
        assert is_physical(np.eye(2) / 2)
        assert not is_physical(np.eye(2))

    def test_trace_distance_basic(self):
        assert trace_distance(KET0, KET1) == pytest.approx(1.0, abs=1e-12)
        assert trace_distance(KET0, KET0) == pytest.approx(0.0, abs=1e-12)
