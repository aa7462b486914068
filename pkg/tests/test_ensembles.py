"""Ensemble samplers: moment oracles, invariants, determinism."""

import numpy as np
import pytest
from scipy.stats import ks_2samp, kstest

from bqst.ensembles import (
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
from bqst.linalg import purity_stack, trace_distance
from bqst.rng import make_rng

from oracles import assert_within, oracle_bures_states, oracle_purity, se_mean


class TestGinibre:
    def test_scalar_second_moment(self):
        g = sample_ginibre(1, make_rng(10), size=100_000)
        mags = np.abs(g[:, 0, 0]) ** 2
        assert_within(mags.mean(), 1.0, 3 * se_mean(mags), "E|g|^2")

    def test_trace_moment_d4(self):
        g = sample_ginibre(4, make_rng(11), size=100_000)
        t = np.einsum("nij,nij->n", g, g.conj()).real / 16
        assert_within(t.mean(), 1.0, 3 * se_mean(t), "Tr(GG+)/D^2")

    def test_seeded_determinism(self):
        assert np.array_equal(
            sample_ginibre(3, make_rng(12, 4)), sample_ginibre(3, make_rng(12, 4))
        )


class TestHaarUnitary:
    def test_unitarity(self):
        rng = make_rng(13)
        for dim in (1, 2, 5):
            u = sample_haar_unitary(dim, rng)
            assert np.abs(u.conj().T @ u - np.eye(dim)).max() <= 1e-10

    def test_first_moment_d2(self):
        u = sample_haar_unitary(2, make_rng(14), size=100_000)
        mags = np.abs(u[:, 0, 0]) ** 2
        assert_within(mags.mean(), 0.5, 3 * se_mean(mags), "E|U00|^2")

    def test_eigenphases_uniform(self):
        u = sample_haar_unitary(3, make_rng(15), size=3000)
        phases = np.angle(np.linalg.eigvals(u)).ravel()
        assert kstest(phases, "uniform", args=(-np.pi, 2 * np.pi)).pvalue > 0.01

    def test_left_invariance(self):
        # multiplying by a fixed unitary must not change |entry|^2 statistics
        fixed = sample_haar_unitary(2, make_rng(16))
        u = sample_haar_unitary(2, make_rng(17), size=50_000)
        rotated = np.einsum("ij,njk->nik", fixed, u)
        a = np.abs(u[:, 0, 0]) ** 2
        b = np.abs(rotated[:, 0, 0]) ** 2
        assert ks_2samp(a, b).pvalue > 0.01


class TestBures:
    def test_samples_physical(self):
        rhos = sample_bures(4, make_rng(18), size=2000)
        _assert_stack_physical(rhos)

    def test_mean_purity_matches_independent_oracle(self):
        n = 300_000
        engine = purity_stack(sample_bures(2, make_rng(19), size=n))
        oracle = oracle_purity(oracle_bures_states(2, n, seed=190))
        combined = np.sqrt(se_mean(engine) ** 2 + se_mean(oracle) ** 2)
        assert_within(engine.mean(), oracle.mean(), 3 * combined, "Bures purity")

    def test_mean_state_maximally_mixed_d4(self):
        rhos = sample_bures(4, make_rng(20), size=100_000)
        assert np.abs(rhos.mean(axis=0) - np.eye(4) / 4).max() <= 0.01


class TestDirichlet:
    def test_uniform_segment(self):
        x = sample_dirichlet(DirichletParams((1.0, 1.0)), make_rng(21), size=100_000)
        assert_within(x[:, 0].mean(), 0.5, 3 * se_mean(x[:, 0]), "E(x1)")

    def test_biased_mean(self):
        params = resolve_biased_alphas(BiasedDirichletSpec(K=5, mu=25.0, alpha0=11.6))
        x = sample_dirichlet(params, make_rng(22), size=100_000)
        assert_within(x[:, 0].mean(), 25.0 / 29.0, 3 * se_mean(x[:, 0]), "E(x1)")

    def test_simplex_constraints(self):
        params = DirichletParams((0.1, 0.4, 2.0))
        x = sample_dirichlet(params, make_rng(23), size=10_000)
        assert np.all(x >= 0)
        assert np.abs(x.sum(axis=1) - 1.0).max() <= 1e-12

    def test_zero_alpha_component_is_zero(self):
        x = sample_dirichlet(DirichletParams((0.0, 1.0, 1.0)), make_rng(24), size=1000)
        assert np.all(x[:, 0] == 0.0)

    def test_all_zero_alpha_rejected(self):
        with pytest.raises(ValueError):
            DirichletParams((0.0, 0.0))


class TestResolveBiasedAlphas:
    def test_reference_config(self):
        params = resolve_biased_alphas(BiasedDirichletSpec(K=5, mu=25.0, alpha0=11.6))
        assert np.allclose(params.as_array(), [10.0, 0.4, 0.4, 0.4, 0.4], atol=1e-12)

    def test_low_bias_config(self):
        params = resolve_biased_alphas(BiasedDirichletSpec(K=5, mu=0.25, alpha0=1.7))
        assert np.allclose(params.as_array(), [0.1, 0.4, 0.4, 0.4, 0.4], atol=1e-12)

    def test_unbiased_case(self):
        params = resolve_biased_alphas(BiasedDirichletSpec(K=2, mu=1.0, alpha0=2.0))
        assert np.allclose(params.as_array(), [1.0, 1.0], atol=1e-12)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            BiasedDirichletSpec(K=5, mu=0.0, alpha0=1.0)
        with pytest.raises(ValueError):
            BiasedDirichletSpec(K=1, mu=1.0, alpha0=1.0)


class TestMaMixture:
    def test_samples_physical(self):
        rhos = sample_ma(4, 5, 0.4, make_rng(25), size=2000)
        _assert_stack_physical(rhos)

    def test_single_term_is_pure(self):
        rhos = sample_ma(3, 1, 0.4, make_rng(26), size=200)
        assert np.abs(purity_stack(rhos) - 1.0).max() <= 1e-10

    def test_mean_purity(self):
        # E Tr(rho^2) = (D + a (D + K - 1)) / (D (1 + a K)) = 0.600 here
        p = purity_stack(sample_ma(4, 5, 0.4, make_rng(27), size=100_000))
        assert_within(p.mean(), 0.600, 0.01, "MA purity")


class TestMlBiasedMixture:
    def setup_method(self):
        self.rho_ml = sample_bures(4, make_rng(28))
        self.spec = BiasedDirichletSpec(K=5, mu=25.0, alpha0=11.6)

    def test_samples_physical(self):
        rhos = sample_ml_biased(self.rho_ml, self.spec, make_rng(29), size=2000)
        _assert_stack_physical(rhos)

    def test_sample_mean_closed_form(self):
        rhos = sample_ml_biased(self.rho_ml, self.spec, make_rng(30), size=100_000)
        target = (25.0 * self.rho_ml + np.eye(4)) / 29.0
        assert np.abs(rhos.mean(axis=0) - target).max() <= 0.01

    def test_low_mu_limit_is_uniform(self):
        spec = BiasedDirichletSpec(K=5, mu=1e-6, alpha0=11.6)
        rhos = sample_ml_biased(self.rho_ml, spec, make_rng(31), size=100_000)
        assert np.abs(rhos.mean(axis=0) - np.eye(4) / 4).max() <= 0.01

    def test_high_mu_concentrates_at_point_estimate(self):
        spec = BiasedDirichletSpec(K=5, mu=1e6, alpha0=11.6)
        rhos = sample_ml_biased(self.rho_ml, spec, make_rng(32), size=10_000)
        dists = [trace_distance(r, self.rho_ml) for r in rhos]
        assert np.mean(dists) <= 0.01

    def test_full_rank_with_high_probability(self):
        spec = BiasedDirichletSpec(K=5, mu=25.0, alpha0=11.6)
        rhos = sample_ml_biased(self.rho_ml, spec, make_rng(33), size=10_000)
        min_eig = np.linalg.eigvalsh(rhos)[:, 0]
        assert (min_eig > 1e-6).mean() > 0.99

    def test_non_square_point_estimate_rejected(self):
        with pytest.raises(Exception):
            sample_ml_biased(np.ones((2, 3), dtype=complex), self.spec, make_rng(34))


def _assert_stack_physical(rhos: np.ndarray, atol: float = 1e-10):
    assert np.abs(rhos - np.conj(np.swapaxes(rhos, -1, -2))).max() <= atol
    assert np.abs(np.trace(rhos, axis1=-2, axis2=-1) - 1.0).max() <= atol
    assert np.linalg.eigvalsh(rhos)[:, 0].min() >= -atol


def test_invariant_fuzz_across_dimensions():
    rng = make_rng(35)
    for dim in (2, 4, 8, 16):
        _assert_stack_physical(sample_bures(dim, rng, size=500))
        u = sample_haar_unitary(dim, rng, size=200)
        assert np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - np.eye(dim)).max() <= 1e-10
        x = sample_dirichlet(DirichletParams((0.4,) * (dim + 1)), rng, size=500)
        assert np.abs(x.sum(axis=1) - 1.0).max() <= 1e-12 and x.min() >= 0


def test_ml_biased_dimension_check_is_structural():
    rho_ml = sample_bures(3, make_rng(36))  # non-qubit dimension is allowed
    spec = BiasedDirichletSpec(K=4, mu=2.0, alpha0=2.0)
    rhos = sample_ml_biased(rho_ml, spec, make_rng(37), size=100)
    _assert_stack_physical(rhos)
