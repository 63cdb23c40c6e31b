import math

import pytest

from cixopt.copula import CopulaParams, armageddon_prob
from cixopt.mc import (
    CHUNK_PATHS,
    McConfig,
    McEstimate,
    simulate_armageddon,
    simulate_loss_given_no_armageddon,
)

CRISIS = CopulaParams(rho=0.95, n_names=50, default_prob=0.04412)


class TestConfig:
    def test_bad_path_count_rejected(self):
        with pytest.raises(ValueError):
            McConfig(n_paths=0, seed=1)

    def test_antithetic_needs_even_paths(self):
        with pytest.raises(ValueError):
            McConfig(n_paths=101, seed=1, antithetic=True)


class TestReproducibility:
    def test_bit_identical_across_runs(self):
        cfg = McConfig(n_paths=CHUNK_PATHS + 123, seed=99)
        first = simulate_armageddon(CRISIS, cfg)
        second = simulate_armageddon(CRISIS, cfg)
        assert first == second

    def test_seed_changes_estimate(self):
        a = simulate_armageddon(CRISIS, McConfig(n_paths=50_000, seed=1))
        b = simulate_armageddon(CRISIS, McConfig(n_paths=50_000, seed=2))
        assert a.mean != b.mean

    def test_loss_estimator_reproducible(self):
        cfg = McConfig(n_paths=70_000, seed=4, antithetic=True)
        first = simulate_loss_given_no_armageddon(CRISIS, cfg, 0.4)
        second = simulate_loss_given_no_armageddon(CRISIS, cfg, 0.4)
        assert first == second


class TestDegenerateCases:
    def test_comonotone_is_exact(self):
        params = CopulaParams(rho=1.0, n_names=50, default_prob=0.0441)
        est = simulate_armageddon(params, McConfig(n_paths=10_000, seed=3))
        assert est == McEstimate(mean=0.0441, std_error=0.0, n_paths=10_000)

    def test_zero_default_prob(self):
        params = CopulaParams(rho=0.5, n_names=50, default_prob=0.0)
        est = simulate_armageddon(params, McConfig(n_paths=10_000, seed=3))
        assert est.mean == 0.0
        assert est.std_error == 0.0

    def test_single_name_loss_is_exclusive(self):
        # with one name, any loss is a wipe-out, so the restricted loss is 0
        params = CopulaParams(rho=0.5, n_names=1, default_prob=0.3)
        est = simulate_loss_given_no_armageddon(params, McConfig(n_paths=50_000, seed=5), 0.4)
        assert est.mean == 0.0
        assert est.std_error == 0.0

    def test_comonotone_loss_is_zero(self):
        params = CopulaParams(rho=1.0, n_names=50, default_prob=0.0441)
        est = simulate_loss_given_no_armageddon(params, McConfig(n_paths=10_000, seed=3), 0.4)
        assert est == McEstimate(mean=0.0, std_error=0.0, n_paths=10_000)


class TestAgreement:
    def test_armageddon_within_three_standard_errors(self):
        q = armageddon_prob(CRISIS)
        est = simulate_armageddon(CRISIS, McConfig(n_paths=400_000, seed=11))
        assert abs(est.mean - q) < 3.0 * est.std_error

    def test_loss_within_three_standard_errors(self):
        q = armageddon_prob(CRISIS)
        expected = 0.6 * (CRISIS.default_prob - q)
        est = simulate_loss_given_no_armageddon(CRISIS, McConfig(n_paths=400_000, seed=11), 0.4)
        assert abs(est.mean - expected) < 3.0 * est.std_error

    def test_independent_limit_loss_is_expected_loss(self):
        # with rho=0 the wipe-out has measure ~p**n, so the restriction is invisible
        params = CopulaParams(rho=0.0, n_names=50, default_prob=0.05)
        est = simulate_loss_given_no_armageddon(params, McConfig(n_paths=200_000, seed=13), 0.4)
        assert abs(est.mean - 0.6 * 0.05) < 3.0 * est.std_error


class TestVarianceBehaviour:
    def test_antithetic_no_worse_than_plain(self):
        for params in (CRISIS, CopulaParams(rho=0.5, n_names=10, default_prob=0.1)):
            plain = simulate_loss_given_no_armageddon(params, McConfig(200_000, seed=21), 0.4)
            anti = simulate_loss_given_no_armageddon(
                params, McConfig(200_000, seed=21, antithetic=True), 0.4
            )
            assert anti.std_error <= plain.std_error

    def test_standard_error_scales_with_paths(self):
        small = simulate_armageddon(CRISIS, McConfig(n_paths=100_000, seed=31))
        large = simulate_armageddon(CRISIS, McConfig(n_paths=400_000, seed=31))
        ratio = small.std_error / large.std_error
        assert ratio == pytest.approx(2.0, rel=0.2)

    def test_estimates_converge_across_sizes(self):
        small = simulate_armageddon(CRISIS, McConfig(n_paths=100_000, seed=41))
        large = simulate_armageddon(CRISIS, McConfig(n_paths=1_000_000, seed=43))
        combined = math.hypot(small.std_error, large.std_error)
        assert abs(small.mean - large.mean) < 4.0 * combined
