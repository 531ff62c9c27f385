"""Monte-Carlo engine: geometry sampling, estimators, determinism."""

import math

import numpy as np
import pytest

from uplink_ee import simulator
from uplink_ee.simulator import McConfig, default_window_radius


@pytest.fixture(scope="module")
def mc(prop):
    return McConfig(
        realization_count=20_000,
        window_radius=default_window_radius(10.0, prop),
        seed=42,
        lam=10.0, m=89, k=10, beta=7.2439124664608645,
        rho=math.inf, gamma=3.0,
    )


# module-scoped prop so the mc fixture above can depend on it
@pytest.fixture(scope="module")
def prop():
    from uplink_ee import load_config
    return load_config().propagation


class TestConfigGeometry:
    def test_rayleigh_scale(self, mc):
        assert mc.rayleigh_scale() == pytest.approx(1 / math.sqrt(2 * math.pi * 10))

    def test_default_radius_meets_bound(self, mc, prop):
        assert mc.truncation_bound(prop) <= 0.01 + 1e-12

    def test_tiny_radius_violates_bound(self, mc, prop):
        small = McConfig(**{**mc.__dict__, "window_radius": 0.3})
        assert small.truncation_bound(prop) > 0.01

    def test_sample_geometry_invariants(self, mc):
        rng = np.random.default_rng(7)
        for _ in range(8):
            geo = simulator.sample_geometry(mc, rng)
            assert all(rec.bs_distance_to_origin >= geo.serving_distance
                       for rec in geo.interferers)
            assert all(len(rec.ue_records) == mc.k for rec in geo.interferers)


class TestEstimators:
    def test_serving_distance_rayleigh(self, mc, prop):
        serving, ks = simulator.estimate_serving_distance(mc, prop)
        assert len(serving) == mc.realization_count
        assert ks.pvalue > 0.01

    def test_average_power(self, mc, prop):
        finite = McConfig(**{**mc.__dict__, "rho": 1.61e-19})
        est = simulator.estimate_average_power(finite, prop)
        assert abs(est.z_score) < 4

    def test_denominator_terms(self, mc, prop):
        terms = simulator.estimate_sinr_denominator_terms(mc, prop)
        for est in (terms.collision_alpha, terms.all_cells_alpha,
                    terms.collision_2alpha):
            assert abs(est.z_score) < 4

    def test_term_references(self, mc, prop):
        # [TRIVIAL] the closed-form constants the estimators are checked against
        a = prop.alpha
        terms = simulator.estimate_sinr_denominator_terms(mc, prop)
        assert terms.collision_alpha.reference == pytest.approx(
            2 / (mc.beta * (a - 2)))
        assert terms.all_cells_alpha.reference == pytest.approx(
            2 * mc.k / (a - 2))
        assert terms.collision_2alpha.reference == pytest.approx(
            1 / (mc.beta * (a - 1)))

    def test_empirical_se_dominates_closed_form(self, mc, prop):
        emp = simulator.simulate_empirical_se(mc, prop)
        assert emp.mean >= emp.closed_form
        assert 0 <= emp.gap <= 0.10

    def test_signal_level_checks(self, mc, prop):
        rep = simulator.simulate_signal_level(mc, prop)
        assert rep.error_variance_rel <= rep.error_variance_tol
        assert abs(rep.estimate_error_corr) <= rep.corr_tol
        assert abs(rep.gain_over_target.rel_error) < 0.01


class TestDeterminism:
    def test_seed_reproducibility(self, mc, prop):
        a = simulator.estimate_sinr_denominator_terms(mc, prop)
        b = simulator.estimate_sinr_denominator_terms(mc, prop)
        assert a.collision_alpha.value == b.collision_alpha.value

    def test_thread_count_invariance(self, mc, prop, monkeypatch):
        monkeypatch.setenv(simulator.THREADS_ENV, "1")
        a = simulator.estimate_sinr_denominator_terms(mc, prop)
        monkeypatch.setenv(simulator.THREADS_ENV, "5")
        b = simulator.estimate_sinr_denominator_terms(mc, prop)
        assert a.collision_alpha.value == b.collision_alpha.value
        assert a.collision_2alpha.value == b.collision_2alpha.value

    def test_seed_sensitivity(self, mc, prop):
        other = McConfig(**{**mc.__dict__, "seed": 43})
        a = simulator.estimate_sinr_denominator_terms(mc, prop)
        b = simulator.estimate_sinr_denominator_terms(other, prop)
        assert a.collision_alpha.value != b.collision_alpha.value
