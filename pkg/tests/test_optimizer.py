"""Optimizer layer: reuse-factor closed form, dimensioning, and searches."""

import math

import numpy as np
import pytest

from uplink_ee import model, optimizer
from uplink_ee.model import InfeasibleError, OperatingPoint


class TestOptimalPilotReuse:
    def test_reference_value(self, prop):
        # [DERIVED] frozen from solving sinr == gamma for beta numerically
        sol = optimizer.optimal_pilot_reuse(89, 10, math.inf, 3.0, prop)
        assert sol.beta_star == pytest.approx(7.243912466460865, rel=1e-12)
        assert sol.feasible

    def test_identity_with_noise(self, prop):
        rho = 1e-19
        sol = optimizer.optimal_pilot_reuse(89, 10, rho, 3.0, prop)
        pt = OperatingPoint(lam=10.0, m=89, k=10, beta=sol.beta_star,
                            rho=rho, gamma=3.0)
        assert model.sinr_lower_bound(pt, prop) == pytest.approx(3.0, rel=1e-12)

    def test_unreachable_target_raises(self, prop):
        with pytest.raises(InfeasibleError):
            optimizer.optimal_pilot_reuse(10, 10, math.inf, 3.0, prop)

    def test_overhead_violation_flags_infeasible(self, prop):
        sol = optimizer.optimal_pilot_reuse(66, 10, math.inf, 3.0, prop)
        assert sol.beta_star * 10 > prop.block_len and not sol.feasible


class TestDimensioningClosedForms:
    def test_k_step_matches_scalar_oracle(self, prop, hw):
        c_bar = 8.9
        k_star = optimizer.optimal_k_fixed_ratio(c_bar, 3.0, prop, hw)
        grid = np.linspace(max(k_star - 1, 0.2), k_star + 1, 20001)
        vals = [model.asymptotic_objective(c_bar * k, k, 3.0, prop, hw) for k in grid]
        assert abs(grid[int(np.argmax(vals))] - k_star) < 2e-4

    def test_m_step_matches_scalar_oracle(self, prop, hw):
        m_star = optimizer.optimal_m_fixed_k(10.0, 3.0, prop, hw)
        grid = np.linspace(m_star - 5, m_star + 5, 20001)
        vals = [model.asymptotic_objective(m, 10.0, 3.0, prop, hw) for m in grid]
        assert abs(grid[int(np.argmax(vals))] - m_star) < 2e-3

    def test_m_step_boundary_when_reuse_hits_one(self, hw):
        # low target with a mild exponent: interior optimum would push beta
        # below one, so the constrained optimum sits on the boundary
        prop2 = model.PropagationModel(alpha=3.76, omega=1e13, noise=1e-20,
                                       block_len=400)
        m = optimizer.optimal_m_fixed_k(10.0, 0.5, prop2, hw)
        bound = optimizer.max_m_for_reuse_constraint(10.0, 0.5, prop2)
        assert m <= bound + 1e-9

    def test_boundary_vacuous_above_exponent_limit(self, prop):
        assert math.isinf(optimizer.max_m_for_reuse_constraint(10.0, 3.0, prop))


class TestAlternating:
    def test_converges_to_relaxed_optimum(self, prop, hw):
        rel = optimizer.alternating_optimize(20.0, 1.0, 3.0, prop, hw)
        # [DERIVED] frozen from a Nelder-Mead maximization of the objective
        assert rel.m_star == pytest.approx(91.2203, rel=1e-4)
        assert rel.k_star == pytest.approx(10.1835, rel=1e-4)
        assert rel.ee == pytest.approx(10.374847936148e6, rel=1e-9)

    def test_trajectory_nondecreasing(self, prop, hw):
        rel = optimizer.alternating_optimize(20.0, 1.0, 3.0, prop, hw)
        ees = [t[2] for t in rel.trajectory]
        assert all(b >= a - 1e-9 for a, b in zip(ees, ees[1:]))

    def test_start_independence(self, prop, hw):
        a = optimizer.alternating_optimize(20.0, 1.0, 3.0, prop, hw)
        b = optimizer.alternating_optimize(300.0, 19.0, 3.0, prop, hw)
        assert a.m_star == pytest.approx(b.m_star, rel=1e-4)

    def test_infeasible_start_raises(self, prop, hw):
        with pytest.raises(InfeasibleError):
            optimizer.alternating_optimize(5.0, 10.0, 3.0, prop, hw)


class TestIntegerRefine:
    def test_reference_optimum(self, prop, hw):
        rel = optimizer.alternating_optimize(20.0, 1.0, 3.0, prop, hw)
        integer = optimizer.integer_refine(rel, 3.0, prop, hw)
        assert (integer.m, integer.k) == (89, 10)
        assert integer.ee <= rel.ee

    def test_matches_exhaustive_scan(self, prop, hw):
        # [DERIVED] global integer argmax over m<=200, k<=20 by brute force
        rel = optimizer.alternating_optimize(20.0, 1.0, 3.0, prop, hw)
        integer = optimizer.integer_refine(rel, 3.0, prop, hw)
        best = max(
            ((optimizer._objective_or_none(m, k, 3.0, prop, hw) or -1, m, k)
             for m in range(1, 201) for k in range(1, 21)),
        )
        assert (best[1], best[2]) == (integer.m, integer.k)


class TestFiniteDensity:
    def test_density_monotone(self, prop, hw):
        reports = optimizer.ee_vs_density(1e-19, 89, 10, 3.0, prop, hw,
                                          [1.0, 3.0, 10.0, 30.0, 100.0])
        ees = [r.ee for r in reports]
        assert all(b >= a for a, b in zip(ees, ees[1:]))

    def test_rho_search_beats_fixed_rho(self, prop, hw):
        rho, rep = optimizer.optimize_rho_finite_lambda(10.0, 89, 10, 3.0, prop, hw)
        fixed = optimizer.ee_at_density(10.0, 89, 10, rho * 7, 3.0, prop, hw)
        assert rep.ee >= fixed.ee

    def test_rho_search_saturates_toward_asymptote(self, prop, hw):
        _, rep = optimizer.optimize_rho_finite_lambda(1000.0, 89, 10, 3.0, prop, hw)
        asym = model.asymptotic_objective(89, 10, 3.0, prop, hw)
        assert 0.97 * asym < rep.ee < asym


class TestUeDensity:
    def test_reference_configuration(self, prop, hw):
        opt, lam, rho = optimizer.optimize_for_ue_density(1e4, 3.0, prop, hw)
        assert lam * opt.k == pytest.approx(1e4)
        assert opt.ee > 0.95 * model.asymptotic_objective(opt.m, opt.k, 3.0, prop, hw)

    def test_rejects_nonpositive_density(self, prop, hw):
        with pytest.raises(model.ParameterError):
            optimizer.optimize_for_ue_density(0.0, 3.0, prop, hw)
