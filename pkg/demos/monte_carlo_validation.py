"""Validating the closed-form bounds against a sampled network.

Draws 100k network geometries around a typical user (serving distance
Rayleigh, interfering BSs a Poisson process outside the serving radius)
and checks the building blocks of the closed-form SINR bound: the
serving-distance law, the mean transmit power under channel inversion,
the three interference moments the bound aggregates, the Jensen gap
between the averaged and closed-form spectral efficiency, and the
channel-estimation statistics at signal level.

Run:  python demos/monte_carlo_validation.py   (about half a minute)
"""

import math

from uplink_ee import load_config, optimizer, simulator
from uplink_ee.simulator import McConfig

GAMMA = 3.0
cfg = load_config()
prop = cfg.propagation

beta = optimizer.optimal_pilot_reuse(89, 10, math.inf, GAMMA, prop).beta_star
mc = McConfig(
    realization_count=100_000,
    window_radius=simulator.default_window_radius(10.0, prop),
    seed=42,
    lam=10.0, m=89, k=10, beta=beta, rho=math.inf, gamma=GAMMA,
)
print(f"operating point: M=89, K=10, beta={beta:.3f}, density 10 BS/km^2, "
      f"window {mc.window_radius:.2f} km, 100k realizations, seed 42\n")

serving, ks = simulator.estimate_serving_distance(mc, prop)
scale = mc.rayleigh_scale()
print(f"serving distance: mean {serving.mean():.5f} km "
      f"(Rayleigh predicts {scale * math.sqrt(math.pi / 2):.5f}), "
      f"KS p-value {ks.pvalue:.3f}")

finite = McConfig(**{**mc.__dict__, "rho": 1e-19})
power = simulator.estimate_average_power(finite, prop)
print(f"mean transmit power: {power.value:.4e} J/symbol vs closed form "
      f"{power.reference:.4e} (z = {power.z_score:+.2f})")

terms = simulator.estimate_sinr_denominator_terms(mc, prop)
for label, est in [
    ("colliding-cell alpha-moment ", terms.collision_alpha),
    ("all-cells alpha-moment      ", terms.all_cells_alpha),
    ("colliding-cell 2alpha-moment", terms.collision_2alpha),
]:
    print(f"{label}: {est.value:.5f} vs {est.reference:.5f} "
          f"(z = {est.z_score:+.2f})")

emp = simulator.simulate_empirical_se(mc, prop)
print(f"spectral efficiency: geometry-averaged {emp.mean:.4f} "
      f">= closed-form {emp.closed_form:.4f} bit/symbol "
      f"(Jensen gap {100 * emp.gap:.2f}%)")

sig = simulator.simulate_signal_level(mc, prop)
print(f"estimation-error variance deviation {sig.error_variance_rel:.4f} "
      f"(tolerance {sig.error_variance_tol:.4f}); estimate/error "
      f"correlation {sig.estimate_error_corr:+.2e}; mean effective channel "
      f"gain {sig.gain_over_target.value:.5f} of target")
