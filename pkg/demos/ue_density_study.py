"""Dimensioning a network for a given user density.

Fixing the UE density mu couples the BS density to the per-cell load
(lambda = mu / K).  This script optimizes the full configuration at each
mu and compares it against two fixed architectures: a small-cell-style
reference with 10 antennas serving one UE per cell, and the multi-user
reference with 89 antennas and 10 UEs per cell.  The optimized solution
tracks the multi-user reference: roughly 3x the EE of the small-cell
reference while deploying about 10x fewer BSs.

Run:  python demos/ue_density_study.py   (about half a minute)
"""

from uplink_ee import load_config, optimizer

GAMMA = 3.0
REFERENCES = [(10, 1), (89, 10)]

cfg = load_config()
prop, hw = cfg.propagation, cfg.hardware

print(f"{'mu':>9} {'curve':>16} {'M':>4} {'K':>3} {'lambda':>9} "
      f"{'rho J/sym':>10} {'EE Mbit/J':>10}")

for mu in (1e2, 1e3, 1e4, 1e5):
    opt, lam, rho = optimizer.optimize_for_ue_density(mu, GAMMA, prop, hw)
    print(f"{mu:>9.0f} {'optimized':>16} {opt.m:>4d} {opt.k:>3d} {lam:>9.1f} "
          f"{rho:>10.2e} {opt.ee / 1e6:>10.3f}")
    for m_ref, k_ref in REFERENCES:
        lam_ref = mu / k_ref
        rho_ref, rep = optimizer.optimize_rho_finite_lambda(
            lam_ref, m_ref, k_ref, GAMMA, prop, hw)
        print(f"{mu:>9.0f} {f'fixed ({m_ref},{k_ref})':>16} {m_ref:>4d} "
              f"{k_ref:>3d} {lam_ref:>9.1f} {rho_ref:>10.2e} "
              f"{rep.ee / 1e6:>10.3f}")

opt, lam, _ = optimizer.optimize_for_ue_density(1e4, GAMMA, prop, hw)
_, simo = optimizer.optimize_rho_finite_lambda(1e4, 10, 1, GAMMA, prop, hw)
print(f"\nat mu = 1e4: optimized EE / small-cell EE = {opt.ee / simo.ee:.2f}, "
      f"BS density ratio = {1e4 / lam:.1f}x fewer BSs")
