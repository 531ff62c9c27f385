"""How energy efficiency saturates with base-station density.

For each SINR target the network is dimensioned at the dense-network
limit, then the power-control coefficient is re-optimized at each finite
density.  EE climbs with density and flattens out around 10 BS/km^2:
past that point extra BSs buy almost nothing because circuit energy,
not radiated energy, dominates the bill.

Run:  python demos/density_saturation.py
"""

import numpy as np

from uplink_ee import load_config, model, optimizer

cfg = load_config()
prop, hw = cfg.propagation, cfg.hardware

lambdas = np.logspace(-1, 2, 13)   # BS/km^2

print(f"{'density':>10} " + "".join(f"{'target ' + str(g):>14}" for g in (1, 3, 7)))

curves = {}
for gamma in (1.0, 3.0, 7.0):
    relaxed = optimizer.alternating_optimize(20.0, 1.0, gamma, prop, hw)
    integer = optimizer.integer_refine(relaxed, gamma, prop, hw)
    ees = []
    for lam in lambdas:
        _, rep = optimizer.optimize_rho_finite_lambda(
            lam, integer.m, integer.k, gamma, prop, hw)
        ees.append(rep.ee / 1e6)
    curves[gamma] = (integer, ees)

for i, lam in enumerate(lambdas):
    row = "".join(f"{curves[g][1][i]:>14.3f}" for g in (1.0, 3.0, 7.0))
    print(f"{lam:>10.3f} {row}")

print("\ndense-network limits (Mbit/J):")
for gamma, (integer, ees) in curves.items():
    asym = model.asymptotic_objective(integer.m, integer.k, gamma, prop, hw) / 1e6
    print(f"  target {gamma:g}: (M,K)=({integer.m},{integer.k})  "
          f"limit {asym:.3f}  at 10/km^2 {ees[int(np.argmin(np.abs(lambdas - 10)))]:.3f} "
          f"({100 * ees[int(np.argmin(np.abs(lambdas - 10)))] / asym:.1f}%)")
