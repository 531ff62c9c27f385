"""The energy-efficiency surface over antenna count and UE count.

In the dense-network limit the EE objective is quasi-concave over
(antennas, UEs).  This script scans the integer grid, prints a coarse
contour of the surface, and compares the grid optimum with the
closed-form alternating optimization.

Run:  python demos/ee_surface.py
"""

import numpy as np

from uplink_ee import load_config, model, optimizer

GAMMA = 3.0

cfg = load_config()
prop, hw = cfg.propagation, cfg.hardware

m_grid = np.arange(10, 201, 5)
k_grid = np.arange(1, 21)

surface = np.full((len(m_grid), len(k_grid)), np.nan)
for i, m in enumerate(m_grid):
    for j, k in enumerate(k_grid):
        ee = optimizer._objective_or_none(int(m), int(k), GAMMA, prop, hw)
        if ee is not None:
            surface[i, j] = ee / 1e6

best_flat = np.nanargmax(surface)
bi, bj = np.unravel_index(best_flat, surface.shape)
print(f"grid optimum: M={m_grid[bi]}, K={k_grid[bj]}, "
      f"EE={surface[bi, bj]:.3f} Mbit/J")

relaxed = optimizer.alternating_optimize(20.0, 1.0, GAMMA, prop, hw)
integer = optimizer.integer_refine(relaxed, GAMMA, prop, hw)
print(f"alternating + integer refinement: M={integer.m}, K={integer.k}, "
      f"EE={integer.ee / 1e6:.3f} Mbit/J "
      f"(relaxed ({relaxed.m_star:.1f}, {relaxed.k_star:.1f}), "
      f"{relaxed.iterations} iterations)")

# coarse character contour: one row per K, '#' within 2% of the peak,
# '+' within 10%, '.' within 50%, ' ' elsewhere or infeasible
peak = surface[bi, bj]
print("\n     M: " + " ".join(f"{m:>3d}" for m in m_grid[::4]))
for j, k in enumerate(k_grid):
    cells = []
    for i in range(0, len(m_grid), 4):
        v = surface[i, j]
        if np.isnan(v):
            cells.append("   ")
        elif v > 0.98 * peak:
            cells.append("  #")
        elif v > 0.90 * peak:
            cells.append("  +")
        elif v > 0.50 * peak:
            cells.append("  .")
        else:
            cells.append("   ")
    print(f"K={k:>2d}   " + " ".join(cells))
