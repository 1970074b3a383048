"""A 12-site quantum switch.

The input chain 1-2-3-4 meets a triangle 4-5-6 that feeds two output arms.
A phase phi on the link 5 -> 6 picks the arm: at phi = pi/2 the walker is
routed towards vertex 12 and kept away from vertex 11.
"""

from __future__ import annotations

import numpy as np

from chiralwalk.experiments import SWITCH_PHI_GRID, switch_experiment

for mode in ("adjacency", "laplacian"):
    tab = switch_experiment(mode)
    print(f"{mode} hopping")
    for phi in SWITCH_PHI_GRID:
        p11 = tab[f"P_1->11|phi={phi:.6g}"]
        p12 = tab[f"P_1->12|phi={phi:.6g}"]
        d = tab[f"dD_QC|phi={phi:.6g}"]
        print(f"  phi={phi:.4f}: max P(1->12) {p12.max():.3f} at t={tab['t'][p12.argmax()]:.2f}, "
              f"max P(1->11) {p11.max():.3f}, max dD_QC {d.max():+.4f}")
