"""Transport on the cube.

Without phases the walker hops from a corner to the opposite corner
perfectly at t = pi/2. Minimising the quantum-classical distance instead
finds phases that keep it away from every vertex not adjacent to the start.
"""

from __future__ import annotations

import numpy as np

from chiralwalk import OptimizerConfig, hypercube_graph, optimize_phases, time_grid
from chiralwalk.experiments import cube_experiment

tab = cube_experiment(t_max=np.pi / 2, step=np.pi / 2)
print(f"no phases: P(1 -> 8) at t = pi/2 is {tab['P_1->8'][-1]:.12f}")

g = hypercube_graph(3)
res = optimize_phases(g, 1, 0.5, -1, OptimizerConfig(seed=0))
print(f"minimised D_QC(0.5) = {res.dqc:.6f} (no phases: {cube_experiment(t_max=0.5, step=0.5)['D_QC'][-1]:.6f})")
tab = cube_experiment(res.best, t_max=20.0)
for note in tab.notes:
    print(" ", note)
