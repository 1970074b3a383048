"""Searching a complete graph faster than Grover, without an oracle.

The explicit search Hamiltonians rotate vertex 1 into the flat state in the
shortest time allowed by the quantum speed limit. Running the walk backwards
from the flat state then finds vertex 1.
"""

from __future__ import annotations

import numpy as np

from chiralwalk import (
    complete_graph,
    condition1_residual,
    decompose,
    dqc_optimal_closed_form,
    flat_state,
    laplacian,
    metric_series,
    optimal_hamiltonian,
    optimize_phases,
    OptimizerConfig,
    quantum_propagator,
    search_times,
    time_grid,
)

n = 13
h = optimal_hamiltonian(n)
print(f"K_{n}: first column orthogonal to the others up to {condition1_residual(h):.1e}")

st = search_times(n)
print(f"flat-state time {st.t_f:.5f} < Grover time {st.t_g:.5f} < orthogonal time {st.t_h:.5f}")
print(f"speed limit {st.tau_qsl:.5f} equals the flat-state time")

back = quantum_propagator(decompose(h), -st.t_f) @ flat_state(n)
print(f"backward walk from the flat state lands on vertex 1 with probability {abs(back[0]) ** 2:.12f}")

grid = time_grid(1.0, 0.01)
s = metric_series(h, laplacian(complete_graph(n)), grid, all_starts=False)
i = int(np.argmin(s.ipr))
print(f"IPR bottoms out at {s.ipr[i]:.5f} (1/n = {1 / n:.5f}) near t={grid[i]:.2f}")
print(f"largest D_QC error against the closed form: {np.max(np.abs(s.dqc - dqc_optimal_closed_form(n, grid))):.1e}")

# Maximising D_QC from random phases lands on other members of the same family.
res = optimize_phases(complete_graph(6), 1, 0.3, 1, OptimizerConfig(seed=0))
print(f"optimiser on K_6: D_QC(0.3) = {res.dqc:.6f}, orthogonality residual {res.residual:.1e}")
