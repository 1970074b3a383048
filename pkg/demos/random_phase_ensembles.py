"""What random phases do on average.

Phases drawn at random on K_13 spread the walker faster than the real walk:
the more independent angles, the lower the IPR and the larger the coherence
and the quantum-classical distance.
"""

from __future__ import annotations

from chiralwalk import complete_graph
from chiralwalk.experiments import ensemble_experiment

tab = ensemble_experiment(complete_graph(13), samples=400, seed=0, t_max=1.0, step=0.1)
row = 4  # t = 0.4
print(f"t = {tab['t'][row]:.1f}")
print(f"  H = L        IPR {tab['I|L'][row]:.3f}  C {tab['C|L'][row]:.2f}")
for rule in ("single", "two", "independent"):
    print(f"  {rule:<12} IPR {tab[f'I|{rule}'][row]:.3f}  C {tab[f'C|{rule}'][row]:.2f}  "
          f"dD_QC {tab[f'dD_QC|{rule}'][row]:+.5f} +- {tab[f'D_QC_se|{rule}'][row]:.5f}")
