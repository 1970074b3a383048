"""Chiral continuous-time quantum walks on small graphs.

The package builds phased Hamiltonians on unweighted graphs, propagates
localized walkers, compares them with the classical random walk and
searches the edge phases for extreme quantum-classical distances.
"""

from __future__ import annotations

from .closed_forms import (
    SearchTimes,
    appendix_hamiltonian,
    bessel_limit_prob,
    cycle_dqc_analytic,
    cycle_spectrum,
    cycle_transition_prob,
    dqc_optimal_closed_form,
    flat_state,
    flat_time,
    grover_hamiltonian,
    grover_time,
    optimal_evolution_state,
    optimal_hamiltonian,
    orthogonal_time,
    qsl_bound,
    qsl_terms,
    search_times,
)
from .graphs import (
    Graph,
    adjacency,
    build_graph,
    complete_graph,
    cycle_graph,
    free_phase_count,
    hypercube_graph,
    laplacian,
    spanning_tree,
    star_graph,
    switch_graph,
)
from .hamiltonian import (
    PhasedHamiltonian,
    apply_gauge,
    condition1_residual,
    cycle_from_link_phases,
    cycle_hamiltonian,
    cycle_holonomies,
    from_adjacency,
    from_laplacian,
    is_gauge_real,
    reduce_cycle_phases,
    with_convention,
)
from .metrics import (
    MetricSeries,
    ShortTimeCoefficients,
    WalkPair,
    coherence_l1,
    delta_dqc,
    dqc_at,
    dqc_max,
    dqc_series,
    ipr,
    metric_series,
    short_time_coeffs,
)
from .optimize import (
    BudgetExhausted,
    EnsembleResult,
    EnsembleSpec,
    OptimizationResult,
    OptimizerConfig,
    objective_dqc,
    optimize_phases,
    random_ensemble,
)
from .propagation import (
    EigensolverError,
    SpectralDecomposition,
    classical_localized,
    classical_propagator,
    decompose,
    evolve_localized,
    evolve_state,
    hermitian_eig,
    quantum_propagator,
    time_grid,
    transition_probabilities,
)

__version__ = "0.1.0"
