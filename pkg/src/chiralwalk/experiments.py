"""Experiment drivers that turn the library into column tables.

Every function returns a :class:`Table`: named, equally long columns plus a
few free-form notes. The command-line front end writes them as CSV; tests
and demos use them directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_forms import (
    flat_state,
    flat_time,
    grover_hamiltonian,
    grover_time,
    optimal_hamiltonian,
    search_times,
)
from .graphs import Graph, complete_graph, cycle_graph, hypercube_graph, laplacian, switch_graph
from .hamiltonian import TWO_PI, PhasedHamiltonian, cycle_hamiltonian, from_adjacency, from_laplacian, with_convention
from .metrics import WalkPair, coherence_l1, ipr
from .optimize import ENSEMBLE_RULES, EnsembleSpec, OptimizationResult, random_ensemble
from .propagation import evolve_state, hermitian_eig, time_grid

SWITCH_PHASE_EDGE = (5, 6)
SWITCH_PHI_GRID = (0.0, np.pi / 8, np.pi / 4, 3 * np.pi / 8, np.pi / 2)
COMPLETE_MODES = ("laplacian", "appendix", "grover") + tuple(f"ensemble:{r}" for r in ENSEMBLE_RULES)


@dataclass
class Table:
    columns: dict[str, np.ndarray] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, values) -> None:
        values = np.asarray(values, dtype=float).reshape(-1)
        if self.columns:
            length = len(next(iter(self.columns.values())))
            if values.size != length:
                raise ValueError(f"column {name!r} has {values.size} rows, expected {length}")
        if name in self.columns:
            raise ValueError(f"duplicate column {name!r}")
        self.columns[name] = values

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def names(self) -> list[str]:
        return list(self.columns)


def _label(x: float) -> str:
    return f"{x:.6g}"


def cycle_experiment(n: int, thetas, t_max: float = 30.0, step: float = 0.01,
                     targets=None, start: int = 1) -> Table:
    """Transition probabilities and ``D_QC`` shifts on the uniformly phased ring.

    ``dD_QC`` is measured against the phase-free ring on the same grid.
    """
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    thetas = [float(t) for t in thetas]
    for theta in thetas:
        if not 0.0 <= theta <= TWO_PI / n + 1e-12:
            raise ValueError(f"theta={theta} outside [0, 2*pi/n]; other values are gauge copies")
    if targets is None:
        targets = [n // 2 + 1]
    targets = [int(k) for k in targets]
    for k in targets:
        if not 1 <= k <= n:
            raise ValueError(f"target {k} outside 1..{n}")
    grid = time_grid(t_max, step)
    lap = laplacian(cycle_graph(n))
    l_sd = hermitian_eig(lap)
    base = WalkPair(cycle_hamiltonian(n, 0.0), lap, l_sd=l_sd).dqc(start, grid)
    table = Table()
    table.add("t", grid)
    deltas = {}
    for theta in thetas:
        pair = WalkPair(cycle_hamiltonian(n, theta), lap, l_sd=l_sd)
        probs = np.abs(pair.amplitudes(start, grid)) ** 2
        for k in targets:
            table.add(f"P_{start}->{k}|theta={_label(theta)}", probs[:, k - 1])
        deltas[theta] = pair.dqc(start, grid) - base
    for theta, d in deltas.items():
        table.add(f"dD_QC|theta={_label(theta)}", d)
    return table


def _complete_reference(n: int, grid) -> tuple[WalkPair, np.ndarray]:
    g = complete_graph(n)
    pair = WalkPair(from_laplacian(g), laplacian(g))
    return pair, pair.dqc(1, grid)


def complete_experiment(n: int, mode: str, t_max: float = 1.0, step: float = 0.01,
                        seed: int = 0, samples: int = 400) -> Table:
    """Coherence, IPR and ``D_QC`` from vertex 1 on ``K_n``.

    ``laplacian`` is the non-chiral walk ``H = L``; ``appendix`` uses the
    explicit search Hamiltonian; ``grover`` uses ``L - n |1><1|`` and reports
    the walker started in the flat state (``P_1``, ``C``, ``I``) next to the
    ``D_QC`` of the walker started at vertex 1; ``ensemble:<rule>`` averages
    over random phases.
    """
    if n < 2:
        raise ValueError("complete graph needs n >= 2")
    if mode not in COMPLETE_MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(COMPLETE_MODES)}")
    grid = time_grid(t_max, step)
    ref_pair, ref_dqc = _complete_reference(n, grid)
    table = Table()
    table.add("t", grid)
    if mode.startswith("ensemble:"):
        spec = EnsembleSpec(mode.split(":", 1)[1], samples, seed)
        res = random_ensemble(complete_graph(n), spec, grid)
        table.add("C", res.coherence)
        table.add("C_se", res.coherence_se)
        table.add("I", res.ipr)
        table.add("I_se", res.ipr_se)
        table.add("D_QC", res.dqc)
        table.add("D_QC_se", res.dqc_se)
        table.add("dD_QC", res.dqc - ref_dqc)
        table.notes.append(f"rule={spec.rule} samples={spec.samples} seed={spec.seed}")
        return table
    if mode == "grover":
        hg = grover_hamiltonian(n)
        psi = evolve_state(hg, flat_state(n), grid)
        pair = WalkPair(hg, ref_pair.lap, l_sd=ref_pair.l_sd)
        dqc = pair.dqc(1, grid)
        table.add("P_1", np.abs(psi[:, 0]) ** 2)
        table.add("C", coherence_l1(psi))
        table.add("I", ipr(psi))
        table.add("D_QC", dqc)
        table.add("dD_QC", dqc - ref_dqc)
        table.notes.append(f"t_g={grover_time(n):.15g}")
        return table
    pair = ref_pair if mode == "laplacian" else WalkPair(optimal_hamiltonian(n), ref_pair.lap, l_sd=ref_pair.l_sd)
    series = pair.series(grid, 1, all_starts=False)
    table.add("C", series.coherence)
    table.add("I", series.ipr)
    table.add("D_QC", series.dqc)
    table.add("dD_QC", series.dqc - ref_dqc)
    table.notes.append(f"t_f={flat_time(n):.15g}")
    return table


def search_scaling(n_min: int = 3, n_max: int = 50) -> Table:
    if not 3 <= n_min <= n_max:
        raise ValueError("need 3 <= n_min <= n_max")
    rows = [search_times(n) for n in range(n_min, n_max + 1)]
    table = Table()
    table.add("n", [r.n for r in rows])
    table.add("t_f", [r.t_f for r in rows])
    table.add("t_g", [r.t_g for r in rows])
    table.add("t_h", [r.t_h for r in rows])
    table.add("tau_qsl", [r.tau_qsl for r in rows])
    return table


def switch_hamiltonian(mode: str, phi: float) -> PhasedHamiltonian:
    """Switch Hamiltonian with phase ``phi`` on the triangle link 5 -> 6."""
    if mode not in ("adjacency", "laplacian"):
        raise ValueError(f"unknown switch mode {mode!r}")
    return with_convention(switch_graph(), {SWITCH_PHASE_EDGE: phi}, mode)


def switch_experiment(mode: str = "adjacency", phis=SWITCH_PHI_GRID, t_max: float = 6.0,
                      step: float = 0.01) -> Table:
    """Output-arm probabilities and the shift of ``max_j D_QC^j`` on the switch."""
    phis = [float(p) for p in phis]
    for phi in phis:
        if not -1e-12 <= phi <= np.pi / 2 + 1e-12:
            raise ValueError(f"phi={phi} outside [0, pi/2]")
    grid = time_grid(t_max, step)
    lap = laplacian(switch_graph())
    l_sd = hermitian_eig(lap)
    base = WalkPair(switch_hamiltonian(mode, 0.0), lap, l_sd=l_sd).dqc_all(grid).max(axis=0)
    table = Table()
    table.add("t", grid)
    deltas = {}
    for phi in phis:
        pair = WalkPair(switch_hamiltonian(mode, phi), lap, l_sd=l_sd)
        probs = np.abs(pair.amplitudes(1, grid)) ** 2
        table.add(f"P_1->11|phi={_label(phi)}", probs[:, 10])
        table.add(f"P_1->12|phi={_label(phi)}", probs[:, 11])
        deltas[phi] = pair.dqc_all(grid).max(axis=0) - base
    for phi, d in deltas.items():
        table.add(f"dD_QC|phi={_label(phi)}", d)
    return table


def cube_experiment(phases=None, t_max: float = 20.0, step: float = 0.01) -> Table:
    """Walk on the cube from vertex 1, with optional edge phases.

    Zero-diagonal hoppings are used; the cube is regular, so this only shifts
    a global phase relative to ``H = L``. Notes list the largest probability
    reached at every vertex.
    """
    g = hypercube_graph(3)
    h = from_adjacency(g) if phases is None else PhasedHamiltonian(g, phases, 0.0, "adjacency")
    grid = time_grid(t_max, step)
    pair = WalkPair(h, laplacian(g))
    probs = np.abs(pair.amplitudes(1, grid)) ** 2
    table = Table()
    table.add("t", grid)
    for k in range(1, g.n + 1):
        table.add(f"P_1->{k}", probs[:, k - 1])
    table.add("D_QC", pair.dqc(1, grid))
    for k in range(1, g.n + 1):
        where = "neighbor" if g.has_edge(1, k) else ("start" if k == 1 else "non-adjacent")
        table.notes.append(f"max_P vertex={k} ({where}) value={probs[:, k - 1].max():.15g}")
    return table


def optimum_series(result: OptimizationResult, t_max: float = 1.0, step: float = 0.01) -> Table:
    """Metric series of an optimised Hamiltonian against the phase-free one."""
    g: Graph = result.graph
    grid = time_grid(t_max, step)
    lap = laplacian(g)
    l_sd = hermitian_eig(lap)
    pair = WalkPair(result.hamiltonian(), lap, l_sd=l_sd)
    series = pair.series(grid, result.start, all_starts=True)
    base = WalkPair(from_adjacency(g), lap, l_sd=l_sd).dqc(result.start, grid)
    table = Table()
    table.add("t", grid)
    table.add("D_QC", series.dqc)
    table.add("D_QC_max", series.dqc_max)
    table.add("C", series.coherence)
    table.add("I", series.ipr)
    table.add("dD_QC", series.dqc - base)
    return table


def ensemble_experiment(g: Graph, rules=ENSEMBLE_RULES, samples: int = 400, seed: int = 0,
                        t_max: float = 1.0, step: float = 0.01, start: int = 1) -> Table:
    """Random-phase averages for several rules next to the ``H = L`` walk.

    Every rule uses its own generator seeded with ``seed``, so adding or
    dropping a rule does not change the others.
    """
    grid = time_grid(t_max, step)
    lap = laplacian(g)
    ref = WalkPair(from_laplacian(g), lap).series(grid, start, all_starts=False)
    table = Table()
    table.add("t", grid)
    table.add("C|L", ref.coherence)
    table.add("I|L", ref.ipr)
    table.add("D_QC|L", ref.dqc)
    for rule in rules:
        res = random_ensemble(g, EnsembleSpec(rule, samples, seed), grid, start)
        table.add(f"C|{rule}", res.coherence)
        table.add(f"C_se|{rule}", res.coherence_se)
        table.add(f"I|{rule}", res.ipr)
        table.add(f"I_se|{rule}", res.ipr_se)
        table.add(f"D_QC|{rule}", res.dqc)
        table.add(f"D_QC_se|{rule}", res.dqc_se)
        table.add(f"dD_QC|{rule}", res.dqc - ref.dqc)
    return table
