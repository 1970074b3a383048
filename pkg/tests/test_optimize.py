from __future__ import annotations

import numpy as np
import pytest

from chiralwalk.closed_forms import appendix_even
from chiralwalk.graphs import complete_graph, cycle_graph, hypercube_graph, laplacian
from chiralwalk.hamiltonian import TWO_PI, PhasedHamiltonian, angle_distance, apply_gauge, cycle_holonomies, from_laplacian
from chiralwalk.metrics import dqc_at, metric_series
from chiralwalk.optimize import (
    BudgetExhausted,
    DqcObjective,
    EnsembleSpec,
    OptimizerConfig,
    objective_dqc,
    optimize_phases,
    random_ensemble,
)
from chiralwalk.propagation import time_grid, transition_probabilities


def test_zero_phases_reproduce_laplacian_walk():
    g = complete_graph(13)
    ref = dqc_at(from_laplacian(g), laplacian(g), 1, 0.3)
    assert objective_dqc(g, np.zeros(g.num_edges), 1, 0.3) == pytest.approx(ref, abs=1e-12)


def test_appendix_phases_beat_zero_phases():
    g = complete_graph(6)
    best = objective_dqc(g, appendix_even(6).phases, 1, 0.4)
    assert best > objective_dqc(g, np.zeros(15), 1, 0.4)


def test_sign_flips_objective(rng):
    g = hypercube_graph(3)
    x = rng.uniform(0, TWO_PI, 12)
    assert objective_dqc(g, x, sign=-1) == -objective_dqc(g, x, sign=1)


def test_objective_is_gauge_invariant(rng):
    g = complete_graph(7)
    fun = DqcObjective(g, 1, 0.3)
    h = PhasedHamiltonian(g, rng.uniform(0, TWO_PI, g.num_edges))
    moved = apply_gauge(h, rng.uniform(0, TWO_PI, g.n))
    assert fun(h.phases) == pytest.approx(fun(moved.phases), abs=1e-12)


def test_objective_validation():
    with pytest.raises(ValueError):
        DqcObjective(complete_graph(4), t_star=0.0)
    with pytest.raises(ValueError):
        DqcObjective(complete_graph(4), sign=2)


@pytest.mark.parametrize("n", [5, 6, 8])
def test_maximisation_meets_orthogonality(n):
    res = optimize_phases(complete_graph(n), 1, 0.3, 1, OptimizerConfig(seed=0))
    assert res.converged
    assert res.residual <= 1e-3
    assert res.objective >= max(res.restart_objectives) - 1e-12


def test_nelder_mead_also_finds_optimum():
    res = optimize_phases(complete_graph(5), 1, 0.3, 1, OptimizerConfig(method="nelder-mead", restarts=4))
    assert res.residual <= 1e-3


def test_result_not_worse_than_initial_points():
    g = complete_graph(5)
    cfg = OptimizerConfig(restarts=3, seed=7)
    res = optimize_phases(g, 1, 0.3, 1, cfg)
    draws = np.random.default_rng(7)
    fun = DqcObjective(g, 1, 0.3)
    starts = [fun(draws.uniform(0.0, TWO_PI, g.num_edges)) for _ in range(3)]
    assert res.objective >= max(starts)


def test_optimisation_is_deterministic():
    g = cycle_graph(6)
    a = optimize_phases(g, 1, 1.5, 1, OptimizerConfig(restarts=3, seed=11))
    b = optimize_phases(g, 1, 1.5, 1, OptimizerConfig(restarts=3, seed=11))
    assert np.array_equal(a.best, b.best)
    assert a.to_text() == b.to_text()


def test_cube_minimisation_suppresses_far_vertices():
    g = hypercube_graph(3)
    res = optimize_phases(g, 1, 0.5, -1, OptimizerConfig(seed=0))
    p = transition_probabilities(res.hamiltonian(), 1, time_grid(20.0, 0.01))
    far = [v for v in range(2, 9) if not g.has_edge(1, v)]
    assert p[:, np.array(far) - 1].max() <= 1e-6


def test_ring_minimisation_recovers_pi_flux():
    # the 8-ring dip of D_QC sits near t = 5.36
    res = optimize_phases(cycle_graph(8), 1, 5.36, -1, OptimizerConfig(seed=0))
    (flux,) = cycle_holonomies(res.hamiltonian()).values()
    assert angle_distance(flux, np.pi) < 1e-3


def test_ring_minimisation_before_the_dip_keeps_zero_flux():
    # at t = 2 any flux raises D_QC, so the minimiser returns the real ring
    res = optimize_phases(cycle_graph(8), 1, 2.0, -1, OptimizerConfig(seed=0, restarts=4))
    (flux,) = cycle_holonomies(res.hamiltonian()).values()
    assert angle_distance(flux, 0.0) < 1e-3


def test_budget_handling():
    g = complete_graph(6)
    res = optimize_phases(g, config=OptimizerConfig(budget=50))
    assert not res.converged and res.evaluations == 50
    with pytest.raises(BudgetExhausted) as info:
        optimize_phases(g, config=OptimizerConfig(budget=50, strict=True))
    assert info.value.result.evaluations == 50
    with pytest.raises(ValueError):
        optimize_phases(g, config=OptimizerConfig(method="anneal"))


def test_config_parsing(tmp_path):
    path = tmp_path / "opt.cfg"
    path.write_text("# comment\nmethod = nelder-mead\nrestarts=3\nstrict=yes\nstep-tol=1e-5\n")
    cfg = OptimizerConfig.from_file(path)
    assert (cfg.method, cfg.restarts, cfg.strict, cfg.step_tol) == ("nelder-mead", 3, True, 1e-5)
    with pytest.raises(ValueError):
        OptimizerConfig.from_text("temperature=3")


def test_trace_is_increasing():
    res = optimize_phases(complete_graph(4), config=OptimizerConfig(restarts=2))
    evals = [e for e, _ in res.trace]
    values = [v for _, v in res.trace]
    assert evals == sorted(evals) and values == sorted(values)
    assert values[-1] == pytest.approx(res.objective, abs=1e-12)


def test_ensemble_spec_rules(rng):
    assert len(set(EnsembleSpec("single").draw(10, rng))) == 1
    assert len(set(EnsembleSpec("two").draw(50, rng))) == 2
    assert len(set(EnsembleSpec("independent").draw(10, rng))) == 10
    with pytest.raises(ValueError):
        EnsembleSpec("three")
    with pytest.raises(ValueError):
        EnsembleSpec("single", samples=0)


def test_ensemble_reproducible():
    g = complete_graph(6)
    grid = time_grid(1.0, 0.1)
    a = random_ensemble(g, EnsembleSpec("independent", 1, 5), grid)
    b = random_ensemble(g, EnsembleSpec("independent", 1, 5), grid)
    assert np.array_equal(a.dqc, b.dqc) and np.array_equal(a.coherence, b.coherence)


def test_ensemble_seed_change_within_errors():
    g = complete_graph(8)
    grid = np.array([0.4])
    a = random_ensemble(g, EnsembleSpec("independent", 400, 0), grid)
    b = random_ensemble(g, EnsembleSpec("independent", 400, 1), grid)
    for name in ("coherence", "ipr", "dqc"):
        se = np.hypot(getattr(a, name + "_se"), getattr(b, name + "_se"))
        assert abs(getattr(a, name) - getattr(b, name))[0] <= 3 * se[0]


def test_optimum_beats_random_phases_on_coherence():
    n = 8
    g = complete_graph(n)
    res = optimize_phases(g, 1, 0.3, 1, OptimizerConfig(seed=0, restarts=4))
    grid = time_grid(1.0, 0.01)
    coh = metric_series(res.hamiltonian(), laplacian(g), grid, all_starts=False).coherence
    peak = int(np.argmax(np.diff(coh) < 0))
    ens = random_ensemble(g, EnsembleSpec("independent", 200, 0), grid[[peak]])
    assert coh[peak] > ens.coherence[0]
