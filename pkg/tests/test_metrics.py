from __future__ import annotations

import numpy as np
import pytest

from chiralwalk.closed_forms import dqc_optimal_closed_form, optimal_hamiltonian
from chiralwalk.graphs import complete_graph, cycle_graph, hypercube_graph, laplacian, switch_graph
from chiralwalk.hamiltonian import PhasedHamiltonian, apply_gauge, cycle_hamiltonian, from_laplacian
from chiralwalk.metrics import (
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
from chiralwalk.propagation import time_grid

from oracles import brute_dqc


def test_coherence_and_ipr_examples():
    n = 7
    delta = np.eye(n)[0]
    flat = np.full(n, 1 / np.sqrt(n))
    pair = np.zeros(n)
    pair[:2] = 1 / np.sqrt(2)
    assert coherence_l1(delta) == 0.0
    assert np.isclose(coherence_l1(flat), n - 1)
    assert np.isclose(coherence_l1(pair), 1.0)
    assert ipr(delta) == 1.0
    assert np.isclose(ipr(flat), 1 / n)
    assert np.isclose(ipr(pair), 0.5)
    # phases do not matter
    assert np.isclose(coherence_l1(flat * np.exp(1j * np.arange(n))), n - 1)


def test_dqc_against_power_series(rng):
    g = switch_graph()
    h = PhasedHamiltonian(g, rng.uniform(0, 6.3, g.num_edges), 0.0)
    lap = laplacian(g)
    for start, t in ((1, 0.5), (6, 2.0)):
        assert np.isclose(dqc_at(h, lap, start, t), brute_dqc(h.matrix, lap, start, t), atol=1e-10)


def test_dqc_zero_at_start_and_asymptote():
    for g in (cycle_graph(9), complete_graph(6), hypercube_graph(3)):
        lap = laplacian(g)
        h = from_laplacian(g)
        assert abs(dqc_at(h, lap, 1, 0.0)) < 1e-14
        # the quantum walk keeps oscillating, so only the classical side settles
        assert abs(dqc_at(h, lap, 1, 100 / g.n) - (1 - 1 / g.n)) < 2e-2
    with pytest.raises(ValueError):
        dqc_at(from_laplacian(cycle_graph(5)), laplacian(cycle_graph(5)), 1, -1.0)


def test_dqc_matches_optimal_closed_form():
    n = 6
    grid = time_grid(3.0, 0.05)
    got = dqc_series(optimal_hamiltonian(n), laplacian(complete_graph(n)), 1, grid)
    assert np.allclose(got, dqc_optimal_closed_form(n, grid), atol=1e-9)


def test_max_over_starts():
    grid = time_grid(4.0, 0.1)
    for h in (cycle_hamiltonian(7, 0.2), from_laplacian(complete_graph(5)), from_laplacian(hypercube_graph(3))):
        lap = laplacian(h.graph)
        assert np.allclose(dqc_max(h, lap, grid), dqc_series(h, lap, 1, grid), atol=1e-12)
    g = switch_graph()
    lap = laplacian(g)
    h = PhasedHamiltonian(g, {(5, 6): 1.0})
    per = WalkPair(h, lap).dqc_all(grid)
    top = dqc_max(h, lap, grid)
    assert np.all(top >= per - 1e-15)
    assert top[0] == pytest.approx(0.0, abs=1e-14)
    assert len(set(per.argmax(axis=0)[1:])) > 1


def test_walk_pair_topology_check():
    with pytest.raises(ValueError):
        WalkPair(from_laplacian(cycle_graph(5)), laplacian(complete_graph(5)))
    with pytest.raises(ValueError):
        WalkPair(from_laplacian(cycle_graph(5)), laplacian(cycle_graph(6)))


def test_metric_series_fields():
    g = hypercube_graph(3)
    s = metric_series(from_laplacian(g), laplacian(g), time_grid(1.0, 0.1), start=2)
    assert s.dqc_per_start.shape == (8, 11)
    assert np.allclose(s.dqc, s.dqc_per_start[1])
    assert np.allclose(s.site_probs.sum(axis=1), 1)
    assert s.ipr[0] == pytest.approx(1.0) and s.coherence[0] == pytest.approx(0.0, abs=1e-14)


def test_gauge_invariance_of_series(rng):
    g = complete_graph(6)
    lap = laplacian(g)
    grid = time_grid(3.0, 0.05)
    h = PhasedHamiltonian(g, rng.uniform(0, 6.3, g.num_edges))
    ref = metric_series(h, lap, grid)
    hg = apply_gauge(h, rng.uniform(0, 6.3, g.n))
    got = metric_series(hg, lap, grid)
    for name in ("dqc_per_start", "coherence", "ipr"):
        assert np.allclose(getattr(ref, name), getattr(got, name), atol=1e-10)


def test_delta_dqc_basics():
    grid = time_grid(5.0, 0.1)
    h = cycle_hamiltonian(8, 0.3)
    lap = laplacian(cycle_graph(8))
    assert np.allclose(delta_dqc(h, h, lap, grid), 0)
    with pytest.raises(ValueError):
        delta_dqc(h, h, lap, grid, grid0=time_grid(5.0, 0.05))
    with pytest.raises(ValueError):
        delta_dqc(h, cycle_hamiltonian(9, 0.0), lap, grid)


def _extreme(n, thetas, t_max, sign):
    grid = time_grid(t_max, 0.01)
    lap = laplacian(cycle_graph(n))
    base = cycle_hamiltonian(n, 0.0)
    return [sign * (sign * delta_dqc(cycle_hamiltonian(n, th), base, lap, grid)).max() for th in thetas]


def test_even_ring_dip_deepens_with_flux():
    dips = _extreme(10, np.linspace(0, np.pi / 10, 5), 30.0, -1)
    assert dips[-1] < 0
    assert all(b < a for a, b in zip(dips[1:], dips[2:]))
    assert dips[1] < dips[0] + 1e-15


def test_odd_ring_peak_rises_with_flux():
    peaks = _extreme(7, np.linspace(0, np.pi / 14, 5), 30.0, 1)
    assert peaks[-1] > 0
    assert all(b > a for a, b in zip(peaks[1:], peaks[2:]))


def test_short_time_coefficients_examples():
    for n in (5, 8, 11):
        c = short_time_coeffs(cycle_hamiltonian(n, 0.37), 1)
        assert (c.dqc_linear, c.dqc_quadratic) == (2, -1)
        assert c.two_step_interference == pytest.approx(2.0)
        assert c.coh_quadratic == pytest.approx(4.0)
    c = short_time_coeffs(from_laplacian(complete_graph(9)), 3)
    assert c.dqc_linear == 8
    flat = short_time_coeffs(cycle_hamiltonian(4, 0.0), 1)
    twisted = short_time_coeffs(cycle_hamiltonian(4, np.pi / 4), 1)
    assert flat.two_step_interference == pytest.approx(2.0)
    assert twisted.two_step_interference == pytest.approx(0.0, abs=1e-12)
    assert flat.coh_quadratic != pytest.approx(twisted.coh_quadratic)


@pytest.mark.parametrize("make", [
    lambda: (cycle_hamiltonian(9, 0.21), cycle_graph(9)),
    lambda: (PhasedHamiltonian(hypercube_graph(3), np.linspace(0, 3, 12)), hypercube_graph(3)),
    lambda: (from_laplacian(complete_graph(13)), complete_graph(13)),
])
def test_short_time_expansions_hold(make):
    h, g = make()
    lap = laplacian(g)
    c = short_time_coeffs(h, 1)
    for t in (1e-3, 2e-3):
        s = metric_series(h, lap, [t], all_starts=False)
        assert abs(s.dqc[0] - c.dqc(t)) < 50 * t**3 * g.n
        assert abs(s.coherence[0] - c.coherence(t)) < 50 * t**3 * g.n**2
        assert abs(s.ipr[0] - c.ipr(t)) < 50 * t**3 * g.n


def test_short_time_requires_unit_hoppings():
    m = PhasedHamiltonian(cycle_graph(4)).matrix
    assert short_time_coeffs(m, 1).degree == 2
    with pytest.raises(ValueError):
        short_time_coeffs(2.0 * m, 1)
