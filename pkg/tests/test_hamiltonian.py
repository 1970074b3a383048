from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiralwalk.graphs import complete_graph, cycle_graph, laplacian, star_graph, switch_graph
from chiralwalk.hamiltonian import (
    PhasedHamiltonian,
    angle_distance,
    apply_gauge,
    condition1_residual,
    cycle_from_link_phases,
    cycle_hamiltonian,
    cycle_holonomies,
    from_laplacian,
    gauge_to_tree,
    is_gauge_real,
    reduce_cycle_phases,
    with_convention,
)
from chiralwalk.closed_forms import appendix_even, appendix_odd
from chiralwalk.propagation import transition_probabilities


def test_laplacian_convention_reproduces_l():
    g = complete_graph(2)
    assert np.allclose(from_laplacian(g).matrix, [[1, -1], [-1, 1]])
    sw = switch_graph()
    assert np.allclose(from_laplacian(sw).matrix, laplacian(sw))


def test_adjacency_convention_on_square():
    h = with_convention(cycle_graph(4), None, "adjacency")
    expected = np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]])
    assert np.allclose(h.matrix, expected)


def test_switch_conventions_differ_only_on_diagonal():
    g = switch_graph()
    phases = np.linspace(0.1, 1.2, g.num_edges)
    a = with_convention(g, phases, "adjacency").matrix
    lap = with_convention(g, phases, "laplacian").matrix
    off = ~np.eye(12, dtype=bool)
    # same hopping magnitudes and the same loop flux up to the sign convention
    assert np.allclose(np.abs(a[off]), np.abs(lap[off]))
    assert np.allclose(np.diag(lap), g.degrees())
    assert np.allclose(np.diag(a), 0)


def test_matrix_is_hermitian_and_read_only(rng):
    g = complete_graph(5)
    h = PhasedHamiltonian(g, rng.uniform(0, 6.3, g.num_edges), 0.3)
    m = h.matrix
    assert np.allclose(m, m.conj().T)
    with pytest.raises(ValueError):
        m[0, 0] = 1.0


def test_mapping_direction():
    g = cycle_graph(4)
    h = PhasedHamiltonian(g, {(4, 1): 0.7})
    assert np.isclose(h.matrix[3, 0], np.exp(0.7j))
    assert np.isclose(h.matrix[0, 3], np.exp(-0.7j))
    with pytest.raises(ValueError):
        PhasedHamiltonian(g, {(1, 3): 0.1})


def test_wrong_phase_count_rejected():
    with pytest.raises(ValueError):
        PhasedHamiltonian(cycle_graph(5), [0.1, 0.2])


def test_cycle_hamiltonian_examples():
    assert np.allclose(cycle_hamiltonian(6, 0.0).matrix, with_convention(cycle_graph(6), None, "adjacency").matrix)
    n, theta = 5, np.pi / 10
    m = cycle_hamiltonian(n, theta).matrix
    loop = np.prod([m[j, (j + 1) % n] for j in range(n)])
    assert np.isclose(loop, np.exp(1j * n * theta))


def test_identity_gauge():
    h = cycle_hamiltonian(5, 0.3)
    assert np.allclose(apply_gauge(h, np.zeros(5)).matrix, h.matrix)


def test_gauge_concentrates_ring_phase_on_closing_link():
    theta = np.pi / 8
    h = cycle_hamiltonian(4, theta)
    g = apply_gauge(h, theta * np.arange(1, 5))
    m = g.matrix
    assert np.allclose([m[0, 1], m[1, 2], m[2, 3]], 1.0)
    assert np.isclose(m[3, 0], 1j)


def test_gauge_is_diagonal_conjugation(rng):
    g = switch_graph()
    h = PhasedHamiltonian(g, rng.uniform(0, 6.3, g.num_edges), 0.0)
    chi = rng.uniform(0, 6.3, g.n)
    d = np.diag(np.exp(1j * chi))
    assert np.allclose(apply_gauge(h, chi).matrix, d @ h.matrix @ d.conj().T)


def test_gauge_leaves_transition_probabilities(rng):
    g = complete_graph(6)
    h = PhasedHamiltonian(g, rng.uniform(0, 6.3, g.num_edges), 0.0)
    grid = np.linspace(0, 5, 11)
    for _ in range(5):
        hg = apply_gauge(h, rng.uniform(0, 6.3, g.n))
        for start in (1, 4):
            assert np.allclose(transition_probabilities(h, start, grid),
                               transition_probabilities(hg, start, grid), atol=1e-12)


def test_reduce_cycle_phases():
    assert np.isclose(reduce_cycle_phases([0.3] * 6), 0.3)
    theta = reduce_cycle_phases([np.pi, 0, 0, 0, 0])
    assert np.isclose(theta, np.pi / 5)
    a = transition_probabilities(cycle_from_link_phases([np.pi, 0, 0, 0, 0]), 1, [2.0])
    b = transition_probabilities(cycle_hamiltonian(5, theta), 1, [2.0])
    assert abs(a[0, 2] - b[0, 2]) < 1e-10
    assert reduce_cycle_phases([1.0, -0.4, -0.6, 2 * np.pi]) == 0.0
    with pytest.raises(ValueError):
        reduce_cycle_phases([0.1, 0.2])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=3, max_size=9))
def test_reduced_ring_matches_link_phases(phis):
    n = len(phis)
    theta = reduce_cycle_phases(phis)
    assert 0.0 <= theta < 2 * np.pi / n + 1e-12
    grid = [0.0, 0.7, 2.3]
    a = transition_probabilities(cycle_from_link_phases(phis), 1, grid)
    b = transition_probabilities(cycle_hamiltonian(n, theta), 1, grid)
    assert np.allclose(a, b, atol=1e-10)


def test_gauge_reality_on_trees_and_rings(rng):
    star = star_graph(6)
    assert is_gauge_real(PhasedHamiltonian(star, rng.uniform(0, 6.3, star.num_edges)))
    assert not is_gauge_real(cycle_hamiltonian(6, np.pi / 6))
    assert is_gauge_real(cycle_hamiltonian(6, np.pi / 3))
    assert is_gauge_real(from_laplacian(switch_graph()))


def test_tree_gauge_zeroes_tree_edges(rng):
    g = complete_graph(5)
    h = PhasedHamiltonian(g, rng.uniform(0, 6.3, g.num_edges))
    fluxes = cycle_holonomies(h)
    gauged = apply_gauge(h, gauge_to_tree(h)).phase_map()
    for edge, phi in gauged.items():
        if edge not in fluxes:
            assert angle_distance(phi, 0.0) < 1e-12
    # fluxes are gauge invariant
    again = cycle_holonomies(apply_gauge(h, rng.uniform(0, 6.3, g.n)))
    for edge in fluxes:
        assert angle_distance(fluxes[edge], again[edge]) < 1e-10


def test_text_round_trip(tmp_path, rng):
    g = switch_graph()
    for h in (PhasedHamiltonian(g, rng.uniform(0, 6.3, 12), rng.normal(size=12)),
              with_convention(g, rng.uniform(0, 6.3, 12), "laplacian"),
              with_convention(g, None, "constant", 1.5)):
        path = tmp_path / "h.txt"
        h.save(path)
        back = PhasedHamiltonian.load(path)
        assert np.array_equal(back.matrix, h.matrix)


def test_condition1_residual_examples():
    assert condition1_residual(appendix_even(6)) < 1e-12
    assert condition1_residual(appendix_odd(5)) <= 1e-12
    for n in (3, 5, 8):
        assert np.isclose(condition1_residual(from_laplacian(complete_graph(n))), n - 2)
    with pytest.raises(ValueError):
        condition1_residual(cycle_hamiltonian(5, 0.1))


def test_condition1_residual_is_gauge_covariant(rng):
    h = appendix_even(8)
    assert condition1_residual(apply_gauge(h, rng.uniform(0, 6.3, 8))) < 1e-12
