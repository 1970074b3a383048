"""Analytic results for chiral walks on cycles and complete graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import complete_graph
from .hamiltonian import PhasedHamiltonian, apply_gauge
from .propagation import hermitian_eig

IMAG_TOL = 1e-10


def cycle_spectrum(n: int, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of the uniform-phase ring, ordered ``j = 1..n`` (not sorted).

    Column ``j - 1`` of the returned matrix is the Bloch state with entries
    ``exp(2 pi i j k / n) / sqrt(n)``; its eigenvalue is
    ``2 cos(theta + 2 pi j / n)``.
    """
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    j = np.arange(1, n + 1)
    eigenvalues = 2.0 * np.cos(theta + 2.0 * np.pi * j / n)
    k = np.arange(1, n + 1)
    vectors = np.exp(2j * np.pi * np.outer(k, j) / n) / np.sqrt(n)
    return eigenvalues, vectors


def cycle_transition_prob(n: int, theta: float, j: int, k: int, t):
    """``P_{j -> k}(t)`` on the ring from the Bloch-sum closed form."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    if not (1 <= j <= n and 1 <= k <= n):
        raise ValueError("vertices must lie in 1..n")
    t = np.asarray(t, dtype=float)
    s = np.arange(1, n + 1)
    arg = np.pi * (k - j) * s / n - np.multiply.outer(t, np.cos(theta + 2.0 * np.pi * s / n))
    amp = np.exp(2j * arg).sum(axis=-1)
    out = np.abs(amp) ** 2 / n**2
    return float(out) if out.ndim == 0 else out


def cycle_dqc_analytic(n: int, theta: float, t):
    """Quantum-classical distance on the ring, as a double sum over ``k, s``.

    The sum is evaluated in complex arithmetic; its imaginary part must
    vanish and an ``ArithmeticError`` is raised if it exceeds ``1e-10``.
    """
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    k = np.arange(1, n + 1)[:, None]
    s = np.arange(1, n + 1)[None, :]
    cos_k = np.cos(2.0 * np.pi * k / n)
    sin_ks = np.sin(theta + np.pi * (2 * s + k) / n) * np.sin(np.pi * k / n)
    tt = t[..., None, None]
    terms = np.exp(2.0 * tt * cos_k - 4j * tt * sin_ks)
    value = 1.0 - np.exp(-2.0 * t) / n**2 * terms.sum(axis=(-2, -1))
    if np.max(np.abs(np.imag(value)), initial=0.0) > IMAG_TOL:
        raise ArithmeticError("ring D_QC sum has a non-negligible imaginary part")
    out = np.real(value)
    return float(out) if out.ndim == 0 else out


def bessel_limit_prob(m: int, t: float) -> float:
    """Infinite-ring limit ``J_m(2t)^2`` of ``P_{j -> j+m}(t)``."""
    from scipy.special import jv

    return float(jv(m, 2.0 * t) ** 2)


def appendix_even(n: int) -> PhasedHamiltonian:
    """Zero-diagonal complete-graph Hamiltonian built from ``+-i`` (even ``n``).

    ``H[1, j] = i`` and ``H[j, k] = (-1)^(j+k) i`` for ``1 < j < k``.
    """
    if n % 2 or n < 2:
        raise ValueError(f"even construction needs an even n >= 2, got {n}")
    g = complete_graph(n)
    phases = []
    for j, k in g.edges:
        if j == 1:
            phases.append(np.pi / 2)
        else:
            phases.append(np.pi / 2 if (j + k) % 2 == 0 else -np.pi / 2)
    return PhasedHamiltonian(g, phases, 0.0, "adjacency")


def appendix_odd(n: int) -> PhasedHamiltonian:
    """Zero-diagonal complete-graph Hamiltonian for odd ``n >= 5``.

    ``H[1, j] = i`` and ``H[j, k] = exp(2 pi i (k - j + (n - 3) / 2) / (n - 2))``
    for ``1 < j < k``; each row below the first then sums to zero.
    """
    if n % 2 == 0 or n < 5:
        raise ValueError(f"odd construction needs an odd n >= 5, got {n}")
    g = complete_graph(n)
    phases = []
    for j, k in g.edges:
        if j == 1:
            phases.append(np.pi / 2)
        else:
            phases.append(2.0 * np.pi * (k - j + (n - 3) / 2) / (n - 2))
    return PhasedHamiltonian(g, phases, 0.0, "adjacency")


def appendix_hamiltonian(n: int) -> PhasedHamiltonian:
    return appendix_even(n) if n % 2 == 0 else appendix_odd(n)


def gauge_fix_first_column(h: PhasedHamiltonian) -> PhasedHamiltonian:
    """Gauge ``h`` so that every entry ``H[k, 1]``, ``k > 1``, equals ``i``."""
    col = h.matrix[:, 0]
    chi = np.zeros(h.n)
    chi[1:] = np.pi / 2 - np.angle(col[1:])
    return apply_gauge(h, chi)


def optimal_hamiltonian(n: int) -> PhasedHamiltonian:
    """Search Hamiltonian on ``K_n`` with first column all ``i``.

    For ``n >= 4`` it is the gauge-fixed explicit construction, whose first
    column is orthogonal to every other column. No such matrix exists on
    ``K_3``; there the triangle with every hopping equal to ``i`` is returned,
    which has the same first column and zero mean energy on the flat state.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if n == 3:
        g = complete_graph(3)
        h = PhasedHamiltonian(g, {(1, 2): np.pi / 2, (1, 3): np.pi / 2, (2, 3): np.pi / 2}, 0.0)
        return gauge_fix_first_column(h)
    return gauge_fix_first_column(appendix_hamiltonian(n))


def optimal_evolution_state(n: int, t: float) -> np.ndarray:
    """``exp(-i H t) e_1`` for a first-column-``i`` Hamiltonian satisfying the
    orthogonality condition: a rotation between ``e_1`` and the balanced
    state on the other sites."""
    if n < 2:
        raise ValueError("need n >= 2")
    w = np.sqrt(n - 1.0)
    h = np.full(n, 1j)
    h[0] = 0.0
    psi = -1j / w * np.sin(w * t) * h
    psi[0] = np.cos(w * t)
    return psi


def flat_state(n: int) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n), dtype=complex)


def flat_time(n: int) -> float:
    return float(np.arccos(1.0 / np.sqrt(n)) / np.sqrt(n - 1.0))


def orthogonal_time(n: int) -> float:
    return float(np.pi / (2.0 * np.sqrt(n - 1.0)))


def grover_time(n: int) -> float:
    return float(np.pi / (2.0 * np.sqrt(n)))


def grover_hamiltonian(n: int) -> np.ndarray:
    """``L - n |1><1|`` on the complete graph."""
    lap = n * np.eye(n) - np.ones((n, n))
    lap[0, 0] -= n
    return lap


def dqc_optimal_closed_form(n: int, t):
    """``D_QC`` from vertex 1 for the orthogonality-condition Hamiltonians on ``K_n``."""
    if n < 2:
        raise ValueError("need n >= 2")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    decay = np.exp(-n * t)
    out = 1.0 - (1.0 - decay) / n - decay * (1.0 + np.cos(2.0 * np.sqrt(n - 1.0) * t)) / 2.0
    return float(out) if out.ndim == 0 else out


def qsl_terms(h, a, b, energy_tol: float = 1e-9) -> tuple[float, float]:
    """The two speed-limit times for rotating ``a`` into ``b``.

    Returns ``(angle / dH, 2 angle^2 / (pi (<H> - E0)))`` with moments taken
    on ``a``. Both states must share the same mean energy.
    """
    hm = h.matrix if isinstance(h, PhasedHamiltonian) else np.asarray(h)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    ea = float(np.real(a.conj() @ hm @ a))
    eb = float(np.real(b.conj() @ hm @ b))
    if abs(ea - eb) > energy_tol:
        raise ValueError(f"states have different mean energies ({ea:.3g} vs {eb:.3g})")
    angle = float(np.arccos(min(1.0, abs(np.vdot(b, a)))))
    if angle == 0.0:
        return 0.0, 0.0
    ha = hm @ a
    spread = np.sqrt(max(0.0, float(np.real(np.vdot(ha, ha))) - ea**2))
    e0 = float(hermitian_eig(hm).eigenvalues[0])
    gap = ea - e0
    first = angle / spread if spread > 0 else np.inf
    second = 2.0 * angle**2 / (np.pi * gap) if gap > 0 else np.inf
    return float(first), float(second)


def qsl_bound(h, a, b) -> float:
    return max(qsl_terms(h, a, b))


@dataclass(frozen=True)
class SearchTimes:
    n: int
    t_f: float
    t_h: float
    t_g: float
    tau_qsl: float
    qsl_first: float
    qsl_second: float


def search_times(n: int) -> SearchTimes:
    """Flat-state, orthogonal-state and Grover times on ``K_n`` plus the speed
    limit between vertex 1 and the uniform flat state.

    The energy moments are taken on the localized state, where the spread is
    ``sqrt(n - 1)`` for every constant-diagonal Hamiltonian on ``K_n``. For
    ``n != 3`` the optimal Hamiltonian connects the two states, so the flat
    state has the same moments.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    h = optimal_hamiltonian(n)
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1.0
    first, second = qsl_terms(h, e1, flat_state(n))
    return SearchTimes(
        n=n,
        t_f=flat_time(n),
        t_h=orthogonal_time(n),
        t_g=grover_time(n),
        tau_qsl=max(first, second),
        qsl_first=first,
        qsl_second=second,
    )
