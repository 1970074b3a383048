"""Quantum and classical propagators built on one spectral factorisation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .hamiltonian import PhasedHamiltonian

HERMITIAN_TOL = 1e-12


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralDecomposition:
    """``M = V diag(eigenvalues) V^dagger`` with ascending real eigenvalues."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply_function(self, values: np.ndarray) -> np.ndarray:
        """``V diag(values) V^dagger`` for a function already evaluated on the spectrum."""
        v = self.eigenvectors
        return (v * values) @ v.conj().T


def hermitian_eig(m) -> SpectralDecomposition:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    try:
        w, v = linalg.eigh(m, driver="evd" if m.shape[0] > 1 else None)
    except linalg.LinAlgError as exc:
        raise EigensolverError(f"Hermitian eigensolver did not converge: {exc}") from exc
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=complex)
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v)


def _as_matrix(h) -> np.ndarray:
    return h.matrix if isinstance(h, PhasedHamiltonian) else np.asarray(h)


def decompose(h) -> SpectralDecomposition:
    return hermitian_eig(_as_matrix(h))


def quantum_propagator(sd: SpectralDecomposition, t: float) -> np.ndarray:
    """``exp(-i H t)``."""
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    return sd.apply_function(np.exp(-1j * sd.eigenvalues * t))


def classical_propagator(lap, t: float, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """``exp(-t L)``; column ``j`` is the distribution of a walker started at ``j``."""
    if t < 0:
        raise ValueError("the classical semigroup is only defined for t >= 0")
    if sd is None:
        sd = hermitian_eig(np.asarray(lap, dtype=float))
    p = sd.apply_function(np.exp(-sd.eigenvalues * t)).real
    return np.clip(p, 0.0, None)


def _check_grid(grid) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.ndim != 1:
        raise ValueError("time grid must be one-dimensional")
    if np.any(grid < 0):
        raise ValueError("time grid must be non-negative")
    if np.any(np.diff(grid) < 0):
        raise ValueError("time grid must be ascending")
    return grid


def evolve_localized(h, start: int, grid, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """Amplitudes ``alpha_{k, start}(t)`` for each ``t`` in ``grid``.

    Returns an array of shape ``(len(grid), n)``; row ``i`` is the state at
    ``grid[i]``. One eigendecomposition serves the whole grid.
    """
    grid = _check_grid(grid)
    if sd is None:
        sd = decompose(h)
    if not 1 <= start <= sd.n:
        raise ValueError(f"start vertex {start} outside 1..{sd.n}")
    v = sd.eigenvectors
    coeff = v[start - 1, :].conj()
    phases = np.exp(-1j * np.outer(grid, sd.eigenvalues))
    return (phases * coeff) @ v.T


def evolve_state(h, psi0, grid, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """Like :func:`evolve_localized` for an arbitrary initial state."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if sd is None:
        sd = decompose(h)
    v = sd.eigenvectors
    coeff = v.conj().T @ np.asarray(psi0, dtype=complex)
    phases = np.exp(-1j * np.outer(grid, sd.eigenvalues))
    return (phases * coeff) @ v.T


def classical_localized(lap, start: int, grid, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """Probabilities ``p_{k, start}(t)``, shape ``(len(grid), n)``."""
    grid = _check_grid(grid)
    if sd is None:
        sd = hermitian_eig(np.asarray(lap, dtype=float))
    if not 1 <= start <= sd.n:
        raise ValueError(f"start vertex {start} outside 1..{sd.n}")
    v = sd.eigenvectors
    coeff = v[start - 1, :].conj()
    decay = np.exp(-np.outer(grid, sd.eigenvalues))
    return np.clip(((decay * coeff) @ v.T).real, 0.0, None)


def transition_probabilities(h, start: int, grid, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """``P_{start -> k}(t)``, shape ``(len(grid), n)``."""
    return np.abs(evolve_localized(h, start, grid, sd)) ** 2


def time_grid(t_max: float, step: float = 0.01) -> np.ndarray:
    """Uniform grid ``0, step, ..., t_max`` (inclusive, up to rounding)."""
    if t_max <= 0 or step <= 0:
        raise ValueError("t_max and step must be positive")
    count = int(np.floor(t_max / step + 1e-9))
    return step * np.arange(count + 1)


def taylor_expm(a, terms: int = 30) -> np.ndarray:
    """Matrix exponential by scaling and squaring a truncated Taylor series.

    Independent of the eigensolver; used to cross-check the propagators.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    b = a / 2.0**squarings
    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ b / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result
