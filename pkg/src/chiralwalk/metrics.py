"""Quantum-classical distance, 1-norm coherence and IPR of localized walks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import PhasedHamiltonian
from .propagation import (
    SpectralDecomposition,
    _check_grid,
    classical_localized,
    decompose,
    evolve_localized,
    hermitian_eig,
)


def coherence_l1(amps) -> np.ndarray | float:
    """``(sum_k |alpha_k|)^2 - 1``; works row-wise on a stack of states."""
    amps = np.asarray(amps)
    out = np.sum(np.abs(amps), axis=-1) ** 2 - 1.0
    return float(out) if out.ndim == 0 else out


def ipr(amps) -> np.ndarray | float:
    """``sum_k |alpha_k|^4``; works row-wise on a stack of states."""
    amps = np.asarray(amps)
    out = np.sum(np.abs(amps) ** 4, axis=-1)
    return float(out) if out.ndim == 0 else out


def dqc_from_distributions(p_classical, p_quantum) -> np.ndarray | float:
    out = 1.0 - np.sum(np.asarray(p_classical) * np.asarray(p_quantum), axis=-1)
    return float(out) if out.ndim == 0 else out


class WalkPair:
    """A quantum Hamiltonian and its classical Laplacian, factorised once.

    Most experiments evaluate many metrics on one ``(H, L)`` pair; building
    this object keeps the two eigendecompositions around.
    """

    def __init__(self, h, lap, h_sd: SpectralDecomposition | None = None,
                 l_sd: SpectralDecomposition | None = None) -> None:
        hm = h.matrix if isinstance(h, PhasedHamiltonian) else np.asarray(h)
        lap = np.asarray(lap, dtype=float)
        if hm.shape != lap.shape:
            raise ValueError("Hamiltonian and Laplacian sizes differ")
        if isinstance(h, PhasedHamiltonian):
            off = np.abs(hm) > 0.5
            np.fill_diagonal(off, False)
            if not np.array_equal(off, lap < -0.5):
                raise ValueError("Hamiltonian and Laplacian are not on the same graph")
        self.h = h
        self.lap = lap
        self.n = lap.shape[0]
        self.h_sd = h_sd if h_sd is not None else decompose(h)
        self.l_sd = l_sd if l_sd is not None else hermitian_eig(lap)

    def amplitudes(self, start: int, grid) -> np.ndarray:
        return evolve_localized(self.h, start, grid, self.h_sd)

    def classical(self, start: int, grid) -> np.ndarray:
        return classical_localized(self.lap, start, grid, self.l_sd)

    def dqc(self, start: int, grid) -> np.ndarray:
        grid = _check_grid(grid)
        q = np.abs(self.amplitudes(start, grid)) ** 2
        return dqc_from_distributions(self.classical(start, grid), q)

    def dqc_all(self, grid) -> np.ndarray:
        """``D_QC^j(t)`` for every start, shape ``(n, len(grid))``."""
        grid = _check_grid(grid)
        return np.array([self.dqc(j, grid) for j in range(1, self.n + 1)])

    def series(self, grid, start: int = 1, all_starts: bool = True) -> "MetricSeries":
        grid = _check_grid(grid)
        amps = self.amplitudes(start, grid)
        q = np.abs(amps) ** 2
        if all_starts:
            per_start = self.dqc_all(grid)
        else:
            per_start = dqc_from_distributions(self.classical(start, grid), q)[None, :]
        return MetricSeries(
            grid=grid,
            start=start,
            dqc_per_start=per_start,
            dqc_max=per_start.max(axis=0),
            coherence=coherence_l1(amps),
            ipr=ipr(amps),
            site_probs=q,
        )


@dataclass(frozen=True)
class MetricSeries:
    """Time series of the walk indicators on a shared grid.

    ``dqc_per_start`` has one row per start vertex (a single row when only
    ``start`` was evaluated). ``coherence``, ``ipr`` and ``site_probs`` refer
    to the walk from ``start``.
    """

    grid: np.ndarray
    start: int
    dqc_per_start: np.ndarray
    dqc_max: np.ndarray
    coherence: np.ndarray
    ipr: np.ndarray
    site_probs: np.ndarray

    @property
    def dqc(self) -> np.ndarray:
        """``D_QC`` from ``start`` (row ``start - 1``, or the single row)."""
        if self.dqc_per_start.shape[0] == 1:
            return self.dqc_per_start[0]
        return self.dqc_per_start[self.start - 1]


def dqc_at(h, lap, start: int, t: float) -> float:
    if t < 0:
        raise ValueError("D_QC is only defined for t >= 0")
    return float(WalkPair(h, lap).dqc(start, [t])[0])


def dqc_series(h, lap, start: int, grid) -> np.ndarray:
    return WalkPair(h, lap).dqc(start, grid)


def dqc_max(h, lap, grid) -> np.ndarray:
    """``max_j D_QC^j(t)`` on ``grid``."""
    return WalkPair(h, lap).dqc_all(grid).max(axis=0)


def metric_series(h, lap, grid, start: int = 1, all_starts: bool = True) -> MetricSeries:
    return WalkPair(h, lap).series(grid, start, all_starts)


def delta_dqc(h, h0, lap, grid, start: int | None = 1, grid0=None) -> np.ndarray:
    """``D_QC(t; h) - D_QC(t; h0)`` pointwise.

    ``start=None`` compares the maximised distances instead of a fixed start.
    """
    grid = _check_grid(grid)
    if grid0 is not None:
        grid0 = _check_grid(grid0)
        if grid0.shape != grid.shape or np.any(grid0 != grid):
            raise ValueError("series must share the same time grid")
    both = isinstance(h, PhasedHamiltonian) and isinstance(h0, PhasedHamiltonian)
    if both and h.graph != h0.graph:
        raise ValueError("Hamiltonians live on different graphs")
    if start is None:
        return dqc_max(h, lap, grid) - dqc_max(h0, lap, grid)
    return dqc_series(h, lap, start, grid) - dqc_series(h0, lap, start, grid)


@dataclass(frozen=True)
class ShortTimeCoefficients:
    """Leading Taylor coefficients of the indicators around ``t = 0``.

    ``D_QC = dqc_linear t + dqc_quadratic t^2``,
    ``C = coh_linear t + coh_quadratic t^2`` and ``I = 1 + ipr_quadratic t^2``,
    all up to third-order corrections.
    """

    start: int
    degree: int
    dqc_linear: float
    dqc_quadratic: float
    coh_linear: float
    coh_quadratic: float
    ipr_quadratic: float
    two_step_interference: float

    def dqc(self, t):
        return self.dqc_linear * t + self.dqc_quadratic * t**2

    def coherence(self, t):
        return self.coh_linear * t + self.coh_quadratic * t**2

    def ipr(self, t):
        return 1.0 + self.ipr_quadratic * t**2


def short_time_coeffs(h, start: int) -> ShortTimeCoefficients:
    """Expansion coefficients from vertex ``start`` for unit-modulus hoppings.

    The coherence's quadratic term is ``d (d - 1)`` plus the summed moduli of
    ``[H^2]`` towards distance-two vertices, so interfering two-step paths
    can only lower it.
    """
    hm = h.matrix if isinstance(h, PhasedHamiltonian) else np.asarray(h)
    mags = np.abs(hm)
    off = mags.copy()
    np.fill_diagonal(off, 0.0)
    if not np.all(np.isclose(off, 0.0) | np.isclose(off, 1.0)):
        raise ValueError("short-time expansions assume unit-modulus hoppings")
    j = start - 1
    d = int(round(off[j].sum()))
    h2 = hm @ hm
    # sum of |[H^2]_jk| over vertices at distance two: interfering two-step paths
    mask = np.isclose(off[j], 0.0)
    mask[j] = False
    interference = float(np.abs(h2[j, mask]).sum())
    return ShortTimeCoefficients(
        start=start,
        degree=d,
        dqc_linear=float(d),
        dqc_quadratic=-d * (d - 1) / 2.0,
        coh_linear=2.0 * d,
        coh_quadratic=d * (d - 1) + interference,
        ipr_quadratic=-2.0 * d,
        two_step_interference=interference,
    )
