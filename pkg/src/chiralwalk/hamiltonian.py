"""Chiral Hamiltonians on unweighted graphs and their gauge structure."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .graphs import Graph, cycle_graph, spanning_tree

TWO_PI = 2.0 * np.pi
DEFAULT_TOL = 1e-10


def wrap_angle(x):
    """Wrap angles into ``[0, 2*pi)``."""
    return np.mod(x, TWO_PI)


def angle_distance(a, b):
    """Distance between two angles on the circle, in ``[0, pi]``."""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


class PhasedHamiltonian:
    """Hermitian matrix with unit-modulus hoppings on the edges of ``graph``.

    ``phases[e]`` is the angle on ``graph.edges[e] = (j, k)``, ``j < k``, with
    ``H[j, k] = sign * exp(i * phase)`` and ``H[k, j]`` its conjugate.
    ``sign`` is ``-1`` for the Laplacian convention (so zero phases give
    ``H = L``) and ``+1`` otherwise. ``diagonal`` holds the real on-site
    energies. Instances are treated as immutable.
    """

    __slots__ = ("graph", "phases", "diagonal", "convention", "sign", "_matrix")

    def __init__(
        self,
        graph: Graph,
        phases: Sequence[float] | Mapping[tuple[int, int], float] | None = None,
        diagonal: Sequence[float] | float | None = None,
        convention: str = "custom",
        sign: int | None = None,
    ) -> None:
        m = graph.num_edges
        if phases is None:
            arr = np.zeros(m)
        elif isinstance(phases, Mapping):
            arr = np.zeros(m)
            index = {e: i for i, e in enumerate(graph.edges)}
            for (j, k), phi in phases.items():
                if (min(j, k), max(j, k)) not in index:
                    raise ValueError(f"({j}, {k}) is not an edge of the graph")
                # phi is read in the j -> k direction
                arr[index[(min(j, k), max(j, k))]] = phi if j < k else -phi
        else:
            arr = np.asarray(phases, dtype=float).reshape(-1)
            if arr.size != m:
                raise ValueError(f"expected {m} phases, got {arr.size}")
        if diagonal is None:
            diag = np.zeros(graph.n)
        elif np.ndim(diagonal) == 0:
            diag = np.full(graph.n, float(diagonal))
        else:
            diag = np.asarray(diagonal, dtype=float).reshape(-1)
            if diag.size != graph.n:
                raise ValueError(f"expected {graph.n} diagonal entries, got {diag.size}")
        phases_arr = wrap_angle(arr)
        phases_arr.setflags(write=False)
        diag = diag.copy()
        diag.setflags(write=False)
        self.graph = graph
        self.phases = phases_arr
        self.diagonal = diag
        self.convention = convention
        if sign is None:
            sign = -1 if convention == "laplacian" else 1
        if sign not in (1, -1):
            raise ValueError("hopping sign must be +1 or -1")
        self.sign = int(sign)
        self._matrix = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            h = np.diag(self.diagonal.astype(complex))
            if self.graph.num_edges:
                rows = np.array([j - 1 for j, _ in self.graph.edges])
                cols = np.array([k - 1 for _, k in self.graph.edges])
                vals = self.sign * np.exp(1j * self.phases)
                h[rows, cols] = vals
                h[cols, rows] = vals.conj()
            h.setflags(write=False)
            self._matrix = h
        return self._matrix

    def phase_map(self) -> dict[tuple[int, int], float]:
        return {e: float(p) for e, p in zip(self.graph.edges, self.phases)}

    def with_phases(self, phases) -> "PhasedHamiltonian":
        return PhasedHamiltonian(self.graph, phases, self.diagonal, self.convention, self.sign)

    def with_diagonal(self, diagonal, convention: str = "custom") -> "PhasedHamiltonian":
        return PhasedHamiltonian(self.graph, self.phases, diagonal, convention, self.sign)

    def __neg__(self) -> "PhasedHamiltonian":
        return PhasedHamiltonian(
            self.graph, self.phases, -self.diagonal, self.convention, -self.sign
        )

    def __repr__(self) -> str:
        return (
            f"PhasedHamiltonian(n={self.n}, edges={self.graph.num_edges}, "
            f"convention={self.convention!r}, sign={self.sign:+d})"
        )

    def to_text(self) -> str:
        diag = self.diagonal
        if np.all(diag == diag[0]):
            lines = [
                f"n {self.n} hopping {self.sign:+d} diagonal {self.convention} "
                f"constant {diag[0]:.17g}"
            ]
        else:
            lines = [f"n {self.n} hopping {self.sign:+d} diagonal {self.convention} custom"]
            lines.append("d " + " ".join(f"{d:.17g}" for d in diag))
        lines += [f"{j} {k} {p:.17g}" for (j, k), p in zip(self.graph.edges, self.phases)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PhasedHamiltonian":
        """Inverse of :meth:`to_text`."""
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty Hamiltonian file")
        head = lines[0].split()
        if len(head) < 7 or head[0] != "n" or head[2] != "hopping" or head[4] != "diagonal":
            raise ValueError(f"bad header {lines[0]!r}")
        n = int(head[1])
        sign = int(head[3])
        convention = head[5]
        body = lines[1:]
        if head[6] == "constant":
            diagonal = np.full(n, float(head[7]))
        elif head[6] == "custom":
            dline = body.pop(0).split()
            if dline[0] != "d":
                raise ValueError("custom diagonal requires a 'd ...' line")
            diagonal = np.array([float(v) for v in dline[1:]])
        else:
            raise ValueError(f"unknown diagonal mode {head[6]!r}")
        edges, phases = [], []
        for ln in body:
            j, k, p = ln.split()
            edges.append((int(j), int(k)))
            phases.append(float(p))
        g = Graph(n, tuple(edges))
        return cls(g, dict(zip(edges, phases)), diagonal, convention, sign)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> "PhasedHamiltonian":
        return cls.from_text(Path(path).read_text())


def from_laplacian(g: Graph) -> PhasedHamiltonian:
    """``H = L``: zero phases, hopping sign -1, degrees on the diagonal."""
    return PhasedHamiltonian(g, None, g.degrees().astype(float), "laplacian")


def from_adjacency(g: Graph) -> PhasedHamiltonian:
    return PhasedHamiltonian(g, None, 0.0, "adjacency")


def with_convention(g: Graph, phases, convention: str, d: float = 0.0) -> PhasedHamiltonian:
    """Phased Hamiltonian on ``g`` with the diagonal picked by ``convention``.

    ``adjacency`` uses zeros, ``laplacian`` uses the vertex degrees and
    ``constant`` uses ``d`` everywhere.
    """
    if convention == "adjacency":
        return PhasedHamiltonian(g, phases, 0.0, "adjacency")
    if convention == "laplacian":
        return PhasedHamiltonian(g, phases, g.degrees().astype(float), "laplacian")
    if convention == "constant":
        return PhasedHamiltonian(g, phases, float(d), "constant")
    raise ValueError(f"unknown diagonal convention {convention!r}")


def cycle_hamiltonian(n: int, theta: float, d: float = 0.0) -> PhasedHamiltonian:
    """Ring with ``H[j, j+1] = exp(i theta)`` (indices mod n) and diagonal ``d``."""
    g = cycle_graph(n)
    phases = {(j, j + 1): theta for j in range(1, n)}
    phases[(n, 1)] = theta
    return PhasedHamiltonian(g, phases, d, "constant")


def apply_gauge(h: PhasedHamiltonian, chi: Sequence[float]) -> PhasedHamiltonian:
    """Return ``D H D^dagger`` with ``D = diag(exp(i chi))``."""
    chi = np.asarray(chi, dtype=float).reshape(-1)
    if chi.size != h.n:
        raise ValueError(f"gauge vector has length {chi.size}, expected {h.n}")
    j = np.array([e[0] - 1 for e in h.graph.edges], dtype=int)
    k = np.array([e[1] - 1 for e in h.graph.edges], dtype=int)
    new = h.phases + chi[j] - chi[k] if h.graph.num_edges else h.phases
    return PhasedHamiltonian(h.graph, new, h.diagonal, h.convention, h.sign)


def reduce_cycle_phases(phis: Sequence[float], reduce: bool = True) -> float:
    """Uniform ring phase gauge-equivalent to per-link phases ``phis``.

    ``phis[j-1]`` is the phase on the link ``j -> j+1`` (the last one closes
    the ring ``n -> 1``). The result is the mean phase; with ``reduce`` it is
    folded into ``[0, 2*pi/n)``, which leaves every transition probability
    unchanged.
    """
    phis = np.asarray(phis, dtype=float)
    n = phis.size
    if n < 3:
        raise ValueError("a ring needs at least 3 phases")
    flux = float(np.mod(phis.sum(), TWO_PI))
    if TWO_PI - flux < 1e-12:
        flux = 0.0
    theta = flux / n
    return theta if reduce else float(phis.mean())


def cycle_from_link_phases(phis: Sequence[float], d: float = 0.0) -> PhasedHamiltonian:
    n = len(phis)
    g = cycle_graph(n)
    phases = {(j, j + 1): phis[j - 1] for j in range(1, n)}
    phases[(n, 1)] = phis[n - 1]
    return PhasedHamiltonian(g, phases, d, "constant")


def gauge_to_tree(h: PhasedHamiltonian, root: int = 1) -> np.ndarray:
    """Gauge vector that makes every BFS-tree edge phase zero."""
    parent, _ = spanning_tree(h.graph, root)
    pmap = h.phase_map()
    chi = np.zeros(h.n)
    # BFS order guarantees parents are fixed first
    order = sorted(parent, key=lambda v: _depth(parent, v))
    for v in order:
        p = parent[v]
        if p is None:
            continue
        if p < v:
            # phi'_{p,v} = phi + chi_p - chi_v = 0
            chi[v - 1] = pmap[(p, v)] + chi[p - 1]
        else:
            chi[v - 1] = chi[p - 1] - pmap[(v, p)]
    return chi


def _depth(parent: dict[int, int | None], v: int) -> int:
    d = 0
    while parent[v] is not None:
        v = parent[v]
        d += 1
    return d


def cycle_holonomies(h: PhasedHamiltonian) -> dict[tuple[int, int], float]:
    """Flux through each fundamental cycle, keyed by its chord, in ``[0, 2*pi)``.

    After gauging the spanning tree to zero, the phase left on a chord is the
    product of phase factors around the cycle that chord closes.
    """
    _, chords = spanning_tree(h.graph)
    gauged = apply_gauge(h, gauge_to_tree(h))
    pmap = gauged.phase_map()
    return {c: pmap[c] for c in chords}


def is_gauge_real(h: PhasedHamiltonian, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``h`` is gauge-equivalent to its phase-free version.

    Checks unit holonomy of the phase factors on a fundamental cycle basis;
    every other closed path is generated by these. The hopping sign is part
    of the reference matrix, so ``H = L`` counts as real on every graph.
    """
    return all(angle_distance(f, 0.0) <= tol for f in cycle_holonomies(h).values())


def condition1_residual(h: PhasedHamiltonian, target: int = 1) -> float:
    """Largest overlap of the ``target`` column with any other column.

    This is ``max_{r != target} |[H0^2]_{r, target}|`` with ``H0`` the
    Hamiltonian minus its constant diagonal. Zero means ``H0^2 e_target``
    is proportional to ``e_target``, so the walk from ``target`` is a
    two-level rotation.
    """
    g = h.graph
    if g.num_edges != g.n * (g.n - 1) // 2:
        raise ValueError("condition1_residual requires a complete graph")
    if not np.allclose(h.diagonal, h.diagonal[0], atol=1e-12):
        raise ValueError("condition1_residual requires a constant diagonal")
    h0 = h.matrix - h.diagonal[0] * np.eye(h.n)
    col = h0 @ h0[:, target - 1]
    col = np.delete(col, target - 1)
    return float(np.max(np.abs(col))) if col.size else 0.0
