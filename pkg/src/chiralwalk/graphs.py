"""Simple undirected graphs and the families used by the walk experiments.

Vertices are labelled 1..n everywhere in the public API. Matrices are dense
``numpy`` arrays indexed from 0, so vertex ``j`` lives at row ``j - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Unweighted simple graph on vertices ``1..n``.

    ``edges`` is normalised to a sorted tuple of ``(j, k)`` pairs with ``j < k``,
    which is also the canonical edge order used for phase vectors.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n!r}")
        seen: set[tuple[int, int]] = set()
        for edge in self.edges:
            j, k = (int(v) for v in edge)
            if j == k:
                raise ValueError(f"self-loop at vertex {j}")
            if not (1 <= j <= self.n and 1 <= k <= self.n):
                raise ValueError(f"edge ({j}, {k}) has an endpoint outside 1..{self.n}")
            pair = (min(j, k), max(j, k))
            if pair in seen:
                raise ValueError(f"duplicate edge {pair}")
            seen.add(pair)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for j, k in self.edges:
            deg[j - 1] += 1
            deg[k - 1] += 1
        return deg

    def degree(self, vertex: int) -> int:
        return int(self.degrees()[vertex - 1])

    def neighbors(self, vertex: int) -> list[int]:
        out = []
        for j, k in self.edges:
            if j == vertex:
                out.append(k)
            elif k == vertex:
                out.append(j)
        return sorted(out)

    def has_edge(self, j: int, k: int) -> bool:
        return (min(j, k), max(j, k)) in set(self.edges)

    def is_connected(self) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for j, k in self.edges:
            adj[j].append(k)
            adj[k].append(j)
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_regular(self) -> bool:
        deg = self.degrees()
        return bool(np.all(deg == deg[0]))

    def relabel(self, perm: dict[int, int] | list[int]) -> "Graph":
        """Return the isomorphic graph with vertex ``v`` renamed to ``perm[v]``.

        A list is read as ``perm[v - 1]``.
        """
        if isinstance(perm, dict):
            mapping = perm
        else:
            mapping = {v + 1: int(p) for v, p in enumerate(perm)}
        if sorted(mapping) != list(range(1, self.n + 1)) or sorted(mapping.values()) != list(
            range(1, self.n + 1)
        ):
            raise ValueError("relabelling must be a permutation of 1..n")
        return Graph(self.n, tuple((mapping[j], mapping[k]) for j, k in self.edges), self.name)

    def to_edgelist(self) -> str:
        lines = [f"n {self.n}"] + [f"{j} {k}" for j, k in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str, name: str = "") -> "Graph":
        """Parse the plain-text format: ``n <N>`` then one ``j k`` pair per line.

        Blank lines and ``#`` comments are ignored.
        """
        n = None
        edges = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if n is None:
                if len(parts) != 2 or parts[0] != "n":
                    raise ValueError(f"expected header 'n <N>', got {raw!r}")
                n = int(parts[1])
                continue
            if len(parts) != 2:
                raise ValueError(f"expected 'j k' edge line, got {raw!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if n is None:
            raise ValueError("empty edge list")
        return cls(n, tuple(edges), name)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_edgelist())

    @classmethod
    def load(cls, path: str | Path) -> "Graph":
        return cls.from_edgelist(Path(path).read_text(), name=Path(path).stem)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    edges = [(j, j + 1) for j in range(1, n)] + [(1, n)]
    return Graph(n, tuple(edges), f"cycle{n}")


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, tuple(itertools.combinations(range(1, n + 1), 2)), f"complete{n}")


# Input arm 1-2-3-4, triangle {4, 5, 6}, output arm 5-8-10-12 and the arm
# 6-7-9-11 that the resonant phase switches off. Reconstructed from the site
# numbers quoted in the text; any other labelling consistent with those is a
# permutation that leaves the reported observables unchanged.
SWITCH_EDGES = (
    (1, 2), (2, 3), (3, 4),
    (4, 5), (4, 6), (5, 6),
    (5, 8), (8, 10), (10, 12),
    (6, 7), (7, 9), (9, 11),
)


def switch_graph() -> Graph:
    """The 12-site quantum switch (triangle with a 3- or 4-site chain per corner)."""
    return Graph(12, SWITCH_EDGES, "switch12")


def hypercube_graph(dim: int) -> Graph:
    """Hypercube of dimension ``dim``; vertex ``v`` carries the binary label of ``v - 1``."""
    if dim < 1:
        raise ValueError(f"hypercube needs dim >= 1, got {dim}")
    n = 2**dim
    edges = []
    for a in range(n):
        for bit in range(dim):
            b = a ^ (1 << bit)
            if a < b:
                edges.append((a + 1, b + 1))
    return Graph(n, tuple(edges), f"hypercube{dim}")


def star_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError(f"star graph needs n >= 2, got {n}")
    return Graph(n, tuple((1, k) for k in range(2, n + 1)), f"star{n}")


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for j, k in g.edges:
        a[j - 1, k - 1] = a[k - 1, j - 1] = 1.0
    return a


def laplacian(g: Graph) -> np.ndarray:
    a = adjacency(g)
    return np.diag(a.sum(axis=1)) - a


def free_phase_count(g: Graph) -> int:
    """Number of phases that can affect transition probabilities, ``|E| - n + 1``."""
    if not g.is_connected():
        raise ValueError("free phase count is only defined for connected graphs")
    return g.num_edges - g.n + 1


def spanning_tree(g: Graph, root: int = 1) -> tuple[dict[int, int | None], list[tuple[int, int]]]:
    """BFS spanning tree.

    Returns ``(parent, chords)`` where ``parent[root] is None`` and ``chords``
    are the edges left out of the tree (one per independent cycle).
    """
    if not g.is_connected():
        raise ValueError("graph is not connected")
    nbrs: dict[int, list[int]] = {v: [] for v in range(1, g.n + 1)}
    for j, k in g.edges:
        nbrs[j].append(k)
        nbrs[k].append(j)
    parent: dict[int, int | None] = {root: None}
    queue = [root]
    tree = set()
    while queue:
        v = queue.pop(0)
        for w in sorted(nbrs[v]):
            if w not in parent:
                parent[w] = v
                tree.add((min(v, w), max(v, w)))
                queue.append(w)
    chords = [e for e in g.edges if e not in tree]
    return parent, chords


def build_graph(spec: str) -> Graph:
    """Build a graph from a short spec such as ``cycle:8``, ``complete:13``,
    ``switch``, ``cube``, ``hypercube:4``, ``star:5`` or ``file:<path>``."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "cycle":
        return cycle_graph(int(arg))
    if kind == "complete":
        return complete_graph(int(arg))
    if kind == "switch":
        return switch_graph()
    if kind == "cube":
        return hypercube_graph(3)
    if kind == "hypercube":
        return hypercube_graph(int(arg))
    if kind == "star":
        return star_graph(int(arg))
    if kind == "file":
        return Graph.load(arg)
    raise ValueError(f"unknown graph spec {spec!r}")
