"""Derivative-free search over edge phases, and random-phase ensembles."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import optimize as sciopt

from .graphs import Graph, laplacian
from .hamiltonian import TWO_PI, PhasedHamiltonian, condition1_residual, from_laplacian
from .metrics import MetricSeries, WalkPair, coherence_l1, ipr
from .propagation import classical_localized, hermitian_eig

log = logging.getLogger(__name__)

ENSEMBLE_RULES = ("single", "two", "independent")


class BudgetExhausted(RuntimeError):
    """Raised in strict mode when the evaluation budget runs out.

    ``result`` carries the best point found so far.
    """

    def __init__(self, message: str, result: "OptimizationResult") -> None:
        super().__init__(message)
        self.result = result


class DqcObjective:
    """``sign * D_QC^start(t_star)`` as a function of the edge phase vector.

    The Hamiltonian has unit hoppings and zero diagonal; the classical
    distribution at ``t_star`` is computed once.
    """

    def __init__(self, g: Graph, start: int = 1, t_star: float = 0.3, sign: int = 1) -> None:
        if t_star <= 0:
            raise ValueError("t_star must be positive")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not g.is_connected():
            raise ValueError("phase optimisation needs a connected graph")
        self.graph = g
        self.start = start
        self.t_star = float(t_star)
        self.sign = sign
        self.p_classical = classical_localized(laplacian(g), start, [t_star])[0]
        self._rows = np.array([j - 1 for j, _ in g.edges], dtype=int)
        self._cols = np.array([k - 1 for _, k in g.edges], dtype=int)
        self.evaluations = 0

    @property
    def dim(self) -> int:
        return self.graph.num_edges

    def matrix(self, phases) -> np.ndarray:
        h = np.zeros((self.graph.n, self.graph.n), dtype=complex)
        vals = np.exp(1j * np.asarray(phases, dtype=float))
        h[self._rows, self._cols] = vals
        h[self._cols, self._rows] = vals.conj()
        return h

    def dqc(self, phases) -> float:
        w, v = np.linalg.eigh(self.matrix(phases))
        amp = v @ (np.exp(-1j * w * self.t_star) * v[self.start - 1].conj())
        return float(1.0 - np.dot(self.p_classical, np.abs(amp) ** 2))

    def __call__(self, phases) -> float:
        self.evaluations += 1
        return self.sign * self.dqc(phases)


def objective_dqc(g: Graph, phases, start: int = 1, t_star: float = 0.3, sign: int = 1) -> float:
    return DqcObjective(g, start, t_star, sign)(phases)


@dataclass
class OptimizerConfig:
    method: str = "coordinate"
    restarts: int = 8
    seed: int = 0
    budget: int = 200_000
    initial_step: float = 0.5
    step_tol: float = 1e-6
    f_tol: float = 1e-10
    strict: bool = False

    @classmethod
    def from_file(cls, path: str | Path) -> "OptimizerConfig":
        return cls.from_text(Path(path).read_text())

    @classmethod
    def from_text(cls, text: str) -> "OptimizerConfig":
        """Parse ``key=value`` lines; unknown keys are rejected."""
        cfg = cls()
        kinds = {f: type(getattr(cfg, f)) for f in cfg.__dataclass_fields__}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in kinds:
                raise ValueError(f"bad config line {raw!r}")
            kind = kinds[key]
            if kind is bool:
                setattr(cfg, key, value.strip().lower() in ("1", "true", "yes", "on"))
            else:
                setattr(cfg, key, kind(value.strip()))
        return cfg


@dataclass
class OptimizationResult:
    """Best phase vector found and how the search got there.

    ``objective`` is the signed value ``sign * D_QC`` at ``best`` so that the
    search always maximises it; ``trace`` holds ``(evaluations, objective)``
    at every improvement of the running best.
    """

    graph: Graph
    best: np.ndarray
    objective: float
    sign: int
    start: int
    t_star: float
    evaluations: int
    trace: list[tuple[int, float]] = field(default_factory=list)
    residual: float | None = None
    converged: bool = True
    restart_objectives: list[float] = field(default_factory=list)

    @property
    def dqc(self) -> float:
        return self.sign * self.objective

    def hamiltonian(self) -> PhasedHamiltonian:
        return PhasedHamiltonian(self.graph, self.best, 0.0, "adjacency")

    def to_text(self) -> str:
        lines = [
            f"graph_n={self.graph.n}",
            f"sign={self.sign:+d}",
            f"start={self.start}",
            f"t_star={self.t_star:.15g}",
            f"objective={self.objective:.15g}",
            f"dqc={self.dqc:.15g}",
            f"evaluations={self.evaluations}",
            f"converged={self.converged}",
            "residual=" + ("none" if self.residual is None else f"{self.residual:.15g}"),
            "# j k phase",
        ]
        lines += [f"{j} {k} {p:.17g}" for (j, k), p in zip(self.graph.edges, self.best)]
        return "\n".join(lines) + "\n"


class _Tracker:
    """Counts evaluations, enforces the budget and records improvements."""

    def __init__(self, fun: DqcObjective, budget: int, trace: list, offset: int) -> None:
        self.fun = fun
        self.budget = budget
        self.trace = trace
        self.offset = offset
        self.count = 0
        self.best_x: np.ndarray | None = None
        self.best_f = -np.inf

    def __call__(self, x) -> float:
        if self.count >= self.budget:
            raise _OutOfBudget
        self.count += 1
        f = self.fun(x)
        if f > self.best_f:
            self.best_f = f
            self.best_x = np.array(x, dtype=float)
            if not self.trace or f > self.trace[-1][1]:
                self.trace.append((self.offset + self.count, f))
        return f


class _OutOfBudget(Exception):
    pass


def _coordinate_search(f: _Tracker, x0: np.ndarray, cfg: OptimizerConfig) -> np.ndarray:
    """Cyclic coordinate ascent with a shared step that halves on failure."""
    x = x0.copy()
    fx = f(x)
    step = cfg.initial_step
    while step >= cfg.step_tol:
        f_cycle = fx
        for i in range(x.size):
            for delta in (step, -step):
                trial = x.copy()
                trial[i] += delta
                ft = f(trial)
                if ft > fx:
                    x, fx = trial, ft
                    # keep going in the same direction while it pays off
                    while True:
                        trial = x.copy()
                        trial[i] += delta
                        ft = f(trial)
                        if ft <= fx:
                            break
                        x, fx = trial, ft
                    break
        if fx - f_cycle < cfg.f_tol:
            step /= 2.0
    return x


def _nelder_mead(f: _Tracker, x0: np.ndarray, cfg: OptimizerConfig) -> np.ndarray:
    res = sciopt.minimize(
        lambda x: -f(x),
        x0,
        method="Nelder-Mead",
        options={
            "xatol": cfg.step_tol,
            "fatol": cfg.f_tol,
            "maxfev": cfg.budget,
            "adaptive": True,
            "initial_simplex": x0 + np.vstack([np.zeros(x0.size), cfg.initial_step * np.eye(x0.size)]),
        },
    )
    return np.asarray(res.x)


_METHODS = {"coordinate": _coordinate_search, "nelder-mead": _nelder_mead}


def optimize_phases(
    g: Graph,
    start: int = 1,
    t_star: float = 0.3,
    sign: int = 1,
    config: OptimizerConfig | None = None,
) -> OptimizationResult:
    """Local optimisation of ``sign * D_QC^start(t_star)`` over all edge phases.

    Each restart begins from uniformly random phases drawn from one seeded
    generator; the best restart is returned. The search runs over the full
    edge-phase vector, so gauge directions are flat and harmless.
    """
    cfg = config or OptimizerConfig()
    if cfg.method not in _METHODS:
        raise ValueError(f"unknown method {cfg.method!r}; choose from {sorted(_METHODS)}")
    if cfg.restarts < 1:
        raise ValueError("need at least one restart")
    fun = DqcObjective(g, start, t_star, sign)
    rng = np.random.default_rng(cfg.seed)
    trace: list[tuple[int, float]] = []
    used = 0
    best_x, best_f = None, -np.inf
    restart_objectives = []
    converged = True
    for r in range(cfg.restarts):
        x0 = rng.uniform(0.0, TWO_PI, fun.dim)
        tracker = _Tracker(fun, cfg.budget - used, trace, used)
        try:
            _METHODS[cfg.method](tracker, x0, cfg)
        except _OutOfBudget:
            converged = False
        used += tracker.count
        if tracker.best_x is not None:
            restart_objectives.append(tracker.best_f)
            log.debug("restart %d: objective %.12g after %d evaluations", r, tracker.best_f, tracker.count)
            if tracker.best_f > best_f:
                best_x, best_f = tracker.best_x, tracker.best_f
        if not converged:
            log.warning("evaluation budget of %d exhausted after %d restarts", cfg.budget, r + 1)
            break
    best = np.mod(best_x, TWO_PI)
    # re-evaluate so the stored value matches the wrapped phases exactly
    objective = sign * fun.dqc(best)
    result = OptimizationResult(
        graph=g,
        best=best,
        objective=objective,
        sign=sign,
        start=start,
        t_star=float(t_star),
        evaluations=used,
        trace=trace,
        residual=_residual_if_complete(g, best, start),
        converged=converged,
        restart_objectives=restart_objectives,
    )
    if not converged and cfg.strict:
        raise BudgetExhausted(f"budget of {cfg.budget} evaluations exhausted", result)
    return result


def _residual_if_complete(g: Graph, phases, start: int) -> float | None:
    if g.num_edges != g.n * (g.n - 1) // 2:
        return None
    return condition1_residual(PhasedHamiltonian(g, phases, 0.0), start)


@dataclass(frozen=True)
class EnsembleSpec:
    """How random phases are drawn.

    ``single``: one angle on every edge (``j -> k``, ``j < k``);
    ``two``: two angles, each edge picks one of them with equal probability;
    ``independent``: one angle per edge.
    """

    rule: str
    samples: int = 400
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rule not in ENSEMBLE_RULES:
            raise ValueError(f"unknown ensemble rule {self.rule!r}; choose from {ENSEMBLE_RULES}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def draw(self, m: int, rng: np.random.Generator) -> np.ndarray:
        if self.rule == "single":
            return np.full(m, rng.uniform(0.0, TWO_PI))
        if self.rule == "two":
            pair = rng.uniform(0.0, TWO_PI, 2)
            return pair[rng.integers(0, 2, m)]
        return rng.uniform(0.0, TWO_PI, m)


@dataclass(frozen=True)
class EnsembleResult:
    """Sample means and standard errors of the indicators from vertex ``start``."""

    spec: EnsembleSpec
    grid: np.ndarray
    start: int
    coherence: np.ndarray
    ipr: np.ndarray
    dqc: np.ndarray
    coherence_se: np.ndarray
    ipr_se: np.ndarray
    dqc_se: np.ndarray

    def as_series(self) -> MetricSeries:
        return MetricSeries(
            grid=self.grid,
            start=self.start,
            dqc_per_start=self.dqc[None, :],
            dqc_max=self.dqc,
            coherence=self.coherence,
            ipr=self.ipr,
            site_probs=np.empty((self.grid.size, 0)),
        )


def random_ensemble(
    g: Graph,
    spec: EnsembleSpec,
    grid,
    start: int = 1,
    convention: str = "laplacian",
) -> EnsembleResult:
    """Average coherence, IPR and ``D_QC`` over random phase configurations.

    Phases decorate the reference Hamiltonian picked by ``convention``
    (``laplacian`` by default, matching the non-chiral baseline ``H = L``).
    """
    grid = np.asarray(grid, dtype=float)
    lap = laplacian(g)
    l_sd = hermitian_eig(lap)
    ref = from_laplacian(g) if convention == "laplacian" else PhasedHamiltonian(g, None, 0.0, convention)
    rng = np.random.default_rng(spec.seed)
    coh = np.empty((spec.samples, grid.size))
    ip = np.empty_like(coh)
    dq = np.empty_like(coh)
    for s in range(spec.samples):
        h = ref.with_phases(spec.draw(g.num_edges, rng))
        pair = WalkPair(h, lap, l_sd=l_sd)
        amps = pair.amplitudes(start, grid)
        coh[s] = coherence_l1(amps)
        ip[s] = ipr(amps)
        dq[s] = pair.dqc(start, grid)

    def se(x):
        if spec.samples < 2:
            return np.zeros(grid.size)
        return x.std(axis=0, ddof=1) / np.sqrt(spec.samples)

    return EnsembleResult(
        spec=spec,
        grid=grid,
        start=start,
        coherence=coh.mean(axis=0),
        ipr=ip.mean(axis=0),
        dqc=dq.mean(axis=0),
        coherence_se=se(coh),
        ipr_se=se(ip),
        dqc_se=se(dq),
    )
