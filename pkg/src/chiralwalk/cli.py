"""Command-line driver: one subcommand per experiment, CSV on the way out.

Output goes to ``--output`` when given, otherwise to
``$CHIRALWALK_OUTPUT_DIR/<command>.csv`` when that variable is set, otherwise
to standard output. ``--config FILE`` reads ``key=value`` lines that
override the command-line flags of the chosen subcommand.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    COMPLETE_MODES,
    SWITCH_PHI_GRID,
    Table,
    complete_experiment,
    cube_experiment,
    cycle_experiment,
    ensemble_experiment,
    optimum_series,
    search_scaling,
    switch_experiment,
)
from .graphs import build_graph, hypercube_graph
from .optimize import ENSEMBLE_RULES, BudgetExhausted, OptimizerConfig, optimize_phases

OUTPUT_DIR_ENV = "CHIRALWALK_OUTPUT_DIR"
EXIT_ERROR = 1
EXIT_BUDGET = 3
CUBE_T_STAR = 0.5

log = logging.getLogger("chiralwalk")

_ANGLE = re.compile(
    r"^(?P<coef>[+-]?(?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?)?\*?(?P<pi>pi)?(?:/(?P<den>\d+\.?\d*))?$"
)


def parse_angle(text: str) -> float:
    """Read ``0.13``, ``pi/8``, ``3pi/8`` or ``3*pi/8``."""
    m = _ANGLE.match(text.strip().lower().replace(" ", ""))
    if not m or not (m.group("coef") or m.group("pi")):
        raise ValueError(f"cannot read angle {text!r}")
    coef = m.group("coef")
    value = float(coef) if coef not in (None, "+", "-") else (-1.0 if coef == "-" else 1.0)
    if m.group("pi"):
        value *= np.pi
    if m.group("den"):
        value /= float(m.group("den"))
    return value


def parse_angles(text: str) -> list[float]:
    return [parse_angle(part) for part in text.split(",") if part.strip()]


def parse_ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def parse_sign(text: str) -> int:
    table = {"max": 1, "maximize": 1, "+1": 1, "1": 1, "min": -1, "minimize": -1, "-1": -1}
    if text.strip().lower() not in table:
        raise ValueError(f"sign must be max or min, got {text!r}")
    return table[text.strip().lower()]


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _grid_flags(p: argparse.ArgumentParser, t_max: float) -> None:
    p.add_argument("--t-max", type=float, default=t_max, help=f"last time of the grid (default {t_max})")
    p.add_argument("--step", type=float, default=0.01, help="grid spacing (default 0.01)")


def _optimizer_flags(p: argparse.ArgumentParser, t_star: float | None) -> None:
    p.add_argument("--t-star", type=float, default=t_star, help="time at which D_QC is optimised")
    p.add_argument("--budget", type=int, default=OptimizerConfig.budget, help="objective evaluations allowed")
    p.add_argument("--restarts", type=int, default=OptimizerConfig.restarts)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("coordinate", "nelder-mead"), default="coordinate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralwalk",
        description="Chiral quantum walk experiments exported as CSV.",
    )
    parser.add_argument("-o", "--output", help="CSV path, or '-' for standard output")
    parser.add_argument("--config", help="file of key=value lines overriding the subcommand flags")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("cycle", help="uniformly phased ring: transport and D_QC shift")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--theta", default="0,0.04,0.13,0.23", help="comma list of angles, e.g. 0,pi/8")
    p.add_argument("--targets", default=None, help="comma list of target vertices (default: opposite vertex)")
    _grid_flags(p, 30.0)

    p = sub.add_parser("complete", help="complete graph: coherence, IPR and D_QC")
    p.add_argument("--n", type=int, default=13)
    p.add_argument("--mode", default="appendix", choices=COMPLETE_MODES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=400)
    _grid_flags(p, 1.0)

    p = sub.add_parser("search-scaling", help="flat-state, Grover and speed-limit times against n")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=50)

    p = sub.add_parser("switch", help="12-site switch: output arms and D_QC shift")
    p.add_argument("--mode", choices=("adjacency", "laplacian"), default="adjacency")
    p.add_argument("--phi", default=",".join(f"{x:.17g}" for x in SWITCH_PHI_GRID),
                   help="comma list of loop phases in [0, pi/2]")
    _grid_flags(p, 6.0)

    p = sub.add_parser("cube", help="cube graph with optional edge phases")
    p.add_argument("--phases", help="comma list of 12 phases, or a file written by 'optimize'")
    p.add_argument("--optimize", action="store_true", help="first minimise D_QC to find suppressing phases")
    _optimizer_flags(p, CUBE_T_STAR)
    _grid_flags(p, 20.0)

    p = sub.add_parser("optimize", help="search edge phases for extreme D_QC")
    p.add_argument("--graph", default="complete:6", help="cycle:N, complete:N, switch, cube, hypercube:D, star:N or file:PATH")
    p.add_argument("--sign", default="max", help="max or min")
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--result", help="where to write the optimisation result")
    _optimizer_flags(p, 0.3)
    _grid_flags(p, 1.0)

    p = sub.add_parser("ensemble", help="random-phase averages next to the H = L walk")
    p.add_argument("--graph", default="complete:13")
    p.add_argument("--rules", default=",".join(ENSEMBLE_RULES))
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=int, default=1)
    _grid_flags(p, 1.0)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def apply_config(parser: argparse.ArgumentParser, args: argparse.Namespace, text: str) -> None:
    """Override ``args`` with ``key=value`` lines; keys are flag names."""
    actions = {a.dest: a for a in _subparser(parser, args.command)._actions}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        dest = key.strip().lstrip("-").replace("-", "_")
        if not sep or dest not in actions or dest == "help":
            raise ValueError(f"unknown config entry {raw.strip()!r} for {args.command}")
        action = actions[dest]
        value = value.strip()
        if isinstance(action, argparse._StoreTrueAction):
            converted = _bool(value)
        elif action.type is not None:
            converted = action.type(value)
        else:
            converted = value
        if action.choices is not None and converted not in action.choices:
            raise ValueError(f"{dest}={value!r} not one of {list(action.choices)}")
        setattr(args, dest, converted)


def _config_line(args: argparse.Namespace) -> str:
    skip = {"output", "config", "verbose"}
    items = sorted((k, v) for k, v in vars(args).items() if k not in skip)
    return " ".join(f"{k}={v}" for k, v in items)


def format_csv(table: Table, command: str, args: argparse.Namespace, extra: list[str] = ()) -> str:
    lines = [f"# chiralwalk {command}", f"# config: {_config_line(args)}"]
    lines += [f"# {note}" for note in list(table.notes) + list(extra)]
    lines.append(",".join(table.names))
    data = np.column_stack([table[name] for name in table.names])
    lines += [",".join(f"{v:.15g}" for v in row) for row in data]
    return "\n".join(lines) + "\n"


def resolve_output(args: argparse.Namespace) -> Path | None:
    if args.output == "-":
        return None
    if args.output:
        return Path(args.output)
    folder = os.environ.get(OUTPUT_DIR_ENV)
    if folder:
        return Path(folder) / f"{args.command}.csv"
    return None


def _optimizer_config(args: argparse.Namespace) -> OptimizerConfig:
    return OptimizerConfig(method=args.method, restarts=args.restarts, seed=args.seed,
                           budget=args.budget, strict=True)


def _read_phases(text: str, m: int) -> np.ndarray:
    path = Path(text)
    if path.exists():
        rows = []
        for raw in path.read_text().splitlines():
            parts = raw.split("#", 1)[0].split()
            if len(parts) == 3 and "=" not in raw:
                rows.append(float(parts[2]))
        phases = np.array(rows)
    else:
        phases = np.array(parse_angles(text))
    if phases.size != m:
        raise ValueError(f"expected {m} phases, got {phases.size}")
    return phases


def run_command(args: argparse.Namespace) -> tuple[Table, list[str], str | None]:
    """Run the selected experiment; returns the table, extra notes and an
    optional optimisation result text."""
    cmd = args.command
    if cmd == "cycle":
        targets = parse_ints(args.targets) if args.targets else None
        return cycle_experiment(args.n, parse_angles(args.theta), args.t_max, args.step, targets), [], None
    if cmd == "complete":
        return complete_experiment(args.n, args.mode, args.t_max, args.step, args.seed, args.samples), [], None
    if cmd == "search-scaling":
        return search_scaling(args.n_min, args.n_max), [], None
    if cmd == "switch":
        return switch_experiment(args.mode, parse_angles(args.phi), args.t_max, args.step), [], None
    if cmd == "cube":
        g = hypercube_graph(3)
        phases, extra, result_text = None, [], None
        if args.phases and args.optimize:
            raise ValueError("give either --phases or --optimize, not both")
        if args.phases:
            phases = _read_phases(args.phases, g.num_edges)
        elif args.optimize:
            res = optimize_phases(g, 1, args.t_star, -1, _optimizer_config(args))
            phases = res.best
            result_text = res.to_text()
            extra.append(f"minimised D_QC at t_star={args.t_star:.15g}: {res.dqc:.15g}")
        if phases is not None:
            extra.append("phases: " + " ".join(f"{p:.17g}" for p in phases))
        return cube_experiment(phases, args.t_max, args.step), extra, result_text
    if cmd == "optimize":
        g = build_graph(args.graph)
        res = optimize_phases(g, args.start, args.t_star, parse_sign(args.sign), _optimizer_config(args))
        extra = [line for line in res.to_text().splitlines() if "=" in line]
        extra.append("phases: " + " ".join(f"{p:.17g}" for p in res.best))
        return optimum_series(res, args.t_max, args.step), extra, res.to_text()
    if cmd == "ensemble":
        g = build_graph(args.graph)
        rules = [r.strip() for r in args.rules.split(",") if r.strip()]
        table = ensemble_experiment(g, rules, args.samples, args.seed, args.t_max, args.step, args.start)
        return table, [], None
    raise ValueError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.config:
        try:
            apply_config(parser, args, Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            parser.error(f"--config: {exc}")
    if getattr(args, "t_max", 1.0) <= 0 or getattr(args, "step", 1.0) <= 0:
        parser.error("--t-max and --step must be positive")
    try:
        table, extra, result_text = run_command(args)
    except BudgetExhausted as exc:
        print(f"chiralwalk: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"chiralwalk: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = format_csv(table, args.command, args, extra)
    out = resolve_output(args)
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        log.info("wrote %s", out)
    if result_text is not None:
        result_path = Path(args.result) if getattr(args, "result", None) else (
            out.with_suffix(".result.txt") if out is not None else None)
        if result_path is not None:
            result_path.parent.mkdir(parents=True, exist_ok=True)
            result_path.write_text(result_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
