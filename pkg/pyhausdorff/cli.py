"""Command line front end."""
import argparse
import asyncio
import json
import logging
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, TextIO

import numpy as np

from pyhausdorff.const import (
    DEFAULT_ALPHA,
    DEFAULT_EPS,
    DEFAULT_METRIC,
    EXIT_INCOMPATIBLE,
    EXIT_INPUT,
    EXIT_INVARIANT,
    EXIT_OK,
    METRIC_KINDS,
)
from pyhausdorff.errors import (
    IncompatibleError,
    InputError,
    InvariantError,
    ParameterError,
)
from pyhausdorff.greedy import check_alpha, greedy_permutation
from pyhausdorff.gtree import build_tree, load_tree, serialize, verify_tree
from pyhausdorff.hausdorff import check_eps, directed_hausdorff, hausdorff
from pyhausdorff.kpartial import k_hausdorff_all
from pyhausdorff.metric import (
    DistanceCounter,
    PointSet,
    metric_from,
    read_points,
    spread,
)
from pyhausdorff.oracle import exact_directed, exact_hausdorff, exact_partial_all
from pyhausdorff.pairwise import pairwise_files
from pyhausdorff.viability import TraceRecord, ViabilityGraph

_LOGGER = logging.getLogger(__name__)

COMMAND_BUILD = "build"
COMMAND_DIST = "dist"
COMMAND_KDIST = "kdist"
COMMAND_PAIRWISE = "pairwise"
COMMAND_ORACLE = "oracle"
COMMAND_STATS = "stats"
COMMAND_GENERATE = "generate"

ORACLE_DIST = "dist"
ORACLE_KDIST = "kdist"

TREE_SUFFIX = ".json"

_EPS_COMMANDS = (COMMAND_DIST, COMMAND_KDIST, COMMAND_PAIRWISE)


@dataclass
class RunConfig:
    """Options of one CLI invocation."""

    command: str
    paths: List[str] = field(default_factory=list)
    eps: float = DEFAULT_EPS
    alpha: float = DEFAULT_ALPHA
    exact_greedy: bool = False
    metric: str = DEFAULT_METRIC
    out: Optional[str] = None
    directed: bool = False
    header: bool = False
    trace: bool = False
    seed: Optional[int] = None
    action: Optional[str] = None
    count: int = 0
    dim: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Collect options from parsed arguments."""
        paths = getattr(args, "paths", None) or [
            path
            for path in (
                getattr(args, "first", None),
                getattr(args, "second", None),
            )
            if path is not None
        ]
        return cls(
            command=args.command,
            paths=list(paths),
            eps=getattr(args, "eps", DEFAULT_EPS),
            alpha=getattr(args, "alpha", DEFAULT_ALPHA),
            exact_greedy=getattr(args, "exact_greedy", False),
            metric=getattr(args, "metric", DEFAULT_METRIC),
            out=getattr(args, "out", None),
            directed=getattr(args, "directed", False),
            header=getattr(args, "header", False),
            trace=getattr(args, "trace", False),
            seed=getattr(args, "seed", None),
            action=getattr(args, "action", None),
            count=getattr(args, "count", 0),
            dim=getattr(args, "dim", 0),
        )

    @property
    def effective_alpha(self) -> float:
        """Return alpha, or 1 in exact-greedy mode."""
        return 1.0 if self.exact_greedy else self.alpha

    def validate(self):
        """Raise ParameterError on unusable options."""
        if self.command in _EPS_COMMANDS:
            check_eps(self.eps)
        if self.command == COMMAND_BUILD:
            check_alpha(self.effective_alpha)
            if not self.exact_greedy and self.alpha <= 1:
                raise ParameterError(
                    f"Invalid alpha [{self.alpha}], use --exact-greedy for alpha 1"
                )
        if self.command == COMMAND_GENERATE and (self.count < 1 or self.dim < 1):
            raise ParameterError(f"Invalid size [{self.count}x{self.dim}]")


@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        yield out


def _diagnostics(**counters):
    line = " ".join(f"{key}={value}" for key, value in counters.items())
    print(line, file=sys.stderr)


def _trace(record: TraceRecord, graph: ViabilityGraph):
    print(json.dumps(record._asdict()), file=sys.stderr)


def _spread_text(points: PointSet) -> str:
    if len(points) < 2:
        return "undefined"
    return repr(spread(points))


def _load_set(path: str, metric: str) -> PointSet:
    if path.endswith(TREE_SUFFIX):
        return load_tree(path).points
    return read_points(path, metric_from(metric))


def _write_partial(out: TextIO, deltas: Sequence[float], header: bool):
    if header:
        out.write("k,delta\n")
    for k, delta in enumerate(deltas):
        out.write(f"{k},{float(delta)!r}\n")
    out.write(f"# k={len(deltas)} removes every point\n")
    out.write(f"{len(deltas)},0.0\n")


def _tree_paths(paths: Sequence[str]) -> List[str]:
    if len(paths) == 1 and os.path.isdir(paths[0]):
        return sorted(
            os.path.join(paths[0], name)
            for name in os.listdir(paths[0])
            if name.endswith(TREE_SUFFIX)
        )
    return list(paths)


def cmd_build(config: RunConfig) -> int:
    """Build and write the greedy tree of a point file."""
    points = read_points(config.paths[0], metric_from(config.metric))
    counter = DistanceCounter()
    perm = greedy_permutation(points, config.effective_alpha, counter=counter)
    tree = build_tree(perm, counter)
    with _output(config.out) as out:
        out.write(serialize(tree).decode("utf-8"))
        out.write("\n")
    _diagnostics(
        n=len(points),
        spread=_spread_text(points),
        height=tree.height,
        distance_calls=counter.calls,
    )
    return EXIT_OK


def cmd_dist(config: RunConfig) -> int:
    """Print the approximate Hausdorff distance of two tree files."""
    tree_a, tree_b = load_tree(config.paths[0]), load_tree(config.paths[1])
    trace = _trace if config.trace else None
    query = directed_hausdorff if config.directed else hausdorff
    result = query(tree_a, tree_b, config.eps, trace)
    with _output(config.out) as out:
        out.write(f"{result.value!r}\n")
    _diagnostics(
        iterations=result.iterations,
        distance_calls=result.distance_calls,
        max_degree=result.max_degree,
    )
    return EXIT_OK


def cmd_kdist(config: RunConfig) -> int:
    """Write every approximate k-partial distance as k,delta rows."""
    tree_a, tree_b = load_tree(config.paths[0]), load_tree(config.paths[1])
    trace = _trace if config.trace else None
    result = k_hausdorff_all(tree_a, tree_b, config.eps, trace)
    with _output(config.out) as out:
        _write_partial(out, result.deltas, config.header)
    _diagnostics(
        iterations=result.iterations,
        distance_calls=result.distance_calls,
        max_degree=result.max_degree,
        buckets=result.finished_buckets,
    )
    return EXIT_OK


def cmd_pairwise(config: RunConfig) -> int:
    """Write the Hausdorff matrix of prebuilt tree files."""
    paths = _tree_paths(config.paths)
    if len(paths) < 2:
        raise InputError(f"Pairwise needs at least two trees, got [{len(paths)}]")
    report = asyncio.run(
        pairwise_files(paths, config.eps, symmetric=not config.directed)
    )
    with _output(config.out) as out:
        if config.header:
            out.write("," + ",".join(report.labels) + "\n")
        for label, row in zip(report.labels, report.matrix):
            cells = [repr(value) for value in row]
            if config.header:
                cells.insert(0, label)
            out.write(",".join(cells) + "\n")
    _diagnostics(
        tree_loads=report.tree_loads,
        directed_queries=report.directed_queries,
        distance_calls=report.distance_calls,
    )
    return EXIT_OK


def cmd_oracle(config: RunConfig) -> int:
    """Print exact values for point or tree files."""
    set_a = _load_set(config.paths[0], config.metric)
    set_b = _load_set(config.paths[1], config.metric)
    with _output(config.out) as out:
        if config.action == ORACLE_KDIST:
            result = exact_partial_all(set_a, set_b)
            _write_partial(out, result.values, config.header)
        else:
            query = exact_directed if config.directed else exact_hausdorff
            result = query(set_a, set_b)
            out.write(f"{result.value!r}\n")
    _diagnostics(distance_calls=result.distance_calls)
    return EXIT_OK


def cmd_stats(config: RunConfig) -> int:
    """Print tree diagnostics as key=value lines."""
    tree = load_tree(config.paths[0])
    points = tree.points
    problems = verify_tree(tree)
    for problem in problems:
        _LOGGER.warning("%s", problem)

    ratio = spread(points) if len(points) >= 2 else None
    stats = {
        "label": tree.label,
        "n": len(tree),
        "dim": tree.dim,
        "metric": tree.metric.kind,
        "alpha": repr(tree.alpha),
        "nodes": len(tree.nodes),
        "height": tree.height,
        "root_radius": repr(tree.nodes[tree.root].radius),
        "spread": "undefined" if ratio is None else repr(ratio),
    }
    if ratio is not None:
        log_spread = math.log2(ratio)
        stats["log2_spread"] = repr(log_spread)
        if log_spread > 0:
            stats["height_per_log2_spread"] = repr(tree.height / log_spread)
    stats["violations"] = len(problems)
    with _output(config.out) as out:
        for key, value in stats.items():
            out.write(f"{key}={value}\n")
    return EXIT_OK


def cmd_generate(config: RunConfig) -> int:
    """Write uniform random points in the unit cube."""
    rng = np.random.default_rng(config.seed)
    coords = rng.random((config.count, config.dim))
    with _output(config.out) as out:
        for row in coords:
            out.write(",".join(repr(float(value)) for value in row) + "\n")
    return EXIT_OK


_COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    COMMAND_BUILD: cmd_build,
    COMMAND_DIST: cmd_dist,
    COMMAND_KDIST: cmd_kdist,
    COMMAND_PAIRWISE: cmd_pairwise,
    COMMAND_ORACLE: cmd_oracle,
    COMMAND_STATS: cmd_stats,
    COMMAND_GENERATE: cmd_generate,
}


def _add_eps(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--eps", type=float, default=DEFAULT_EPS, help="approximation factor"
    )


def _add_out(parser: argparse.ArgumentParser):
    parser.add_argument("--out", help="output path (default = stdout)")


def _add_metric(parser: argparse.ArgumentParser):
    parser.add_argument("--metric", choices=METRIC_KINDS, default=DEFAULT_METRIC)


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser."""
    parser = argparse.ArgumentParser(
        prog="pyhausdorff",
        description="Approximate Hausdorff distances with greedy trees.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser(COMMAND_BUILD, help="build a tree file")
    build.add_argument("first", metavar="POINTS")
    build.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    build.add_argument("--exact-greedy", action="store_true", help="use alpha = 1")
    _add_metric(build)
    _add_out(build)

    dist = commands.add_parser(COMMAND_DIST, help="approximate distance")
    dist.add_argument("first", metavar="TREE_A")
    dist.add_argument("second", metavar="TREE_B")
    _add_eps(dist)
    dist.add_argument("--directed", action="store_true")
    dist.add_argument("--trace", action="store_true")
    _add_out(dist)

    kdist = commands.add_parser(COMMAND_KDIST, help="all k-partial distances")
    kdist.add_argument("first", metavar="TREE_A")
    kdist.add_argument("second", metavar="TREE_B")
    _add_eps(kdist)
    kdist.add_argument("--header", action="store_true")
    kdist.add_argument("--trace", action="store_true")
    _add_out(kdist)

    pairwise = commands.add_parser(COMMAND_PAIRWISE, help="distance matrix")
    pairwise.add_argument("paths", nargs="+", metavar="TREE")
    _add_eps(pairwise)
    mode = pairwise.add_mutually_exclusive_group()
    mode.add_argument(
        "--symmetric", action="store_true", help="mirror both directions (default)"
    )
    mode.add_argument("--directed", action="store_true")
    pairwise.add_argument("--header", action="store_true")
    _add_out(pairwise)

    oracle = commands.add_parser(COMMAND_ORACLE, help="exact values")
    oracle.add_argument("action", choices=(ORACLE_DIST, ORACLE_KDIST))
    oracle.add_argument("first", metavar="SET_A")
    oracle.add_argument("second", metavar="SET_B")
    _add_metric(oracle)
    oracle.add_argument("--directed", action="store_true")
    oracle.add_argument("--header", action="store_true")
    _add_out(oracle)

    stats = commands.add_parser(COMMAND_STATS, help="tree diagnostics")
    stats.add_argument("first", metavar="TREE")
    _add_out(stats)

    generate = commands.add_parser(COMMAND_GENERATE, help="random points")
    generate.add_argument("count", type=int)
    generate.add_argument("dim", type=int)
    generate.add_argument("--seed", type=int, default=0)
    _add_out(generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit status."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    config = RunConfig.from_args(args)
    try:
        config.validate()
        return _COMMANDS[config.command](config)
    except IncompatibleError as err:
        _LOGGER.error("%s", err)
        return EXIT_INCOMPATIBLE
    except InvariantError as err:
        _LOGGER.error("%s", err)
        return EXIT_INVARIANT
    except (InputError, OSError) as err:
        _LOGGER.error("%s", err)
        return EXIT_INPUT
