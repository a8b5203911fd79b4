"""Approximate directed and symmetric Hausdorff distance."""
import logging
import math
from dataclasses import dataclass
from typing import Optional

from pyhausdorff.const import TREE_A, TREE_B
from pyhausdorff.errors import ParameterError
from pyhausdorff.gtree import GreedyTree, merge_traversals, traversal_list
from pyhausdorff.metric import DistanceCounter
from pyhausdorff.viability import TraceHook, TraceRecord, init_graph

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class QueryResult:
    """Lower bound L with L <= true distance <= (1 + eps) L, and query counters."""

    value: float
    iterations: int
    distance_calls: int
    max_degree: int


def check_eps(eps: float):
    """Raise ParameterError unless eps > 0."""
    if math.isnan(eps) or eps <= 0:
        raise ParameterError(f"Invalid eps [{eps}]")


def directed_hausdorff(
    tree_a: GreedyTree,
    tree_b: GreedyTree,
    eps: float,
    trace: Optional[TraceHook] = None,
) -> QueryResult:
    """Approximate max over a in A of d(a, B).

    Walks both traversals in radius order, splitting nodes and pruning edges,
    until the next radius r satisfies r <= (eps / 2) L. On exhaustion every
    active node is a leaf and L is exact.
    """
    check_eps(eps)
    counter = DistanceCounter()
    graph = init_graph(tree_a, tree_b, counter)
    bound = graph.lower[tree_a.root]

    iterations = 0
    items = merge_traversals(
        traversal_list(tree_a, TREE_A), traversal_list(tree_b, TREE_B)
    )
    for item in items:
        if item.radius <= eps / 2 * bound:
            break
        refresh = graph.split_node(item)
        for x in refresh:
            graph.prune(x)
        for x in refresh:
            bound = max(bound, graph.local_lower_bound(x))
        iterations += 1
        if trace is not None:
            trace(
                TraceRecord(
                    iterations,
                    item.tag,
                    item.node,
                    item.radius,
                    graph.edge_count,
                    graph.max_degree,
                    bound,
                ),
                graph,
            )

    _LOGGER.debug(
        "Directed query [%s] -> [%s]: %r after %d iterations, %d distance calls",
        tree_a.label,
        tree_b.label,
        bound,
        iterations,
        counter.calls,
    )
    return QueryResult(bound, iterations, counter.calls, graph.max_degree)


def hausdorff(
    tree_a: GreedyTree,
    tree_b: GreedyTree,
    eps: float,
    trace: Optional[TraceHook] = None,
) -> QueryResult:
    """Approximate max of both directed distances; counters are summed."""
    forward = directed_hausdorff(tree_a, tree_b, eps, trace)
    backward = directed_hausdorff(tree_b, tree_a, eps, trace)
    return QueryResult(
        max(forward.value, backward.value),
        forward.iterations + backward.iterations,
        forward.distance_calls + backward.distance_calls,
        max(forward.max_degree, backward.max_degree),
    )
