"""All k-partial directed Hausdorff distances in one pass."""
import heapq
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple, Union

from pyhausdorff.const import TREE_A, TREE_B
from pyhausdorff.errors import InvariantError, ParameterError
from pyhausdorff.gtree import (
    GreedyTree,
    TraversalItem,
    merge_traversals,
    traversal_list,
)
from pyhausdorff.hausdorff import check_eps
from pyhausdorff.metric import DistanceCounter
from pyhausdorff.viability import TraceHook, TraceRecord, ViabilityGraph, init_graph

_LOGGER = logging.getLogger(__name__)

# Relative slack for the lower-bound growth caps.
_GROWTH_TOLERANCE = 1e-9


def bucket_index(value: float, beta: float) -> Optional[int]:
    """Return m with beta**m < value <= beta**(m + 1), or None for zero."""
    if math.isnan(value) or value < 0:
        raise InvariantError(f"Invalid bucket key [{value}]")
    if value == 0:
        return None
    m = math.ceil(math.log(value) / math.log(beta)) - 1
    while beta ** m >= value:
        m -= 1
    while beta ** (m + 1) < value:
        m += 1
    return m


def finish_threshold(radius: float, beta: float) -> Union[int, float]:
    """Return the least s with beta**s >= 2 r beta / (beta - 1).

    Zero radius returns -inf: every bucket can be finished.
    """
    if math.isnan(radius) or radius < 0:
        raise InvariantError(f"Invalid radius [{radius}]")
    if radius == 0:
        return -math.inf
    target = 2 * radius * beta / (beta - 1)
    s = math.ceil(math.log(target) / math.log(beta))
    while beta ** (s - 1) >= target:
        s -= 1
    while beta ** s < target:
        s += 1
    return s


class BucketQueue:
    """Monotone approximate max-heap over geometric buckets.

    Bucket m holds the nodes whose key lies in (beta**m, beta**(m + 1)];
    zero keys go to a separate bucket. Occupied indices sit in a max-heap so
    the finishing sweep touches each index at most once.
    """

    def __init__(self, beta: float):
        """Initialize an empty queue."""
        if not beta > 1:
            raise ParameterError(f"Invalid beta [{beta}]")
        self.beta = beta
        self.cursor: Optional[int] = None
        self._buckets: Dict[int, Set[int]] = {}
        self._zero: Set[int] = set()
        self._key_of: Dict[int, Optional[int]] = {}
        self._heap: List[int] = []
        self._in_heap: Set[int] = set()

    def __len__(self) -> int:
        return len(self._key_of)

    def __contains__(self, node: int) -> bool:
        return node in self._key_of

    def bucket_of(self, node: int) -> Optional[int]:
        """Return the bucket index of a queued node, None for the zero bucket."""
        return self._key_of[node]

    def push(self, node: int, value: float) -> Optional[int]:
        """Insert or move a node according to its key; returns its bucket."""
        self.remove(node)
        index = bucket_index(value, self.beta)
        self._key_of[node] = index
        if index is None:
            self._zero.add(node)
            return None
        self._buckets.setdefault(index, set()).add(node)
        if index not in self._in_heap:
            self._in_heap.add(index)
            heapq.heappush(self._heap, -index)
        return index

    def remove(self, node: int):
        """Drop a node if it is queued."""
        if node not in self._key_of:
            return
        index = self._key_of.pop(node)
        if index is None:
            self._zero.discard(node)
            return
        bucket = self._buckets[index]
        bucket.discard(node)
        if not bucket:
            del self._buckets[index]

    def pop_bucket(self, floor: Union[int, float]) -> Optional[Tuple[int, List[int]]]:
        """Remove the highest occupied bucket with index >= floor.

        Returns its index and nodes in ascending order, or None.
        """
        while self._heap and -self._heap[0] >= floor:
            index = -heapq.heappop(self._heap)
            self._in_heap.discard(index)
            nodes = self._buckets.pop(index, None)
            if not nodes:
                continue
            if self.cursor is not None and index >= self.cursor:
                raise InvariantError(f"Bucket [{index}] swept twice")
            self.cursor = index
            for node in nodes:
                del self._key_of[node]
            return index, sorted(nodes)
        return None

    def pop_zero(self) -> List[int]:
        """Remove and return the zero bucket in ascending order."""
        nodes = sorted(self._zero)
        for node in nodes:
            del self._key_of[node]
        self._zero.clear()
        return nodes


@dataclass(frozen=True)
class PartialResult:
    """Approximate k-partial distances for k = 0 .. |A| - 1."""

    deltas: Tuple[float, ...]
    eps: float
    beta: float
    iterations: int
    distance_calls: int
    max_degree: int
    finished_buckets: int
    stability_violations: int
    growth_violations: int


class _PartialQuery:
    def __init__(
        self,
        tree_a: GreedyTree,
        tree_b: GreedyTree,
        eps: float,
        trace: Optional[TraceHook],
    ):
        self.tree_a = tree_a
        self.beta = 1 + eps / 2
        self.trace = trace
        self.counter = DistanceCounter()
        self.graph: ViabilityGraph = init_graph(tree_a, tree_b, self.counter)
        self.queue = BucketQueue(self.beta)
        self.deltas: List[float] = []
        self.finished: Set[int] = set()
        self.finished_buckets = 0
        self.stability_violations = 0
        self.growth_violations = 0
        self.iterations = 0
        self.bound = self.graph.lower[tree_a.root]
        root_a, root_b = tree_a.root, tree_b.root
        self.extreme = (
            self.graph.adj_a[root_a][root_b]
            + tree_a.nodes[root_a].radius
            + tree_b.nodes[root_b].radius
        )

    def key(self, x: int) -> float:
        """Lower bound on d(a, B) shared by every leaf a below x."""
        value = max(self.graph.lower[x] - self.tree_a.nodes[x].radius, 0.0)
        if value > self.extreme * (1 + _GROWTH_TOLERANCE):
            raise InvariantError(f"Key [{value}] of node [{x}] beyond [{self.extreme}]")
        return value

    def finish(self, x: int, delta: float):
        self.deltas.extend([delta] * self.tree_a.nodes[x].leaf_count)
        self.graph.remove_a(x)
        self.queue.remove(x)
        self.finished.add(x)

    def sweep(self, floor: Union[int, float]):
        while True:
            popped = self.queue.pop_bucket(floor)
            if popped is None:
                return
            index, nodes = popped
            self.finished_buckets += 1
            delta = self.beta ** index
            for x in nodes:
                self.finish(x, delta)

    def update(self, x: int, cap: float, threshold: Union[int, float]):
        value = self.graph.local_lower_bound(x)
        self.bound = max(self.bound, value)
        if value > cap + _GROWTH_TOLERANCE * max(cap, 1.0):
            self.growth_violations += 1
        key = self.key(x)
        index = bucket_index(key, self.beta)
        if index is not None and index >= threshold:
            if index > threshold:
                self.stability_violations += 1
            self.finish(x, self.beta ** threshold)
            return
        self.queue.push(x, key)

    def step(self, item: TraversalItem):
        # 3r <= (beta - 1) beta**s: a queued key stays below beta**(s + 1).
        threshold = finish_threshold(
            max(1.0, 1.5 / self.beta) * item.radius, self.beta
        )
        self.sweep(threshold)

        graph = self.graph
        if item.tag == TREE_A:
            split = self.tree_a.nodes[item.node]
            if item.node not in graph.adj_a:
                if item.node not in self.finished:
                    raise InvariantError(f"Split of inactive node [{item.node}]")
                self.finished.update((split.left, split.right))
                return
            parent_lower = graph.lower[item.node]
            caps = {
                split.left: parent_lower + item.radius,
                split.right: parent_lower + 2 * item.radius,
            }
            self.queue.remove(item.node)
        else:
            if item.node not in graph.adj_b:
                raise InvariantError(f"Split of inactive node [{item.node}]")
            caps = {
                x: graph.lower[x] + item.radius for x in graph.adj_b[item.node]
            }

        refresh = graph.split_node(item)
        for x in refresh:
            graph.prune(x)
        for x in refresh:
            self.update(x, caps[x], threshold)

        self.iterations += 1
        if self.trace is not None:
            self.trace(
                TraceRecord(
                    self.iterations,
                    item.tag,
                    item.node,
                    item.radius,
                    graph.edge_count,
                    graph.max_degree,
                    self.bound,
                ),
                graph,
            )

    def drain(self):
        self.sweep(-math.inf)
        for x in self.queue.pop_zero():
            self.finish(x, 0.0)


def k_hausdorff_all(
    tree_a: GreedyTree,
    tree_b: GreedyTree,
    eps: float,
    trace: Optional[TraceHook] = None,
) -> PartialResult:
    """Approximate every k-partial directed distance from A to B.

    Returns |A| non-increasing values with delta_k <= d_k <= (1 + eps) delta_k,
    where d_k is the (k + 1)-st largest d(a, B). Active A-nodes are queued by
    max(l(x) - rad(x), 0) with beta = 1 + eps / 2; whole buckets are finished
    once the traversal radius is small against them.
    """
    check_eps(eps)
    query = _PartialQuery(tree_a, tree_b, eps, trace)
    query.queue.push(tree_a.root, query.key(tree_a.root))
    items = merge_traversals(
        traversal_list(tree_a, TREE_A), traversal_list(tree_b, TREE_B)
    )
    for item in items:
        query.step(item)
    query.drain()

    if len(query.deltas) != len(tree_a):
        raise InvariantError(
            f"Emitted [{len(query.deltas)}] values for [{len(tree_a)}] points"
        )
    _LOGGER.debug(
        "Partial query [%s] -> [%s]: %d iterations, %d buckets, %d distance calls",
        tree_a.label,
        tree_b.label,
        query.iterations,
        query.finished_buckets,
        query.counter.calls,
    )
    return PartialResult(
        tuple(query.deltas),
        eps,
        query.beta,
        query.iterations,
        query.counter.calls,
        query.graph.max_degree,
        query.finished_buckets,
        query.stability_violations,
        query.growth_violations,
    )


def partial_hausdorff(
    tree_a: GreedyTree, tree_b: GreedyTree, k: int, eps: float
) -> float:
    """Approximate distance after discarding the k farthest points of A."""
    if not 0 <= k <= len(tree_a):
        raise ParameterError(f"Invalid k [{k}] for [{len(tree_a)}] points")
    if k == len(tree_a):
        return 0.0
    return k_hausdorff_all(tree_a, tree_b, eps).deltas[k]
