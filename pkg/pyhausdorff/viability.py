"""Viability graph shared by the Hausdorff queries."""
import logging
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
)

from pyhausdorff.const import TREE_A
from pyhausdorff.errors import IncompatibleError, InvariantError
from pyhausdorff.gtree import GreedyTree, TraversalItem
from pyhausdorff.metric import DistanceCounter

_LOGGER = logging.getLogger(__name__)


def pruned_neighbors(
    dists: Mapping[int, float], radii: Sequence[float], rad_x: float
) -> List[int]:
    """Return neighbors y with d(x, y) - rad(y) > min d(x, y') + 2 rad(x)."""
    if not dists:
        return []
    limit = min(dists.values()) + 2 * rad_x
    return [y for y, dist in dists.items() if dist - radii[y] > limit]


def lower_bound_of(dists: Mapping[int, float], radii: Sequence[float]) -> float:
    """Return max(min over neighbors of d(x, y) - rad(y), 0)."""
    if not dists:
        raise InvariantError("Local lower bound of a node without neighbors")
    return max(min(dist - radii[y] for y, dist in dists.items()), 0.0)


class TraceRecord(NamedTuple):
    """One query iteration, as streamed by --trace."""

    iteration: int
    tag: str
    node: int
    radius: float
    edges: int
    max_degree: int
    bound: float


TraceHook = Callable[[TraceRecord, "ViabilityGraph"], None]


class ViabilityGraph:
    """Bipartite graph between the active nodes of two greedy trees.

    Edges cache the distance between node centers, stored on both sides.
    `lower` holds the local lower bound of every active A-node.
    """

    def __init__(
        self,
        tree_a: GreedyTree,
        tree_b: GreedyTree,
        counter: Optional[DistanceCounter] = None,
    ):
        """Initialize with both roots active and adjacent."""
        self.tree_a = tree_a
        self.tree_b = tree_b
        self.counter = counter if counter is not None else DistanceCounter()
        self._radii_a = [node.radius for node in tree_a.nodes]
        self._radii_b = [node.radius for node in tree_b.nodes]

        dist = tree_a.metric.distance(
            tree_a.center_coords[tree_a.root],
            tree_b.center_coords[tree_b.root],
            self.counter,
        )
        self.adj_a: Dict[int, Dict[int, float]] = {tree_a.root: {tree_b.root: dist}}
        self.adj_b: Dict[int, Dict[int, float]] = {tree_b.root: {tree_a.root: dist}}
        self.lower: Dict[int, float] = {}
        self.edge_count = 1
        self.max_degree = 1
        self.removed_a: List[int] = []
        self.local_lower_bound(tree_a.root)

    def split_node(self, item: TraversalItem) -> List[int]:
        """Replace an active node by its children.

        Each child inherits every edge of the node; the left child keeps the
        cached distances. Returns the A-nodes to prune and refresh: both
        children for an A split, the neighbors of the left child otherwise.
        """
        if item.tag == TREE_A:
            return self._split(
                item.node, self.tree_a, self.tree_b, self.adj_a, self.adj_b, True
            )
        return self._split(
            item.node, self.tree_b, self.tree_a, self.adj_b, self.adj_a, False
        )

    def _split(self, node_id, tree, other, adj, other_adj, is_a) -> List[int]:
        if node_id not in adj:
            raise InvariantError(f"Split of inactive node [{node_id}]")
        node = tree.nodes[node_id]
        if node.is_leaf:
            raise InvariantError(f"Split of leaf [{node_id}]")
        nbrs = adj.pop(node_id)
        if is_a:
            self.lower.pop(node_id, None)

        ids = list(nbrs)
        right = {}
        if ids:
            dists = tree.metric.distances(
                tree.center_coords[node.right], other.center_coords[ids], self.counter
            )
            right = {y: float(dist) for y, dist in zip(ids, dists)}
        adj[node.left] = dict(nbrs)
        adj[node.right] = right
        for y in ids:
            back = other_adj[y]
            del back[node_id]
            back[node.left] = nbrs[y]
            back[node.right] = right[y]
            self.max_degree = max(self.max_degree, len(back))
        self.edge_count += len(ids)
        self.max_degree = max(self.max_degree, len(ids))

        if is_a:
            return [node.left, node.right]
        return sorted(nbrs)

    def prune(self, x: int) -> List[int]:
        """Drop the edges of A-node `x` that cannot reach its nearest neighbor."""
        nbrs = self.adj_a[x]
        removed = pruned_neighbors(nbrs, self._radii_b, self._radii_a[x])
        for y in removed:
            del nbrs[y]
            del self.adj_b[y][x]
        self.edge_count -= len(removed)
        return removed

    def local_lower_bound(self, x: int) -> float:
        """Recompute and store the local lower bound of A-node `x`."""
        value = lower_bound_of(self.adj_a[x], self._radii_b)
        self.lower[x] = value
        return value

    def remove_a(self, x: int):
        """Remove A-node `x` and its edges."""
        nbrs = self.adj_a.pop(x)
        for y in nbrs:
            del self.adj_b[y][x]
        self.edge_count -= len(nbrs)
        self.lower.pop(x, None)
        self.removed_a.append(x)

    def degree(self, x: int) -> int:
        """Return the degree of A-node `x`."""
        return len(self.adj_a[x])


def init_graph(
    tree_a: GreedyTree,
    tree_b: GreedyTree,
    counter: Optional[DistanceCounter] = None,
) -> ViabilityGraph:
    """Return the initial graph joining both roots."""
    if tree_a.metric != tree_b.metric or tree_a.dim != tree_b.dim:
        raise IncompatibleError(
            f"Incompatible trees [{tree_a.label}] and [{tree_b.label}]: "
            f"[{tree_a.metric.kind}/{tree_a.dim}] != "
            f"[{tree_b.metric.kind}/{tree_b.dim}]"
        )
    return ViabilityGraph(tree_a, tree_b, counter)


def _owners(tree: GreedyTree, nodes: Iterable[int]) -> Dict[int, List[int]]:
    owners: Dict[int, List[int]] = {}
    for node in nodes:
        for point in tree.leaves(node):
            owners.setdefault(point, []).append(node)
    return owners


def check_invariants(graph: ViabilityGraph, nearest_b: Sequence[int]) -> List[str]:
    """Check the covering and edge invariants by brute force.

    `nearest_b[a]` is the index of a nearest B point for every A point.
    Points under removed A-nodes must still be covered but need no edge.
    """
    problems = []
    finished = set(graph.removed_a)
    owners_a = _owners(graph.tree_a, list(graph.adj_a) + graph.removed_a)
    owners_b = _owners(graph.tree_b, graph.adj_b)
    for side, owners, size in (
        ("A", owners_a, len(graph.tree_a)),
        ("B", owners_b, len(graph.tree_b)),
    ):
        if len(owners) != size or any(len(nodes) != 1 for nodes in owners.values()):
            problems.append(f"Covering broken on side [{side}]")
    if problems:
        return problems

    for a, b in enumerate(nearest_b):
        x = owners_a[a][0]
        if x in finished:
            continue
        y = owners_b[b][0]
        if y not in graph.adj_a[x]:
            problems.append(f"Edge missing for point [{a}]: [{x}] -> [{y}]")
    return problems
