"""Greedy trees, radius-order traversals and tree files."""
import heapq
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy.spatial.distance import pdist

from pyhausdorff.const import PACKING_CHECK_LIMIT, TREE_A, TREE_FORMAT_VERSION
from pyhausdorff.errors import FormatError, InputError
from pyhausdorff.greedy import GreedyPermutation, check_alpha
from pyhausdorff.metric import (
    DistanceCounter,
    Metric,
    PointSet,
    metric_from,
    validate,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeNode:
    """Ball of a greedy tree.

    `center` is a point index. `perm_rank` is the permutation position whose
    insertion created the node (0 for the root).
    """

    id: int
    center: int
    radius: float
    left: Optional[int]
    right: Optional[int]
    leaf_count: int
    perm_rank: int

    @property
    def is_leaf(self) -> bool:
        """Return True for nodes without children."""
        return self.left is None


@dataclass(frozen=True)
class GreedyTree:
    """Binary ball tree induced by a greedy permutation.

    Node ids follow insertion: the i-th insertion splits a leaf into children
    2i - 1 (same center) and 2i (the inserted point). `sorted_nodes` lists the
    internal nodes by non-increasing radius, ascending id on ties.
    """

    perm: GreedyPermutation
    nodes: Tuple[TreeNode, ...]
    root: int
    sorted_nodes: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.perm)

    @property
    def points(self) -> PointSet:
        """Return the indexed point set."""
        return self.perm.source

    @property
    def metric(self) -> Metric:
        """Return the metric of the point set."""
        return self.perm.source.metric

    @property
    def label(self) -> str:
        """Return the point set label."""
        return self.perm.source.label

    @property
    def alpha(self) -> float:
        """Return the alpha used for the permutation."""
        return self.perm.alpha

    @property
    def dim(self) -> int:
        """Return the point dimension."""
        return self.perm.source.dim

    @cached_property
    def center_coords(self) -> np.ndarray:
        """Return center coordinates indexed by node id."""
        return self.points.coords[[node.center for node in self.nodes]]

    @cached_property
    def _leaf_ranges(self) -> Tuple[Tuple[int, ...], List[int], List[int]]:
        return _leaf_ranges(
            [node.left for node in self.nodes],
            [node.right for node in self.nodes],
            [node.center for node in self.nodes],
            self.root,
        )

    def leaves(self, node_id: int) -> Tuple[int, ...]:
        """Return the point indices below a node."""
        leaf_order, start, end = self._leaf_ranges
        return leaf_order[start[node_id] : end[node_id]]

    def leaf_span(self, node_id: int) -> Tuple[int, int]:
        """Return the half-open range of a node's leaves in depth-first order."""
        _, start, end = self._leaf_ranges
        return start[node_id], end[node_id]

    @cached_property
    def height(self) -> int:
        """Return the number of edges on the longest root-to-leaf path."""
        depth = [0] * len(self.nodes)
        for node in self.nodes:
            if not node.is_leaf:
                depth[node.left] = depth[node.id] + 1
                depth[node.right] = depth[node.id] + 1
        return max(depth) if depth else 0


def _leaf_ranges(
    left: List[Optional[int]],
    right: List[Optional[int]],
    centers: List[int],
    root: int,
) -> Tuple[Tuple[int, ...], List[int], List[int]]:
    leaf_order: List[int] = []
    start = [0] * len(centers)
    end = [0] * len(centers)
    stack = [(root, False)]
    while stack:
        node, closing = stack.pop()
        if closing:
            end[node] = len(leaf_order)
            continue
        start[node] = len(leaf_order)
        if left[node] is None:
            leaf_order.append(centers[node])
            end[node] = len(leaf_order)
            continue
        stack.append((node, True))
        stack.append((right[node], False))
        stack.append((left[node], False))
    return tuple(leaf_order), start, end


def build_tree(
    perm: GreedyPermutation, counter: Optional[DistanceCounter] = None
) -> GreedyTree:
    """Build the greedy tree of a permutation with exact radii.

    A radius is the largest distance from the node center to a leaf below it.
    Should a child ever exceed its parent, the parent radius is lifted to the
    child's so the radius-order traversal stays valid.
    """
    n = len(perm)
    size = 2 * n - 1
    centers = [0] * size
    left: List[Optional[int]] = [None] * size
    right: List[Optional[int]] = [None] * size
    rank = [0] * size

    centers[0] = perm.order[0]
    leaf_of = {0: 0}
    for position in range(1, n):
        split = leaf_of[perm.pred[position]]
        left[split], right[split] = 2 * position - 1, 2 * position
        centers[2 * position - 1] = centers[split]
        centers[2 * position] = perm.order[position]
        rank[2 * position - 1] = rank[2 * position] = position
        leaf_of[perm.pred[position]] = 2 * position - 1
        leaf_of[position] = 2 * position

    leaf_order, start, end = _leaf_ranges(left, right, centers, 0)
    coords = perm.source.coords
    leaf_index = np.asarray(leaf_order, dtype=int)
    radius = [0.0] * size
    for node in range(size):
        if left[node] is not None:
            block = coords[leaf_index[start[node] : end[node]]]
            dists = perm.source.metric.distances(coords[centers[node]], block, counter)
            radius[node] = float(dists.max())

    lifted = 0
    for node in reversed(range(size)):
        if left[node] is not None:
            widest = max(radius[left[node]], radius[right[node]])
            if widest > radius[node]:
                radius[node] = widest
                lifted += 1

    nodes = tuple(
        TreeNode(
            node,
            centers[node],
            radius[node],
            left[node],
            right[node],
            end[node] - start[node],
            rank[node],
        )
        for node in range(size)
    )
    sorted_nodes = tuple(
        sorted(
            (node for node in range(size) if left[node] is not None),
            key=lambda node: (-radius[node], node),
        )
    )
    tree = GreedyTree(perm, nodes, 0, sorted_nodes)
    _LOGGER.debug(
        "Built tree [%s]: %d nodes, height %d, root radius %r, %d lifted",
        tree.label,
        size,
        tree.height,
        radius[0],
        lifted,
    )
    return tree


class TraversalItem(NamedTuple):
    """Node scheduled for splitting."""

    tag: str
    node: int
    radius: float


def _traversal_key(item: TraversalItem) -> Tuple[float, str, int]:
    return (-item.radius, item.tag, item.node)


def traversal_list(tree: GreedyTree, tag: str = TREE_A) -> List[TraversalItem]:
    """Return the radius-order traversal of the internal nodes."""
    return [
        TraversalItem(tag, node, tree.nodes[node].radius) for node in tree.sorted_nodes
    ]


def merge_traversals(
    first: Iterable[TraversalItem], second: Iterable[TraversalItem]
) -> List[TraversalItem]:
    """Merge two traversals; equal radii put tag A first, then lower ids."""
    return list(heapq.merge(first, second, key=_traversal_key))


def verify_tree(
    tree: GreedyTree, packing_limit: int = PACKING_CHECK_LIMIT
) -> List[str]:
    """Check structural invariants by brute force.

    Returns human readable violations: child radius above parent radius,
    radius above eps/(alpha - 1) for the center's insertion distance, and
    covering or packing failures at any prefix of the traversal. Packing is
    only checked for trees of at most `packing_limit` points.
    """
    problems = []
    alpha = tree.alpha
    positions = tree.perm.positions
    for node in tree.nodes:
        if not node.is_leaf:
            for child in (node.left, node.right):
                if tree.nodes[child].radius > node.radius:
                    problems.append(f"Child [{child}] wider than parent [{node.id}]")
        if alpha > 1:
            eps = tree.perm.insertion_dist[positions[node.center]]
            if math.isfinite(eps) and node.radius > eps / (alpha - 1) * (1 + 1e-12):
                problems.append(f"Radius bound broken at node [{node.id}]")

    n = len(tree)
    check_packing = alpha > 1 and n <= packing_limit
    active = {tree.root}
    for item in traversal_list(tree):
        if item.node not in active:
            problems.append(f"Traversal splits inactive node [{item.node}]")
            break
        node = tree.nodes[item.node]
        active.remove(node.id)
        active.update((node.left, node.right))

        covered = 0
        for first, last in sorted(tree.leaf_span(x) for x in active):
            if first != covered:
                problems.append(f"Covering broken after node [{node.id}]")
                break
            covered = last
        else:
            if covered != n:
                problems.append(f"Covering broken after node [{node.id}]")

        if check_packing:
            centers = tree.center_coords[sorted(active)]
            gap = pdist(centers, tree.metric.scipy_name).min()
            if gap < (alpha - 1) * item.radius / alpha * (1 - 1e-12):
                problems.append(f"Packing broken after node [{node.id}]")
    return problems


def to_dict(tree: GreedyTree) -> Dict[str, Any]:
    """Return the tree file document."""
    perm = tree.perm
    return {
        "version": TREE_FORMAT_VERSION,
        "label": tree.label,
        "metric": tree.metric.kind,
        "dim": tree.dim,
        "points": [list(point) for point in tree.points.points],
        "alpha": perm.alpha,
        "perm": {
            "order": list(perm.order),
            "pred": list(perm.pred),
            "insertion_dist": [
                None if math.isinf(value) else value for value in perm.insertion_dist
            ],
        },
        "nodes": [
            {
                "id": node.id,
                "center": node.center,
                "radius": node.radius,
                "left": node.left,
                "right": node.right,
                "leaf_count": node.leaf_count,
                "perm_rank": node.perm_rank,
            }
            for node in tree.nodes
        ],
        "root": tree.root,
        "sorted_nodes": list(tree.sorted_nodes),
    }


def serialize(tree: GreedyTree) -> bytes:
    """Encode a tree as a UTF-8 JSON document."""
    return json.dumps(to_dict(tree), allow_nan=False).encode("utf-8")


def _index(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"Expected an integer, found [{value!r}]")
    return value


def _optional_int(value: Any) -> Optional[int]:
    if value is None:
        return None
    return _index(value)


def _length(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"Expected a number, found [{value!r}]")
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise FormatError(f"Invalid length [{value}]")
    return value


def _tree_from(doc: Dict[str, Any]) -> GreedyTree:
    points = PointSet.from_coords(
        doc["points"], metric_from(doc["metric"]), str(doc["label"])
    )
    validate(points)
    if points.dim != _index(doc["dim"]):
        raise FormatError(f"Dimension mismatch [{points.dim}] != [{doc['dim']}]")
    alpha = float(doc["alpha"])
    check_alpha(alpha)

    n = len(points)
    perm_doc = doc["perm"]
    order = tuple(_index(index) for index in perm_doc["order"])
    pred = tuple(_optional_int(position) for position in perm_doc["pred"])
    dists = perm_doc["insertion_dist"]
    if not len(order) == len(pred) == len(dists) == n:
        raise FormatError("Truncated permutation")
    if sorted(order) != list(range(n)) or pred[0] is not None:
        raise FormatError("Invalid permutation")
    if dists[0] is not None:
        raise FormatError("Root insertion distance must be null")
    for position in range(1, n):
        if pred[position] is None or not 0 <= pred[position] < position:
            raise FormatError(f"Invalid predecessor at position [{position}]")
        if dists[position] is None:
            raise FormatError(f"Missing insertion distance at position [{position}]")
    insertion_dist = (math.inf,) + tuple(_length(value) for value in dists[1:])
    perm = GreedyPermutation(points, order, pred, insertion_dist, alpha)

    nodes = tuple(
        TreeNode(
            _index(record["id"]),
            _index(record["center"]),
            _length(record["radius"]),
            _optional_int(record["left"]),
            _optional_int(record["right"]),
            _index(record["leaf_count"]),
            _index(record["perm_rank"]),
        )
        for record in doc["nodes"]
    )
    tree = GreedyTree(
        perm,
        nodes,
        _index(doc["root"]),
        tuple(_index(node) for node in doc["sorted_nodes"]),
    )
    _check_loaded(tree)
    return tree


def _check_loaded(tree: GreedyTree):
    n = len(tree)
    size = len(tree.nodes)
    if size != 2 * n - 1:
        raise FormatError(f"Expected [{2 * n - 1}] nodes, found [{size}]")
    if tree.root != 0:
        raise FormatError(f"Invalid root [{tree.root}]")

    parents = [0] * size
    leaf_centers = set()
    for index, node in enumerate(tree.nodes):
        if node.id != index:
            raise FormatError(f"Node out of place at [{index}]")
        if not 0 <= node.center < n:
            raise FormatError(f"Invalid center at node [{index}]")
        if node.left is None or node.right is None:
            if node.left is not None or node.right is not None:
                raise FormatError(f"Node [{index}] has a single child")
            if node.radius != 0 or node.leaf_count != 1:
                raise FormatError(f"Invalid leaf [{index}]")
            leaf_centers.add(node.center)
            continue
        if not (index < node.left < size and index < node.right < size):
            raise FormatError(f"Invalid children at node [{index}]")
        left, right = tree.nodes[node.left], tree.nodes[node.right]
        parents[node.left] += 1
        parents[node.right] += 1
        if left.center != node.center:
            raise FormatError(f"Left child moves center at node [{index}]")
        if max(left.radius, right.radius) > node.radius:
            raise FormatError(f"Child radius exceeds parent radius at node [{index}]")
        if left.leaf_count + right.leaf_count != node.leaf_count:
            raise FormatError(f"Wrong leaf count at node [{index}]")

    if any(count != 1 for count in parents[1:]) or len(leaf_centers) != n:
        raise FormatError("Leaves do not cover every point exactly once")
    expected = sorted(
        (node.id for node in tree.nodes if not node.is_leaf),
        key=lambda node: (-tree.nodes[node].radius, node),
    )
    if list(tree.sorted_nodes) != expected:
        raise FormatError("Sorted node list out of order")


def deserialize(data: Union[bytes, str]) -> GreedyTree:
    """Decode and check a tree document without recomputing radii."""
    try:
        doc = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise FormatError(f"Malformed tree file [{err}]") from None
    if not isinstance(doc, dict):
        raise FormatError("Malformed tree file")
    if doc.get("version") != TREE_FORMAT_VERSION:
        raise FormatError(f"Unsupported tree file version [{doc.get('version')}]")
    try:
        return _tree_from(doc)
    except FormatError:
        raise
    except InputError as err:
        raise FormatError(f"Invalid tree file [{err}]") from None
    except (KeyError, TypeError, ValueError, IndexError) as err:
        raise FormatError(f"Truncated or malformed tree file [{err}]") from None


def save_tree(tree: GreedyTree, path: str):
    """Write a tree file."""
    with open(path, "wb") as tree_file:
        tree_file.write(serialize(tree))


def load_tree(path: str) -> GreedyTree:
    """Read a tree file."""
    with open(path, "rb") as tree_file:
        tree = deserialize(tree_file.read())
    _LOGGER.debug(
        "Loaded tree [%s] with %d points from %s", tree.label, len(tree), path
    )
    return tree
