"""Approximate greedy permutations with alpha-lazy parent updates."""
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from pyhausdorff.const import DEFAULT_ALPHA
from pyhausdorff.errors import InputError, ParameterError
from pyhausdorff.metric import DistanceCounter, Point, PointSet, validate

_LOGGER = logging.getLogger(__name__)


def check_alpha(alpha: float):
    """Raise ParameterError unless 1 <= alpha < inf."""
    if math.isnan(alpha) or math.isinf(alpha) or alpha < 1:
        raise ParameterError(f"Invalid alpha [{alpha}]")


@dataclass(frozen=True)
class GreedyPermutation:
    """Insertion order of a point set.

    `order[i]` is the point index inserted at position `i`, `pred[i]` is the
    position of its predecessor (None for the root) and `insertion_dist[i]` is
    the distance to that predecessor (infinite for the root).
    """

    source: PointSet
    order: Tuple[int, ...]
    pred: Tuple[Optional[int], ...]
    insertion_dist: Tuple[float, ...]
    alpha: float

    def __len__(self) -> int:
        return len(self.order)

    def point(self, position: int) -> Point:
        """Return the point inserted at `position`."""
        return self.source.points[self.order[position]]

    @cached_property
    def positions(self) -> Tuple[int, ...]:
        """Return the insertion position of every point index."""
        positions = [0] * len(self.order)
        for position, index in enumerate(self.order):
            positions[index] = position
        return tuple(positions)

    @classmethod
    def from_predecessors(
        cls,
        source: PointSet,
        order: Sequence[int],
        pred: Sequence[Optional[int]],
        alpha: float = DEFAULT_ALPHA,
    ) -> "GreedyPermutation":
        """Rebuild a permutation from an explicit order and predecessor list.

        Insertion distances are recomputed from the metric.
        """
        check_alpha(alpha)
        n = len(source)
        order = tuple(int(index) for index in order)
        if sorted(order) != list(range(n)):
            raise InputError(f"Order is not a permutation of [{n}] points")
        if len(pred) != n or (n and pred[0] is not None):
            raise InputError("Root must be the only position without predecessor")
        dists = [math.inf]
        for position in range(1, n):
            parent = pred[position]
            if parent is None or not 0 <= parent < position:
                raise InputError(f"Invalid predecessor at position [{position}]")
            dists.append(
                source.metric.distance(
                    source.points[order[position]], source.points[order[parent]]
                )
            )
        return cls(source, order, tuple(pred), tuple(dists), float(alpha))


class GreedyViolation(NamedTuple):
    """First position where a permutation breaks a greedy invariant."""

    index: int
    reason: str


def greedy_permutation(
    point_set: PointSet,
    alpha: float = DEFAULT_ALPHA,
    root: Optional[int] = None,
    counter: Optional[DistanceCounter] = None,
) -> GreedyPermutation:
    """Compute an alpha-approximate greedy permutation.

    Each round inserts the uninserted point farthest from its parent, lowest
    index first on ties, then reparents every remaining point q to the new
    point p iff alpha * d(p, q) < d(parent(q), q). With alpha = 1 the result is
    an exact greedy permutation.

    Keyword arguments:
        root -- index of the first point (default = 0)
        counter -- receives one count per distance evaluation
    """
    check_alpha(alpha)
    validate(point_set)
    n = len(point_set)
    if root is None:
        root = 0
    if not 0 <= root < n:
        raise InputError(f"Invalid root [{root}] for [{n}] points")

    metric = point_set.metric
    coords = point_set.coords
    inserted = np.zeros(n, dtype=bool)
    inserted[root] = True
    parent = np.full(n, root)
    parent_dist = np.full(n, -np.inf)
    rest = np.flatnonzero(~inserted)
    parent_dist[rest] = metric.distances(coords[root], coords[rest], counter)

    positions = {root: 0}
    order = [root]
    pred: list = [None]
    insertion_dist = [math.inf]
    for position in range(1, n):
        index = int(np.argmax(parent_dist))
        order.append(index)
        pred.append(positions[int(parent[index])])
        insertion_dist.append(float(parent_dist[index]))
        positions[index] = position
        inserted[index] = True
        parent_dist[index] = -np.inf

        rest = np.flatnonzero(~inserted)
        if not rest.size:
            break
        dists = metric.distances(coords[index], coords[rest], counter)
        closer = alpha * dists < parent_dist[rest]
        parent[rest[closer]] = index
        parent_dist[rest[closer]] = dists[closer]

    _LOGGER.debug(
        "Greedy permutation of %d points (alpha=%s, root=%d)", n, alpha, root
    )
    return GreedyPermutation(
        point_set, tuple(order), tuple(pred), tuple(insertion_dist), float(alpha)
    )


def verify_greedy(perm: GreedyPermutation) -> Optional[GreedyViolation]:
    """Check a permutation by brute force.

    Returns the first violation or None when the predecessor, insertion
    distance, alpha-scaling and approximate-greediness invariants all hold.
    """
    n = len(perm)
    if sorted(perm.order) != list(range(len(perm.source))):
        return GreedyViolation(0, "order is not a permutation")
    if n and perm.pred[0] is not None:
        return GreedyViolation(0, "root has a predecessor")

    metric = perm.source.metric
    coords = perm.source.coords
    ordered = coords[list(perm.order)] if n else coords
    nearest = metric.distances(ordered[0], ordered) if n else np.zeros(0)
    for i in range(1, n):
        parent = perm.pred[i]
        if parent is None or not 0 <= parent < i:
            return GreedyViolation(i, "predecessor not inserted earlier")
        eps_i = perm.insertion_dist[i]
        expected = metric.distance(perm.point(i), perm.point(parent))
        if not math.isclose(eps_i, expected, rel_tol=1e-12, abs_tol=0.0):
            return GreedyViolation(i, "insertion distance differs from metric")
        scaled = perm.insertion_dist[parent] / perm.alpha
        if parent != 0 and eps_i > scaled * (1 + 1e-12):
            return GreedyViolation(i, "alpha-scaling broken")
        if nearest[i:].max() > perm.alpha * eps_i:
            return GreedyViolation(i, "a remaining point is too far from the prefix")
        nearest = np.minimum(nearest, metric.distances(ordered[i], ordered))
    return None
