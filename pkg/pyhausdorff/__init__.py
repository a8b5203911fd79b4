"""Greedy-tree Hausdorff distance library."""
from concurrent.futures import Executor
from typing import Optional, Sequence

from pyhausdorff.const import (
    DEFAULT_ALPHA,
    DEFAULT_EPS,
    METRIC_L1,
    METRIC_L2,
    METRIC_LINF,
)
from pyhausdorff.errors import (
    FormatError,
    HausdorffError,
    IncompatibleError,
    InputError,
    InvariantError,
    ParameterError,
    ValidationError,
)
from pyhausdorff.greedy import GreedyPermutation, greedy_permutation, verify_greedy
from pyhausdorff.gtree import (
    GreedyTree,
    build_tree,
    deserialize,
    load_tree,
    save_tree,
    serialize,
    verify_tree,
)
from pyhausdorff.hausdorff import QueryResult, directed_hausdorff, hausdorff
from pyhausdorff.kpartial import PartialResult, k_hausdorff_all, partial_hausdorff
from pyhausdorff.metric import (
    DistanceCounter,
    Metric,
    PointSet,
    metric_from,
    read_points,
    spread,
    validate,
)
from pyhausdorff.oracle import (
    exact_directed,
    exact_hausdorff,
    exact_partial,
    exact_partial_all,
)
from pyhausdorff.pairwise import PairwiseReport, pairwise_distances


def build(
    point_set: PointSet, alpha: float = DEFAULT_ALPHA, root: Optional[int] = None
) -> GreedyTree:
    """Preprocess a point set into a greedy tree.

    Trees are immutable and may be shared by any number of queries. Build each
    set once and reuse the tree (or its file) for every query involving it.
    """
    return build_tree(greedy_permutation(point_set, alpha, root))


async def pairwise(
    trees: Sequence[GreedyTree],
    eps: float = DEFAULT_EPS,
    executor: Optional[Executor] = None,
    *,
    symmetric: bool = True,
) -> PairwiseReport:
    """Compute the Hausdorff matrix of prebuilt trees.

    Directed queries run concurrently in `executor` (default = a private
    thread pool that is shut down afterwards).

    Keyword arguments:
        symmetric -- mirror the larger direction into both cells. (default = True)
    """
    return await pairwise_distances(trees, eps, executor, symmetric=symmetric)


__all__ = [
    "DEFAULT_ALPHA",
    "DEFAULT_EPS",
    "METRIC_L1",
    "METRIC_L2",
    "METRIC_LINF",
    "DistanceCounter",
    "FormatError",
    "GreedyPermutation",
    "GreedyTree",
    "HausdorffError",
    "IncompatibleError",
    "InputError",
    "InvariantError",
    "Metric",
    "PairwiseReport",
    "ParameterError",
    "PartialResult",
    "PointSet",
    "QueryResult",
    "ValidationError",
    "build",
    "build_tree",
    "deserialize",
    "directed_hausdorff",
    "exact_directed",
    "exact_hausdorff",
    "exact_partial",
    "exact_partial_all",
    "greedy_permutation",
    "hausdorff",
    "k_hausdorff_all",
    "load_tree",
    "metric_from",
    "pairwise",
    "partial_hausdorff",
    "read_points",
    "save_tree",
    "serialize",
    "spread",
    "validate",
    "verify_greedy",
    "verify_tree",
]
