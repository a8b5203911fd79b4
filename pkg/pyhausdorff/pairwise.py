"""Pairwise Hausdorff matrices over prebuilt trees."""
import asyncio
import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from pyhausdorff.errors import IncompatibleError, InputError
from pyhausdorff.gtree import GreedyTree, load_tree
from pyhausdorff.hausdorff import QueryResult, check_eps, directed_hausdorff

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairwiseReport:
    """Distance matrix with its accounting.

    Trees are loaded once each and every ordered pair is queried once, so a
    run over k trees reports k loads and k (k - 1) directed queries.
    """

    matrix: Tuple[Tuple[float, ...], ...]
    labels: Tuple[str, ...]
    tree_loads: int
    directed_queries: int
    distance_calls: int


class PairwiseRunner:
    """Runs directed queries for every ordered pair of trees.

    Please close the runner when it created its own executor; using it as an
    async context manager does that.
    """

    def __init__(
        self,
        eps: float,
        executor: Optional[Executor] = None,
        *,
        symmetric: bool = True,
    ):
        """Initialize pairwise runner."""
        check_eps(eps)
        self._eps = eps
        self._symmetric = symmetric
        if executor:
            self._executor = executor
            self._managed_executor = False
        else:
            self._executor = ThreadPoolExecutor()
            self._managed_executor = True
        self._tree_loads = 0

    @property
    def tree_loads(self) -> int:
        """Return number of tree files loaded."""
        return self._tree_loads

    def load(self, paths: Sequence[str]) -> List[GreedyTree]:
        """Load every tree file once."""
        trees = []
        for path in paths:
            trees.append(load_tree(path))
            self._tree_loads += 1
        return trees

    async def run_files(self, paths: Sequence[str]) -> PairwiseReport:
        """Load the trees at `paths` and run every pair."""
        if len(paths) < 2:
            raise InputError(f"Pairwise needs at least two trees, got [{len(paths)}]")
        return await self.run(self.load(paths))

    async def run(self, trees: Sequence[GreedyTree]) -> PairwiseReport:
        """Run every ordered pair; assembly is independent of completion order."""
        count = len(trees)
        if count < 2:
            raise InputError(f"Pairwise needs at least two trees, got [{count}]")
        for other in trees[1:]:
            if other.metric != trees[0].metric or other.dim != trees[0].dim:
                raise IncompatibleError(
                    f"Incompatible trees [{trees[0].label}] and [{other.label}]"
                )

        loop = asyncio.get_running_loop()
        pairs = [(i, j) for i in range(count) for j in range(count) if i != j]
        results: List[QueryResult] = await asyncio.gather(
            *(
                loop.run_in_executor(
                    self._executor, directed_hausdorff, trees[i], trees[j], self._eps
                )
                for i, j in pairs
            )
        )
        directed: Dict[Tuple[int, int], float] = {
            pair: result.value for pair, result in zip(pairs, results)
        }

        matrix = []
        for i in range(count):
            row = []
            for j in range(count):
                if i == j:
                    row.append(0.0)
                elif self._symmetric:
                    row.append(max(directed[i, j], directed[j, i]))
                else:
                    row.append(directed[i, j])
            matrix.append(tuple(row))

        _LOGGER.debug("Ran %d directed queries over %d trees", len(pairs), count)
        return PairwiseReport(
            tuple(matrix),
            tuple(tree.label for tree in trees),
            self._tree_loads,
            len(pairs),
            sum(result.distance_calls for result in results),
        )

    def close(self):
        """Shut down the executor if the runner owns it."""
        if self._managed_executor:
            self._executor.shutdown()

    async def __aenter__(self) -> "PairwiseRunner":
        return self

    async def __aexit__(self, *exc_info):
        self.close()


async def pairwise_distances(
    trees: Sequence[GreedyTree],
    eps: float,
    executor: Optional[Executor] = None,
    *,
    symmetric: bool = True,
) -> PairwiseReport:
    """Compute the Hausdorff matrix of prebuilt trees.

    Keyword arguments:
        executor -- runs the directed queries (default = a private thread pool)
        symmetric -- mirror max of both directions (default = True); otherwise
            cell (i, j) holds the directed distance from tree i to tree j
    """
    async with PairwiseRunner(eps, executor, symmetric=symmetric) as runner:
        return await runner.run(trees)


async def pairwise_files(
    paths: Sequence[str],
    eps: float,
    executor: Optional[Executor] = None,
    *,
    symmetric: bool = True,
) -> PairwiseReport:
    """Load tree files once each and compute their Hausdorff matrix."""
    async with PairwiseRunner(eps, executor, symmetric=symmetric) as runner:
        return await runner.run_files(paths)
