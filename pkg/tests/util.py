import os
from typing import Optional

import numpy as np

from pyhausdorff.greedy import greedy_permutation
from pyhausdorff.gtree import GreedyTree, build_tree
from pyhausdorff.metric import Metric, PointSet, read_points

SAMPLES = os.path.join(os.path.dirname(__file__), "samples")


def sample_path(name: str) -> str:
    return os.path.join(SAMPLES, name)


def load_sample(name: str, metric: Optional[Metric] = None) -> PointSet:
    return read_points(sample_path(name), metric)


def line(*values: float, label: str = "") -> PointSet:
    return PointSet.from_coords([[value] for value in values], label=label)


def build(
    point_set: PointSet, alpha: float = 2.0, root: Optional[int] = None
) -> GreedyTree:
    return build_tree(greedy_permutation(point_set, alpha, root))


def random_set(
    seed: int,
    n: int,
    dim: int = 2,
    metric: Optional[Metric] = None,
    label: str = "",
) -> PointSet:
    rng = np.random.default_rng(seed)
    return PointSet.from_coords(rng.random((n, dim)), metric, label)


def assert_sandwich(approx: float, exact: float, eps: float):
    assert approx <= exact * (1 + 1e-12)
    assert exact <= (1 + eps) * approx * (1 + 1e-12)
