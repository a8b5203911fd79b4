"""Exact brute-force references."""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from pyhausdorff.errors import IncompatibleError, ParameterError
from pyhausdorff.metric import DistanceCounter, PointSet


@dataclass(frozen=True)
class OracleResult:
    """Exact value(s) and the number of distance evaluations spent."""

    values: Tuple[float, ...]
    distance_calls: int

    @property
    def value(self) -> float:
        """Return the first (largest) value."""
        return self.values[0]


def _check_compatible(set_a: PointSet, set_b: PointSet):
    if set_a.metric != set_b.metric or set_a.dim != set_b.dim:
        raise IncompatibleError(
            f"Incompatible sets [{set_a.label}] and [{set_b.label}]: "
            f"[{set_a.metric.kind}/{set_a.dim}] != [{set_b.metric.kind}/{set_b.dim}]"
        )


def _nearest(
    set_a: PointSet, set_b: PointSet, counter: DistanceCounter
) -> Tuple[np.ndarray, np.ndarray]:
    _check_compatible(set_a, set_b)
    dists = np.empty(len(set_a))
    nearest = np.empty(len(set_a), dtype=int)
    for index, point in enumerate(set_a.coords):
        row = set_a.metric.distances(point, set_b.coords, counter)
        nearest[index] = int(np.argmin(row))
        dists[index] = row[nearest[index]]
    return dists, nearest


def nearest_neighbors(set_a: PointSet, set_b: PointSet) -> List[int]:
    """Return the index of a nearest B point for every A point."""
    return [int(index) for index in _nearest(set_a, set_b, DistanceCounter())[1]]


def exact_directed(
    set_a: PointSet, set_b: PointSet, counter: Optional[DistanceCounter] = None
) -> OracleResult:
    """Return max over a of min over b of d(a, b)."""
    counter = counter if counter is not None else DistanceCounter()
    dists, _ = _nearest(set_a, set_b, counter)
    return OracleResult((float(dists.max()),), counter.calls)


def exact_partial_all(
    set_a: PointSet, set_b: PointSet, counter: Optional[DistanceCounter] = None
) -> OracleResult:
    """Return every d(a, B) sorted in descending order."""
    counter = counter if counter is not None else DistanceCounter()
    dists, _ = _nearest(set_a, set_b, counter)
    values = sorted((float(dist) for dist in dists), reverse=True)
    return OracleResult(tuple(values), counter.calls)


def exact_partial(set_a: PointSet, set_b: PointSet, k: int) -> OracleResult:
    """Return the (k + 1)-st largest d(a, B); zero when k = |A|."""
    if not 0 <= k <= len(set_a):
        raise ParameterError(f"Invalid k [{k}] for [{len(set_a)}] points")
    result = exact_partial_all(set_a, set_b)
    if k == len(set_a):
        return OracleResult((0.0,), result.distance_calls)
    return OracleResult((result.values[k],), result.distance_calls)


def exact_hausdorff(set_a: PointSet, set_b: PointSet) -> OracleResult:
    """Return the larger of both exact directed distances."""
    counter = DistanceCounter()
    forward = exact_directed(set_a, set_b, counter)
    backward = exact_directed(set_b, set_a, counter)
    return OracleResult((max(forward.value, backward.value),), counter.calls)
