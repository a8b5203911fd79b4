"""Metrics, point sets and point files."""
import logging
import math
import os
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple, Type

import numpy as np

from pyhausdorff.const import DEFAULT_METRIC, METRIC_L1, METRIC_L2, METRIC_LINF
from pyhausdorff.errors import InputError, ParameterError, ValidationError

_LOGGER = logging.getLogger(__name__)

Point = Tuple[float, ...]

_SEPARATOR = re.compile(r"[,\s]+")


class DistanceCounter:
    """Number of metric evaluations made by one query or build."""

    def __init__(self):
        """Initialize a zeroed counter."""
        self.calls = 0

    def add(self, count: int = 1):
        """Record `count` evaluations."""
        self.calls += count

    def __repr__(self) -> str:
        return f"DistanceCounter(calls={self.calls})"


class Metric(ABC):
    """Distance function over points of a common dimension.

    The single-pair and one-to-many kernels accumulate coordinates in the same
    order, so `distance(p, q)` and `distances(p, block)[i]` agree bit for bit.
    """

    kind = ""
    scipy_name = ""

    def __eq__(self, other) -> bool:
        return isinstance(other, Metric) and other.kind == self.kind

    def __hash__(self) -> int:
        return hash(self.kind)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"

    @abstractmethod
    def _pair(self, p: Sequence[float], q: Sequence[float]) -> float:
        pass

    @abstractmethod
    def _block(self, diff: np.ndarray) -> np.ndarray:
        pass

    def distance(
        self,
        p: Sequence[float],
        q: Sequence[float],
        counter: Optional[DistanceCounter] = None,
    ) -> float:
        """Return the distance between two points."""
        if len(p) != len(q):
            raise InputError(f"Dimension mismatch [{len(p)}] != [{len(q)}]")
        if counter is not None:
            counter.add()
        return self._pair(p, q)

    def distances(
        self,
        p: Sequence[float],
        block: np.ndarray,
        counter: Optional[DistanceCounter] = None,
    ) -> np.ndarray:
        """Return distances from `p` to every row of `block`.

        Counts one evaluation per row.
        """
        block = np.asarray(block, dtype=float)
        origin = np.asarray(p, dtype=float)
        if block.ndim != 2 or block.shape[1] != origin.shape[0]:
            raise InputError(
                f"Dimension mismatch [{origin.shape[0]}] != [{block.shape[-1]}]"
            )
        if counter is not None:
            counter.add(block.shape[0])
        return self._block(block - origin)


class L2Metric(Metric):
    """Euclidean distance."""

    kind = METRIC_L2
    scipy_name = "euclidean"

    def _pair(self, p, q):
        acc = 0.0
        for a, b in zip(p, q):
            diff = float(a) - float(b)
            acc += diff * diff
        return math.sqrt(acc)

    def _block(self, diff):
        acc = np.zeros(diff.shape[0])
        for column in range(diff.shape[1]):
            acc += diff[:, column] * diff[:, column]
        return np.sqrt(acc)


class L1Metric(Metric):
    """Manhattan distance."""

    kind = METRIC_L1
    scipy_name = "cityblock"

    def _pair(self, p, q):
        acc = 0.0
        for a, b in zip(p, q):
            acc += abs(float(a) - float(b))
        return acc

    def _block(self, diff):
        acc = np.zeros(diff.shape[0])
        for column in range(diff.shape[1]):
            acc += np.abs(diff[:, column])
        return acc


class LInfMetric(Metric):
    """Chebyshev distance."""

    kind = METRIC_LINF
    scipy_name = "chebyshev"

    def _pair(self, p, q):
        acc = 0.0
        for a, b in zip(p, q):
            acc = max(acc, abs(float(a) - float(b)))
        return acc

    def _block(self, diff):
        acc = np.zeros(diff.shape[0])
        for column in range(diff.shape[1]):
            acc = np.maximum(acc, np.abs(diff[:, column]))
        return acc


_METRIC_LOOKUP: Dict[str, Type[Metric]] = {
    METRIC_L2: L2Metric,
    METRIC_L1: L1Metric,
    METRIC_LINF: LInfMetric,
}


def metric_from(tag: str) -> Metric:
    """Return the metric registered under `tag`."""
    metric_type = _METRIC_LOOKUP.get(tag)
    if metric_type is None:
        raise ParameterError(f"Invalid metric [{tag}]")
    return metric_type()


@dataclass(frozen=True)
class PointSet:
    """Immutable point collection with its metric."""

    points: Tuple[Point, ...]
    metric: Metric = field(default_factory=L2Metric)
    label: str = ""

    @classmethod
    def from_coords(
        cls,
        coords: Iterable[Iterable[float]],
        metric: Optional[Metric] = None,
        label: str = "",
    ) -> "PointSet":
        """Build a point set from nested coordinate sequences."""
        points = tuple(tuple(float(value) for value in point) for point in coords)
        return cls(points, metric if metric is not None else L2Metric(), label)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        """Return dimension of the first point."""
        if not self.points:
            return 0
        return len(self.points[0])

    @cached_property
    def coords(self) -> np.ndarray:
        """Return coordinates as an (n, dim) array."""
        return np.asarray(self.points, dtype=float).reshape(len(self.points), self.dim)


def validate(point_set: PointSet):
    """Raise ValidationError on the first bad point of the set."""
    if not point_set.points:
        raise ValidationError("Empty point set")
    dim = point_set.dim
    if dim < 1:
        raise ValidationError("Point with no coordinates at index [0]", 0)
    seen = set()
    for index, point in enumerate(point_set.points):
        if len(point) != dim:
            raise ValidationError(
                f"Dimension mismatch at index [{index}]: [{len(point)}] != [{dim}]",
                index,
            )
        if not all(math.isfinite(value) for value in point):
            raise ValidationError(f"Non-finite coordinate at index [{index}]", index)
        if point in seen:
            raise ValidationError(f"Duplicate point at index [{index}]", index)
        seen.add(point)


def spread(point_set: PointSet) -> float:
    """Return diameter over closest-pair distance, by exhaustive pairs.

    Pairs are visited one row at a time, so memory stays linear in the set size.
    """
    if len(point_set) < 2:
        raise InputError(f"Spread undefined for [{len(point_set)}] point(s)")
    validate(point_set)
    coords = point_set.coords
    metric = point_set.metric
    diameter, closest = 0.0, math.inf
    for index in range(len(coords) - 1):
        row = metric.distances(coords[index], coords[index + 1 :])
        diameter = max(diameter, float(row.max()))
        closest = min(closest, float(row.min()))
    return diameter / closest


def parse_points(
    text: str, metric: Optional[Metric] = None, label: str = ""
) -> PointSet:
    """Parse point-file text and validate the resulting set."""
    rows = []
    dim = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = tuple(float(value) for value in _SEPARATOR.split(line) if value)
        except ValueError:
            raise InputError(f"Invalid coordinate on line [{lineno}]") from None
        if dim is None:
            dim = len(row)
        elif len(row) != dim:
            raise ValidationError(
                f"Dimension mismatch on line [{lineno}]: [{len(row)}] != [{dim}]",
                len(rows),
            )
        rows.append(row)

    if metric is None:
        metric = metric_from(DEFAULT_METRIC)
    point_set = PointSet(tuple(rows), metric, label)
    validate(point_set)
    return point_set


def read_points(
    path: str, metric: Optional[Metric] = None, label: Optional[str] = None
) -> PointSet:
    """Read a point file; the label defaults to the file name stem."""
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    try:
        with open(path, "r", encoding="utf-8") as points_file:
            text = points_file.read()
    except UnicodeDecodeError:
        raise InputError(f"Invalid UTF-8 in [{path}]") from None
    point_set = parse_points(text, metric, label)
    _LOGGER.debug(
        "Read %d points of dimension %d from %s", len(point_set), point_set.dim, path
    )
    return point_set
