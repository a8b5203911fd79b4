"""k-partial Hausdorff tests."""
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pyhausdorff.errors import InvariantError, ParameterError
from pyhausdorff.hausdorff import directed_hausdorff
from pyhausdorff.kpartial import (
    BucketQueue,
    bucket_index,
    finish_threshold,
    k_hausdorff_all,
    partial_hausdorff,
)
from pyhausdorff.metric import PointSet, spread
from pyhausdorff.oracle import exact_partial_all, nearest_neighbors
from pyhausdorff.viability import check_invariants

from .util import assert_sandwich, build, line, load_sample, random_set

_beta = st.floats(min_value=1.001, max_value=4.0)
_positive = st.floats(min_value=1e-9, max_value=1e9)


def test_bucket_index():
    assert bucket_index(21, 1.05) == 62
    assert bucket_index(1, 1.05) == -1
    assert bucket_index(0, 1.05) is None
    assert bucket_index(8, 2) == 2
    with pytest.raises(InvariantError):
        bucket_index(-1, 1.05)
    with pytest.raises(InvariantError):
        bucket_index(math.nan, 1.05)


def test_finish_threshold():
    assert finish_threshold(0.5, 1.05) == 63
    assert finish_threshold(8, 2) == 5
    assert finish_threshold(0, 1.05) == -math.inf
    with pytest.raises(InvariantError):
        finish_threshold(-1, 1.05)


@given(value=_positive, beta=_beta)
def test_bucket_index_brackets(value, beta):
    m = bucket_index(value, beta)
    assert beta ** m < value <= beta ** (m + 1)


@given(radius=_positive, beta=_beta)
def test_finish_threshold_is_least(radius, beta):
    s = finish_threshold(radius, beta)
    target = 2 * radius * beta / (beta - 1)
    assert beta ** s >= target
    assert beta ** (s - 1) < target


def test_bucket_queue():
    queue = BucketQueue(2.0)
    assert queue.push(1, 5.0) == 2
    assert queue.push(2, 6.0) == 2
    assert queue.push(3, 1.5) == 0
    assert queue.push(4, 0.0) is None
    assert len(queue) == 4
    assert queue.bucket_of(4) is None

    assert queue.push(3, 3.0) == 1
    queue.remove(2)
    assert 2 not in queue

    assert queue.pop_bucket(2) == (2, [1])
    assert queue.cursor == 2
    assert queue.pop_bucket(2) is None
    assert queue.pop_bucket(-math.inf) == (1, [3])
    assert queue.pop_bucket(-math.inf) is None
    assert queue.pop_zero() == [4]
    assert len(queue) == 0


def test_bucket_queue_rejects_second_sweep():
    queue = BucketQueue(2.0)
    queue.push(1, 5.0)
    queue.pop_bucket(0)
    queue.push(2, 5.0)
    with pytest.raises(InvariantError):
        queue.pop_bucket(0)

    with pytest.raises(ParameterError):
        BucketQueue(1.0)


def test_far_outlier():
    set_a = line(0.0, 1.0, 2.0, 50.0)
    result = k_hausdorff_all(build(set_a), build(line(0.0)), 0.1)
    assert len(result.deltas) == 4
    for delta, exact in zip(result.deltas, (50.0, 2.0, 1.0, 0.0)):
        assert_sandwich(delta, exact, 0.1)
    assert result.deltas[-1] == 0.0
    assert result.beta == pytest.approx(1.05)


def test_identical_sets():
    tree = build(load_sample("quad.txt"))
    assert k_hausdorff_all(tree, tree, 0.1).deltas == (0.0,) * 4


def test_singletons():
    result = k_hausdorff_all(build(line(0.0)), build(line(5.0)), 0.1)
    assert len(result.deltas) == 1
    assert_sandwich(result.deltas[0], 5.0, 0.1)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("eps", [0.05, 0.2, 1.0])
def test_sandwich(dim, eps):
    for seed in range(3):
        set_a = random_set(seed, 250, dim, label="a")
        set_b = random_set(seed + 70, 200, dim, label="b")
        result = k_hausdorff_all(build(set_a), build(set_b), eps)
        exact = exact_partial_all(set_a, set_b).values
        assert len(result.deltas) == len(exact)
        for delta, value in zip(result.deltas, exact):
            assert_sandwich(delta, value, eps)
        assert list(result.deltas) == sorted(result.deltas, reverse=True)
        assert result.stability_violations == 0
        assert result.growth_violations == 0

        union = PointSet.from_coords(list(set_a.points) + list(set_b.points))
        limit = math.ceil(math.log(spread(union)) / math.log(result.beta)) + 2
        assert result.finished_buckets <= limit


def test_outliers():
    set_b = random_set(12, 150, label="b")
    outliers = [(5.0, 5.0), (-4.0, 3.0), (9.0, -7.0)]
    set_a = PointSet.from_coords(
        list(random_set(13, 150).points) + outliers, label="a"
    )
    result = k_hausdorff_all(build(set_a), build(set_b), 0.1)
    exact = exact_partial_all(set_a, set_b).values
    for delta, value in zip(result.deltas, exact):
        assert_sandwich(delta, value, 0.1)
    assert result.deltas[3] < 1.0 < result.deltas[2]


def test_first_value_tracks_directed():
    set_a = random_set(40, 120)
    set_b = random_set(41, 120)
    tree_a, tree_b = build(set_a), build(set_b)
    delta = k_hausdorff_all(tree_a, tree_b, 0.1).deltas[0]
    bound = directed_hausdorff(tree_a, tree_b, 0.1).value
    assert delta <= bound * 1.1 * (1 + 1e-12)
    assert bound <= delta * 1.1 * (1 + 1e-12)


def test_invariants_hold_with_finished_nodes():
    set_a = random_set(60, 100, label="a")
    set_b = random_set(61, 90, label="b")
    nearest_b = nearest_neighbors(set_a, set_b)
    problems = []
    finished = []

    def check(record, graph):
        problems.extend(check_invariants(graph, nearest_b))
        finished.append(len(graph.removed_a))

    result = k_hausdorff_all(build(set_a), build(set_b), 0.2, trace=check)
    assert len(finished) == result.iterations
    assert problems == []


def test_partial_hausdorff():
    tree_a = build(line(0.0, 1.0, 2.0, 50.0))
    tree_b = build(line(0.0))
    assert_sandwich(partial_hausdorff(tree_a, tree_b, 1, 0.1), 2.0, 0.1)
    assert partial_hausdorff(tree_a, tree_b, 4, 0.1) == 0.0
    with pytest.raises(ParameterError):
        partial_hausdorff(tree_a, tree_b, 5, 0.1)
    with pytest.raises(ParameterError):
        partial_hausdorff(tree_a, tree_b, -1, 0.1)
    with pytest.raises(ParameterError):
        k_hausdorff_all(tree_a, tree_b, 0)
