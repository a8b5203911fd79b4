"""Command line tests."""
import json

import pytest

from pyhausdorff.cli import main
from pyhausdorff.const import EXIT_INCOMPATIBLE, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK
from pyhausdorff.errors import InvariantError
from pyhausdorff.gtree import load_tree
from pyhausdorff.metric import read_points
from pyhausdorff.oracle import exact_hausdorff

from .util import assert_sandwich, sample_path


def _build(tmp_path, sample: str, *extra: str) -> str:
    out = str(tmp_path / sample.replace(".txt", ".json"))
    assert main(["build", sample_path(sample), "--out", out, *extra]) == EXIT_OK
    return out


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_build(tmp_path, capsys):
    out = _build(tmp_path, "quad.txt")
    with open(out) as tree_file:
        doc = json.load(tree_file)
    assert doc["version"] == 1
    assert len(doc["nodes"]) == 7
    assert doc["perm"]["insertion_dist"][0] is None
    assert load_tree(out).label == "quad"

    err = capsys.readouterr().err
    assert "n=4" in err
    assert "height=2" in err
    assert "spread=" in err


def test_build_to_stdout(capsys):
    assert main(["build", sample_path("line.txt"), "--exact-greedy"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["alpha"] == 1.0
    assert doc["perm"]["order"] == [0, 1, 2, 3]


def test_build_errors(tmp_path):
    assert main(["build", sample_path("duplicate.txt")]) == EXIT_INPUT
    assert main(["build", str(tmp_path / "missing.txt")]) == EXIT_INPUT
    assert main(["build", sample_path("quad.txt"), "--alpha", "1"]) == EXIT_INPUT
    assert main(["build", sample_path("quad.txt"), "--alpha", "0.5"]) == EXIT_INPUT

    latin = tmp_path / "latin.txt"
    latin.write_bytes(b"0,0\n1,\xff\n")
    assert main(["build", str(latin)]) == EXIT_INPUT


def test_dist(tmp_path, capsys):
    first = _write(tmp_path, "a.txt", "0\n1\n2\n50\n")
    second = _write(tmp_path, "b.txt", "0\n")
    tree_a = _build(tmp_path, first)
    tree_b = _build(tmp_path, second)
    capsys.readouterr()

    assert main(["dist", tree_a, tree_b, "--eps", "0.1"]) == EXIT_OK
    captured = capsys.readouterr()
    assert_sandwich(float(captured.out), 50.0, 0.1)
    assert "iterations=" in captured.err
    assert "distance_calls=" in captured.err

    assert main(["dist", tree_b, tree_a, "--directed"]) == EXIT_OK
    assert float(capsys.readouterr().out) == 0.0


def test_dist_trace(tmp_path, capsys):
    tree_a = _build(tmp_path, "quad.txt")
    tree_b = _build(tmp_path, "hexad.txt")
    capsys.readouterr()
    assert main(["dist", tree_a, tree_b, "--trace"]) == EXIT_OK
    err = capsys.readouterr().err
    lines = [line for line in err.splitlines() if line.startswith("{")]
    assert lines
    record = json.loads(lines[0])
    assert record["iteration"] == 1
    assert set(record) >= {"radius", "edges", "max_degree", "bound"}


def test_dist_matches_oracle(tmp_path, capsys):
    tree_a = _build(tmp_path, "quad.txt")
    tree_b = _build(tmp_path, "hexad.txt")
    capsys.readouterr()
    assert main(["dist", tree_a, tree_b, "--eps", "0.05"]) == EXIT_OK
    exact = exact_hausdorff(
        read_points(sample_path("quad.txt")), read_points(sample_path("hexad.txt"))
    )
    assert_sandwich(float(capsys.readouterr().out), exact.value, 0.05)


def test_dist_incompatible(tmp_path):
    tree_a = _build(tmp_path, "quad.txt")
    tree_b = _build(tmp_path, "line.txt")
    assert main(["dist", tree_a, tree_b]) == EXIT_INCOMPATIBLE
    assert main(["dist", tree_a, tree_b, "--eps", "0"]) == EXIT_INPUT


def test_kdist(tmp_path, capsys):
    first = _write(tmp_path, "a.txt", "0\n1\n2\n50\n")
    second = _write(tmp_path, "b.txt", "0\n")
    tree_a = _build(tmp_path, first)
    tree_b = _build(tmp_path, second)
    out = str(tmp_path / "k.csv")
    capsys.readouterr()

    assert main(["kdist", tree_a, tree_b, "--header", "--out", out]) == EXIT_OK
    with open(out) as csv_file:
        lines = csv_file.read().splitlines()
    assert lines[0] == "k,delta"
    rows = [line.split(",") for line in lines[1:] if not line.startswith("#")]
    assert [int(k) for k, _ in rows] == [0, 1, 2, 3, 4]
    for (_, delta), exact in zip(rows, (50.0, 2.0, 1.0, 0.0, 0.0)):
        assert_sandwich(float(delta), exact, 0.1)
    assert "buckets=" in capsys.readouterr().err


def test_kdist_invariant_failure(tmp_path, monkeypatch):
    tree = _build(tmp_path, "quad.txt")

    def broken(*args, **kwargs):
        raise InvariantError("Bucket [3] swept twice")

    monkeypatch.setattr("pyhausdorff.cli.k_hausdorff_all", broken)
    assert main(["kdist", tree, tree]) == EXIT_INVARIANT


def test_pairwise(tmp_path, capsys):
    trees = tmp_path / "trees"
    trees.mkdir()
    for value in (0, 1, 5):
        points = _write(tmp_path, f"p{value}.txt", f"{value}\n")
        assert main(["build", points, "--out", str(trees / f"p{value}.json")]) == 0
    capsys.readouterr()

    assert main(["pairwise", str(trees), "--header"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.splitlines() == [
        ",p0,p1,p5",
        "p0,0.0,1.0,5.0",
        "p1,1.0,0.0,4.0",
        "p5,5.0,4.0,0.0",
    ]
    assert "tree_loads=3" in captured.err
    assert "directed_queries=6" in captured.err

    assert main(["pairwise", str(trees / "p0.json")]) == EXIT_INPUT


def test_pairwise_modes(tmp_path, capsys):
    trees = tmp_path / "trees"
    trees.mkdir()
    for name, text in (("near", "0\n1\n"), ("far", "0\n9\n")):
        points = _write(tmp_path, f"{name}.txt", text)
        assert main(["build", points, "--out", str(trees / f"{name}.json")]) == 0
    capsys.readouterr()

    assert main(["pairwise", str(trees), "--eps", "1e-6"]) == EXIT_OK
    default = capsys.readouterr().out
    assert main(["pairwise", str(trees), "--eps", "1e-6", "--symmetric"]) == EXIT_OK
    assert capsys.readouterr().out == default
    assert default.splitlines() == ["0.0,8.0", "8.0,0.0"]

    assert main(["pairwise", str(trees), "--eps", "1e-6", "--directed"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0.0,8.0", "1.0,0.0"]


def test_oracle(tmp_path, capsys):
    first = _write(tmp_path, "a.txt", "0\n1\n2\n50\n")
    second = _write(tmp_path, "b.txt", "0\n")

    assert main(["oracle", "dist", first, second]) == EXIT_OK
    assert capsys.readouterr().out == "50.0\n"

    assert main(["oracle", "dist", second, first, "--directed"]) == EXIT_OK
    assert capsys.readouterr().out == "0.0\n"

    assert main(["oracle", "kdist", first, second]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert [line for line in out if not line.startswith("#")] == [
        "0,50.0",
        "1,2.0",
        "2,1.0",
        "3,0.0",
        "4,0.0",
    ]

    tree = _build(tmp_path, first)
    capsys.readouterr()
    assert main(["oracle", "dist", tree, second]) == EXIT_OK
    assert capsys.readouterr().out == "50.0\n"


def test_stats(tmp_path, capsys):
    tree = _build(tmp_path, "quad.txt")
    capsys.readouterr()
    assert main(["stats", tree]) == EXIT_OK
    stats = dict(
        line.split("=", 1) for line in capsys.readouterr().out.splitlines()
    )
    assert stats["label"] == "quad"
    assert stats["n"] == "4"
    assert stats["nodes"] == "7"
    assert stats["height"] == "2"
    assert stats["violations"] == "0"
    assert float(stats["spread"]) == pytest.approx(4.962, abs=1e-3)


def test_stats_singleton(tmp_path, capsys):
    points = _write(tmp_path, "one.txt", "1,2\n")
    tree = str(tmp_path / "one.json")
    assert main(["build", points, "--out", tree]) == EXIT_OK
    capsys.readouterr()
    assert main(["stats", tree]) == EXIT_OK
    assert "spread=undefined" in capsys.readouterr().out


def test_generate(tmp_path, capsys):
    assert main(["generate", "20", "3", "--seed", "4"]) == EXIT_OK
    first = capsys.readouterr().out
    rows = first.splitlines()
    assert len(rows) == 20
    assert all(len(row.split(",")) == 3 for row in rows)
    assert all(0 <= float(value) < 1 for row in rows for value in row.split(","))

    out = str(tmp_path / "points.txt")
    assert main(["generate", "20", "3", "--seed", "4", "--out", out]) == EXIT_OK
    with open(out) as points_file:
        assert points_file.read() == first
    assert len(read_points(out)) == 20

    assert main(["generate", "0", "3"]) == EXIT_INPUT


def test_outputs_are_byte_identical(tmp_path):
    sets = []
    for seed in (1, 2, 3):
        path = str(tmp_path / f"g{seed}.txt")
        assert main(["generate", "150", "2", "--seed", str(seed), "--out", path]) == 0
        sets.append(path)

    def run(name: str):
        folder = tmp_path / name
        folder.mkdir()
        trees = []
        for points in sets:
            tree = str(folder / points.rsplit("/", 1)[-1].replace(".txt", ".json"))
            assert main(["build", points, "--out", tree]) == EXIT_OK
            trees.append(tree)
        first, second = trees[:2]
        for args in (
            ["dist", first, second, "--out", str(folder / "dist.txt")],
            ["kdist", first, second, "--header", "--out", str(folder / "k.csv")],
            ["pairwise", *trees, "--header", "--out", str(folder / "matrix.csv")],
        ):
            assert main(args) == EXIT_OK
        return {path.name: path.read_bytes() for path in folder.iterdir()}

    outputs = run("first")
    assert len(outputs) == 6
    assert run("second") == outputs
