import json
import os
import pathlib

import pytest

import adtree

DATA = pathlib.Path(os.environ.get("ADTREE_TEST_DATA_DIR", pathlib.Path(__file__).parents[1] / "data"))


@pytest.fixture(scope="module")
def toy():
    domains = json.loads((DATA / "toy.values.json").read_text())
    return adtree.load_csv(str(DATA / "toy.csv"), domains=domains)


def test_dataset_shape(toy):
    assert toy.names == ["a1", "a2", "a3"]
    assert toy.arities == [2, 4, 2]
    assert len(toy) == 6
    assert toy.row(1) == [2, 3, 1]


@pytest.mark.parametrize("r_min", [1, 4, 7])
def test_golden_counts(toy, r_min):
    tree = adtree.ADTree.build(toy, r_min)
    assert tree.count({"a1": 1}) == 3
    assert tree.count("a2=3,a3=1") == 4
    assert tree.count(None) == 6
    assert tree.count("a1=2,a2=4,a3=2") == 1


def test_tree_stats(toy):
    stats = adtree.ADTree.build(toy, 1).stats()
    assert stats["ad_nodes"] == 7
    assert stats["vary_nodes"] == 8


def test_contab(toy):
    tree = adtree.ADTree.build(toy, 1)
    table = tree.contab(["a1", "a3"])
    assert table == {(1, 1): 3, (2, 1): 2, (2, 2): 1}
    assert tree.contab(["a1", "a3"], "a2=3") == {(1, 1): 2, (2, 1): 2}
    assert table == adtree.linear_contab(toy, ["a1", "a3"])


def test_agrees_with_linear_count():
    data = adtree.synth(2000, seed=3)
    tree = adtree.ADTree.build(data, 8)
    tree.check_invariants()
    for q in ["", "t1=1", "t1=2,s1=1", "c1=1,c2=2"]:
        assert tree.count(q) == adtree.linear_count(data, q)


def test_learning(toy):
    tree = adtree.ADTree.build(toy, 1)
    assert tree.info_gain("a3", ["a2"]) == pytest.approx(0.650022, abs=1e-6)
    best = tree.rules("a3", 1, n=1, s_min=2, top=1)
    assert best[0][1:] == (4, 4)
    result = tree.hill_climb(iterations=200, restarts=2, seed=1)
    assert result["score"] == pytest.approx(-19.234668, abs=1e-6)


def test_bounds():
    b = adtree.memory_bounds(40, 15)
    assert b["row_limited"] == 10701
    assert adtree.memory_bounds(10, 256, 1, 0.25)["skewed"] == 386


def test_errors(toy):
    tree = adtree.ADTree.build(toy, 1)
    with pytest.raises(adtree.QueryError):
        tree.count("zz=1")
    assert issubclass(adtree.QueryError, adtree.AdtreeError)
    with pytest.raises(adtree.FormatError):
        adtree.parse_csv("a,b\n1\n")
    with pytest.raises(adtree.AdtreeError):
        adtree.load_csv(str(DATA / "missing.csv"))


def test_save_load(toy, tmp_path):
    tree = adtree.ADTree.build(toy, 4)
    path = tmp_path / "toy.adt"
    tree.save(str(path))
    back = adtree.ADTree.load(str(path), toy)
    assert back == tree
    assert back.r_min == 4
    assert back.count("a2=3") == 4
